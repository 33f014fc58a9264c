#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acctest/errors.hpp"
#include "acctest/simlab.hpp"

using namespace acctest;

namespace {
SimConfig small_config(std::uint64_t seed) {
  SimConfig c;
  c.n = 300;
  c.n_nonnull = 30;
  c.trials = 6;
  c.seed = seed;
  return c;
}

std::vector<double> sorted_values(const OrderedPValues& p) {
  std::vector<double> v(p.values().begin(), p.values().end());
  std::sort(v.begin(), v.end());
  return v;
}
}  // namespace

TEST(SimConfig, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_nonnull = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = SimConfig{};
  c.n_nonnull = c.n;
  EXPECT_THROW(c.validate(), ValidationError);
  c = SimConfig{};
  c.alpha_grid = {0.1, 1.0};
  EXPECT_THROW(c.validate(), ValidationError);
  c = SimConfig{};
  c.trials = 0;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Defaults, MatchTheStudyDesign) {
  const auto grid = default_alpha_grid();
  ASSERT_EQ(grid.size(), 9u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.05);
  EXPECT_DOUBLE_EQ(grid.back(), 0.25);
  const auto m = default_methods();
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m[0].to_string(), "seqstep:C=2");
  EXPECT_EQ(m[1].to_string(), "seqstep+:C=2");
  EXPECT_EQ(m[2].to_string(), "forwardstop");
  EXPECT_EQ(m[3].to_string(), "hingeexp:C=2");
}

TEST(GenerateRankedTrial, Deterministic) {
  const auto c = small_config(5);
  const auto a = generate_ranked_trial(c, 3);
  const auto b = generate_ranked_trial(c, 3);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  EXPECT_EQ(a.null_mask(), b.null_mask());
  const auto other = generate_ranked_trial(c, 4);
  EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), other.values().begin()));
  EXPECT_EQ(std::count(a.null_mask().begin(), a.null_mask().end(), false), 30);
}

TEST(GenerateRankedTrial, NullPValuesAreUniform) {
  SimConfig c;
  c.n = 100000;
  c.n_nonnull = 1;
  c.mu1 = 0.0;
  c.mu2 = 0.0;
  c.seed = 17;
  const auto v = sorted_values(generate_ranked_trial(c, 0));
  double d = 0.0;
  const auto n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::max({d, std::fabs((i + 1) / n - v[i]), std::fabs(v[i] - i / n)});
  }
  // Kolmogorov-Smirnov 1% critical value ~ 1.628 / sqrt(n).
  EXPECT_LT(d, 1.628 / std::sqrt(n));
}

TEST(GenerateRankedTrial, PerfectSeparationPutsNonNullsFirst) {
  auto c = small_config(2);
  c.mu1 = 1e6;
  const auto p = generate_ranked_trial(c, 0);
  for (std::size_t i = 0; i < c.n; ++i) EXPECT_EQ(p.null_mask()[i], i >= c.n_nonnull);
}

TEST(RunTrial, AllZeroPValues) {
  const std::size_t n = 10;
  NullMask mask(n, true);
  mask[0] = mask[3] = false;
  const OrderedPValues p(std::vector<double>(n, 0.0), mask);
  const auto methods = default_methods();
  const std::vector<double> alphas{0.1, 0.2};
  const auto t = run_trial(p, std::vector<Method>{methods[0], methods[2], methods[3]}, alphas);
  for (const auto& row : t.cells) {
    for (const auto& cell : row) {
      EXPECT_EQ(cell.k_hat, n);
      EXPECT_EQ(cell.power, 1.0);
      EXPECT_NEAR(cell.fdp, 0.8, 1e-15);
    }
  }
}

TEST(RunTrial, AllOnesUnderSeqStep) {
  NullMask mask{false, true, true};
  const OrderedPValues p(std::vector<double>(3, 1.0), mask);
  const std::vector<Method> m{Method::parse("seqstep:C=2")};
  const auto t = run_trial(p, m, std::vector<double>{0.2});
  EXPECT_EQ(t.cells[0][0].k_hat, 0u);
  EXPECT_EQ(t.cells[0][0].power, 0.0);
  EXPECT_EQ(t.cells[0][0].fdp, 0.0);
}

TEST(RunTrial, FiveValueInstanceMatchesBruteForce) {
  // mask true = null. k_hat = 1 at alpha 0.5; the first hypothesis is a
  // non-null and there are two non-nulls in total.
  const OrderedPValues p({0.01, 0.95, 0.02, 0.8, 0.9}, NullMask{false, true, false, true, true});
  const std::vector<Method> m{Method::parse("seqstep:C=2")};
  const auto t = run_trial(p, m, std::vector<double>{0.5}, true);
  EXPECT_EQ(t.cells[0][0].k_hat, 1u);
  EXPECT_EQ(t.cells[0][0].power, power_of_cutoff(1, p));
  EXPECT_EQ(t.cells[0][0].power, 0.5);
  EXPECT_EQ(t.cells[0][0].fdp, 0.0);
  EXPECT_EQ(t.fdp_true_path, (std::vector<double>{0.0, 0.5, 1.0 / 3.0, 0.5, 0.6}));
}

TEST(RunTrial, AgreesWithSeqtestPrimitives) {
  const auto c = small_config(9);
  const auto methods = default_methods();
  for (std::size_t trial = 0; trial < 5; ++trial) {
    const auto p = generate_ranked_trial(c, trial);
    const auto t = run_trial(p, methods, c.alpha_grid);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      for (std::size_t a = 0; a < c.alpha_grid.size(); ++a) {
        const auto k = accumulation_test(p, methods[m], c.alpha_grid[a]).k_hat;
        EXPECT_EQ(t.cells[m][a].k_hat, k);
        EXPECT_EQ(t.cells[m][a].fdp, fdp(k, p));
        EXPECT_EQ(t.cells[m][a].power, power_of_cutoff(k, p));
        EXPECT_EQ(t.cells[m][a].false_pos, false_positives(k, p.null_mask()));
      }
    }
  }
}

TEST(Aggregate, Arithmetic) {
  const std::vector<Method> m{Method::parse("forwardstop")};
  const std::vector<double> alphas{0.1};
  TrialTable a, b;
  a.cells = {{MethodOutcome{1, 0, 0.2, 0.0}}};
  b.cells = {{MethodOutcome{2, 1, 0.4, 0.5}}};
  const std::vector<TrialTable> two{a, b};
  const auto r = aggregate(two, m, alphas);
  EXPECT_NEAR(r.cells[0][0].mean_power, 0.3, 1e-15);
  EXPECT_NEAR(r.cells[0][0].se_power, 0.1, 1e-15);
  EXPECT_NEAR(r.cells[0][0].mean_fdp, 0.25, 1e-15);

  const std::vector<TrialTable> same{a, a};
  EXPECT_EQ(aggregate(same, m, alphas).cells[0][0].se_power, 0.0);
  const std::vector<TrialTable> one{b};
  const auto single = aggregate(one, m, alphas);
  EXPECT_EQ(single.cells[0][0].mean_power, 0.4);
  EXPECT_EQ(single.cells[0][0].se_power, 0.0);
}

TEST(Aggregate, ShapeErrors) {
  const std::vector<Method> m{Method::parse("forwardstop")};
  const std::vector<double> alphas{0.1};
  EXPECT_THROW(aggregate(std::vector<TrialTable>{}, m, alphas), ContractError);
  TrialTable a;
  a.cells = {{MethodOutcome{}, MethodOutcome{}}};
  EXPECT_THROW(aggregate(std::vector<TrialTable>{a}, m, alphas), ContractError);
}

TEST(Aggregate, PairwiseSumIsOrderFixedAndAccurate) {
  std::vector<double> v(1000, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 100.0, 1e-12);
  const auto ms = mean_and_se(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(ms.mean, 2.5);
  EXPECT_NEAR(ms.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

TEST(Simulate, ThreadCountDoesNotChangeOutput) {
  const auto c = small_config(21);
  const auto methods = default_methods();
  std::ostringstream s1, s8, p1, p8;
  const auto r1 = simulate(c, methods, true, 1);
  const auto r8 = simulate(c, methods, true, 8);
  write_summary_csv(s1, r1);
  write_summary_csv(s8, r8);
  write_path_csv(p1, r1);
  write_path_csv(p8, r8);
  EXPECT_EQ(s1.str(), s8.str());
  EXPECT_EQ(p1.str(), p8.str());
  EXPECT_EQ(s1.str().substr(0, s1.str().find('\n')), "method,alpha,mean_power,se_power,mean_fdp,se_fdp");
  EXPECT_EQ(p1.str().substr(0, p1.str().find('\n')), "method,k,mean_fdp_hat,mean_fdp_true");
}

TEST(Simulate, ResultInvariants) {
  const auto c = small_config(4);
  const auto r = simulate(c, default_methods(), true, 2);
  for (const auto& row : r.cells) {
    for (const auto& cell : row) {
      EXPECT_GE(cell.mean_power, 0.0);
      EXPECT_LE(cell.mean_power, 1.0);
      EXPECT_GE(cell.mean_fdp, 0.0);
      EXPECT_LE(cell.mean_fdp, 1.0);
      EXPECT_GE(cell.se_power, 0.0);
      EXPECT_GE(cell.se_fdp, 0.0);
    }
  }
  ASSERT_EQ(r.mean_fdp_hat_paths.size(), 4u);
  EXPECT_EQ(r.mean_fdp_true_path.size(), c.n);
}

TEST(Simulate, NoSignalGivesNearZeroPower) {
  auto c = small_config(8);
  c.mu2 = 0.0;
  c.trials = 20;
  const auto r = simulate(c, default_methods(), false, 2);
  for (const auto& row : r.cells) {
    for (const auto& cell : row) EXPECT_LT(cell.mean_power, 0.1);
  }
}

TEST(PlantedMask, TracksCurve) {
  const auto f = SignalCurve::parse("f:0,0.5;1,0.3", 0.2);
  const std::size_t n = 10000;
  const auto mask = planted_null_mask(f, n);
  std::size_t nonnull = 0;
  double worst_late = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    nonnull += mask[k - 1] ? 0 : 1;
    const double dev = std::fabs(static_cast<double>(nonnull) / k - f(static_cast<double>(k) / n));
    EXPECT_LE(dev, 1.0 / k + 1e-12) << "k=" << k;
    if (k >= 100) worst_late = std::max(worst_late, dev);
  }
  EXPECT_LE(worst_late, 2.0 / std::sqrt(static_cast<double>(n)));
}

TEST(PlantedMask, ConstantCurves) {
  const auto zero = planted_null_mask(SignalCurve::constant(0.0, 0.1), 50);
  EXPECT_EQ(std::count(zero.begin(), zero.end(), true), 50);
  const auto one = planted_null_mask(SignalCurve::constant(1.0, 0.1), 50);
  EXPECT_EQ(std::count(one.begin(), one.end(), false), 50);
  EXPECT_THROW(planted_null_mask(SignalCurve::parse("f:0,0.5;1,0", 0.1), 50), ContractError);
}

TEST(GenerateFromCurve, UsesDensityForNonNulls) {
  const auto f = SignalCurve::constant(1.0, 0.1);
  const auto p = generate_from_curve(f, 20000, AlternativeDensity::beta(1.0, 2.0), 3);
  double s = 0.0;
  for (double v : p.values()) s += v;
  // Beta(1,2) mean 1/3, sd sqrt(1/18)
  EXPECT_NEAR(s / 20000, 1.0 / 3.0, 4 * std::sqrt(1.0 / 18.0 / 20000));
}

TEST(BernoulliMartingale, MeanStaysBelowInverseRate) {
  const auto stats = simulate_bernoulli_martingale(100, 0.5, 4000, 12, 2);
  EXPECT_LE(stats.final_value.mean, 2.0 + 4 * stats.final_value.se);
  EXPECT_LE(stats.stopped_value.mean, 2.0 + 4 * stats.stopped_value.se);
  EXPECT_GT(stats.final_value.mean, 0.5);
}
