// `acctest validate`: quick invariant checks on a freshly built binary.

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "acctest/accumulation.hpp"
#include "acctest/baselines.hpp"
#include "acctest/dosage.hpp"
#include "acctest/power_theory.hpp"
#include "acctest/rng.hpp"
#include "acctest/seqtest.hpp"
#include "acctest/simlab.hpp"
#include "commands.hpp"

namespace acctest::cli {
namespace {

std::vector<double> uniforms(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

bool integrals_are_one() {
  for (const auto* text : {"forwardstop", "seqstep:C=2", "hingeexp:C=2", "hingeexp:C=5",
                           "piecewise:0,0.5,0.4;0.5,1,1.6"}) {
    if (std::abs(unit_integral(AccumulationSpec::parse(text)) - 1.0) > 1e-8) return false;
  }
  return true;
}

bool cutoff_is_last_crossing() {
  const OrderedPValues p(uniforms(500, 11));
  const auto path = estimated_fdp_path(p, AccumulationSpec::seq_step(2.0));
  for (double alpha : {0.1, 0.5, 0.9}) {
    const auto k = select_cutoff(path, alpha);
    if (k > 0 && path[k - 1] > alpha) return false;
    for (std::size_t j = k; j < path.size(); ++j) {
      if (path[j] <= alpha) return false;
    }
  }
  return true;
}

bool plus_path_matches_sum() {
  const auto v = uniforms(200, 12);
  const OrderedPValues p(v);
  const auto spec = AccumulationSpec::hinge_exp(2.0);
  const auto path = estimated_fdp_path_plus(p, spec, 2.0);
  double s = 0.0;
  for (std::size_t k = 1; k <= v.size(); ++k) {
    s += spec(v[k - 1]);
    if (std::abs(path[k - 1] - (2.0 + s) / (1.0 + k)) > 1e-12 * (1.0 + s)) return false;
  }
  return true;
}

bool bh_matches_step_up() {
  auto v = uniforms(300, 13);
  for (std::size_t i = 0; i < 30; ++i) v[i] *= 1e-3;
  const auto r = bh_select(v, 0.1);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  std::size_t k = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] <= 0.1 * static_cast<double>(i + 1) / static_cast<double>(sorted.size())) k = i + 1;
  }
  return r.count == k && r.indices.size() == k;
}

bool welch_directions_sum_to_one() {
  Rng rng(14);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(4), b(6);
    for (auto& x : a) x = rng.normal(0.5, 1.0);
    for (auto& x : b) x = rng.normal();
    const double s = welch_p_one_sided(a, b, Sign::Plus) + welch_p_one_sided(a, b, Sign::Minus);
    if (std::abs(s - 1.0) > 1e-12) return false;
  }
  return true;
}

bool permutation_on_grid() {
  Rng rng(15);
  std::vector<double> v(10);
  for (auto& x : v) x = rng.normal();
  const auto partitions = partition_count(5, 5);
  const double p = permutation_pvalue(v, 5, 5, Sign::Plus);
  const double scaled = p * static_cast<double>(partitions);
  return p >= 1.0 / static_cast<double>(partitions) && p <= 1.0 &&
         std::abs(scaled - std::round(scaled)) < 1e-9;
}

bool flat_curve_has_full_power() {
  const auto f = SignalCurve::constant(1.0, 1e-6);
  return asymptotic_threshold(f, 0.6, 0.5) == 1.0 && asymptotic_power(f, 0.6, 0.5) == 1.0;
}

bool seqstep_plus_controls_fdr(unsigned threads) {
  SimConfig cfg;
  cfg.n = 500;
  cfg.n_nonnull = 50;
  cfg.trials = 100;
  cfg.alpha_grid = {0.2};
  cfg.seed = 16;
  const std::vector<Method> methods{Method::parse("seqstep+:C=2")};
  const auto r = simulate(cfg, methods, false, threads);
  const auto& c = r.cells[0][0];
  return c.mean_fdp <= 0.2 + 4.0 * c.se_fdp;
}

bool simulation_thread_invariant(unsigned threads) {
  SimConfig cfg;
  cfg.n = 300;
  cfg.n_nonnull = 30;
  cfg.trials = 16;
  cfg.seed = 17;
  const auto methods = default_methods();
  const auto a = simulate(cfg, methods, true, 1);
  const auto b = simulate(cfg, methods, true, std::max(threads, 2u));
  for (std::size_t m = 0; m < a.cells.size(); ++m) {
    for (std::size_t j = 0; j < a.cells[m].size(); ++j) {
      if (a.cells[m][j].mean_fdp != b.cells[m][j].mean_fdp ||
          a.cells[m][j].mean_power != b.cells[m][j].mean_power) {
        return false;
      }
    }
  }
  return a.mean_fdp_hat_paths == b.mean_fdp_hat_paths;
}

}  // namespace

int run_validate(std::ostream& out, unsigned threads) {
  const std::vector<std::pair<std::string, std::function<bool()>>> checks{
      {"accumulation functions integrate to one", integrals_are_one},
      {"cutoff is the last crossing of the path", cutoff_is_last_crossing},
      {"plus-rule path matches its running sum", plus_path_matches_sum},
      {"BH agrees with the step-up definition", bh_matches_step_up},
      {"one-sided Welch p-values sum to one", welch_directions_sum_to_one},
      {"permutation p-value lies on the 1/P grid", permutation_on_grid},
      {"flat signal curve gives T = 1 and power 1", flat_curve_has_full_power},
      {"SeqStep+ FDR within alpha + 4 SE", [threads] { return seqstep_plus_controls_fdr(threads); }},
      {"simulation independent of thread count", [threads] { return simulation_thread_invariant(threads); }},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    bool ok = false;
    std::string note;
    try {
      ok = check();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << name << note << '\n';
    if (!ok) ++failed;
  }
  out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
  return failed == 0 ? kExitOk : kExitNumeric;
}

}  // namespace acctest::cli
