#include "acctest/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "acctest/csv.hpp"
#include "acctest/errors.hpp"
#include "acctest/parallel.hpp"

namespace acctest {

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(0.05 + 0.025 * i);
  return grid;
}

std::vector<Method> default_methods() {
  return {Method::parse("seqstep:C=2"), Method::parse("seqstep+:C=2"),
          Method::parse("forwardstop"), Method::parse("hingeexp:C=2")};
}

void SimConfig::validate() const {
  if (!(n_nonnull > 0 && n_nonnull < n)) {
    throw ValidationError("simulation needs 0 < n_nonnull < n");
  }
  if (alpha_grid.empty()) throw ValidationError("alpha grid is empty");
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("alpha values must lie in (0,1)");
  }
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (!std::isfinite(mu1) || !std::isfinite(mu2)) throw ValidationError("mu1, mu2 must be finite");
}

OrderedPValues generate_ranked_trial(const SimConfig& config, std::size_t trial_index) {
  config.validate();
  const std::size_t n = config.n;
  Rng rng(child_seed(config.seed, trial_index));

  // Hypotheses 0..n_nonnull-1 are the non-nulls before ranking.
  std::vector<double> prior(n);
  for (std::size_t j = 0; j < n; ++j) {
    prior[j] = std::fabs(rng.normal(j < config.n_nonnull ? config.mu1 : 0.0));
  }
  std::vector<double> pvalue(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double z = rng.normal(j < config.n_nonnull ? config.mu2 : 0.0);
    pvalue[j] = std::erfc(std::fabs(z) / std::numbers::sqrt2);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return prior[a] > prior[b]; });

  std::vector<double> ranked(n);
  NullMask mask(n);
  for (std::size_t i = 0; i < n; ++i) {
    ranked[i] = pvalue[order[i]];
    mask[i] = order[i] >= config.n_nonnull;
  }
  return OrderedPValues(std::move(ranked), std::move(mask));
}

TrialTable run_trial(const OrderedPValues& pvals, std::span<const Method> methods,
                     std::span<const double> alpha_grid, bool record_paths) {
  const auto& mask = pvals.null_mask();
  const std::size_t n = pvals.size();

  // Prefix counts so every (method, alpha) cell is O(1) after the paths.
  std::vector<std::size_t> nulls_before(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) nulls_before[i + 1] = nulls_before[i] + (mask[i] ? 1 : 0);
  const std::size_t total_nonnull = n - nulls_before[n];
  if (total_nonnull == 0) throw ContractError("run_trial: power undefined without non-nulls");

  TrialTable table;
  table.cells.resize(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const auto& method = methods[m];
    auto path = method.rule == Rule::Plain
                    ? estimated_fdp_path(pvals, method.spec)
                    : estimated_fdp_path_plus(pvals, method.spec, method.plus_c);
    for (double alpha : alpha_grid) {
      const std::size_t k = select_cutoff(path, alpha);
      const std::size_t fp = nulls_before[k];
      MethodOutcome out;
      out.k_hat = k;
      out.false_pos = fp;
      out.power = static_cast<double>(k - fp) / static_cast<double>(total_nonnull);
      out.fdp = k == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(k);
      table.cells[m].push_back(out);
    }
    if (record_paths) table.fdp_hat_paths.push_back(std::move(path));
  }
  if (record_paths) {
    table.fdp_true_path.resize(n);
    for (std::size_t k = 1; k <= n; ++k) {
      table.fdp_true_path[k - 1] = static_cast<double>(nulls_before[k]) / static_cast<double>(k);
    }
  }
  return table;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanSe mean_and_se(std::span<const double> values) {
  if (values.empty()) throw ContractError("mean_and_se: no values");
  const auto n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  if (values.size() == 1 || !std::isfinite(mean)) return {mean, 0.0};
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

AggregateResult aggregate(std::span<const TrialTable> tables, std::span<const Method> methods,
                          std::span<const double> alpha_grid) {
  if (tables.empty()) throw ContractError("aggregate: no trials");
  const bool paths = !tables.front().fdp_hat_paths.empty();
  for (const auto& t : tables) {
    if (t.cells.size() != methods.size()) throw ContractError("aggregate: method count mismatch");
    for (const auto& row : t.cells) {
      if (row.size() != alpha_grid.size()) throw ContractError("aggregate: alpha count mismatch");
    }
    if (paths != !t.fdp_hat_paths.empty() ||
        (paths && (t.fdp_hat_paths.size() != methods.size() ||
                   t.fdp_true_path.size() != tables.front().fdp_true_path.size()))) {
      throw ContractError("aggregate: path tables differ in shape");
    }
    for (const auto& p : t.fdp_hat_paths) {
      if (p.size() != tables.front().fdp_true_path.size()) {
        throw ContractError("aggregate: path lengths differ");
      }
    }
  }

  AggregateResult result;
  result.trials = tables.size();
  result.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  for (const auto& m : methods) result.methods.push_back(m.to_string());

  std::vector<double> power(tables.size());
  std::vector<double> fdp_values(tables.size());
  result.cells.resize(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
      for (std::size_t t = 0; t < tables.size(); ++t) {
        power[t] = tables[t].cells[m][a].power;
        fdp_values[t] = tables[t].cells[m][a].fdp;
      }
      const auto p = mean_and_se(power);
      const auto f = mean_and_se(fdp_values);
      result.cells[m].push_back(CellStats{p.mean, p.se, f.mean, f.se});
    }
  }

  if (paths) {
    const std::size_t n = tables.front().fdp_true_path.size();
    std::vector<double> column(tables.size());
    auto column_mean = [&](auto&& get) {
      for (std::size_t t = 0; t < tables.size(); ++t) column[t] = get(tables[t]);
      return pairwise_sum(column) / static_cast<double>(tables.size());
    };
    result.mean_fdp_hat_paths.assign(methods.size(), std::vector<double>(n));
    result.mean_fdp_true_path.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      result.mean_fdp_true_path[k] = column_mean([&](const TrialTable& t) { return t.fdp_true_path[k]; });
      for (std::size_t m = 0; m < methods.size(); ++m) {
        result.mean_fdp_hat_paths[m][k] =
            column_mean([&](const TrialTable& t) { return t.fdp_hat_paths[m][k]; });
      }
    }
  }
  return result;
}

std::vector<TrialTable> run_trials(const SimConfig& config, std::span<const Method> methods,
                                   bool record_paths, unsigned threads) {
  config.validate();
  std::vector<TrialTable> tables(config.trials);
  parallel_for(config.trials, threads, [&](std::size_t t) {
    tables[t] = run_trial(generate_ranked_trial(config, t), methods, config.alpha_grid, record_paths);
  });
  return tables;
}

AggregateResult simulate(const SimConfig& config, std::span<const Method> methods,
                         bool record_paths, unsigned threads) {
  const auto tables = run_trials(config, methods, record_paths, threads);
  return aggregate(tables, methods, config.alpha_grid);
}

void write_summary_csv(std::ostream& out, const AggregateResult& result) {
  out << "method,alpha,mean_power,se_power,mean_fdp,se_fdp\n";
  for (std::size_t m = 0; m < result.methods.size(); ++m) {
    for (std::size_t a = 0; a < result.alpha_grid.size(); ++a) {
      const auto& c = result.cells[m][a];
      out << csv_field(result.methods[m]) << ',' << format_number(result.alpha_grid[a]) << ','
          << format_number(c.mean_power) << ',' << format_number(c.se_power) << ','
          << format_number(c.mean_fdp) << ',' << format_number(c.se_fdp) << '\n';
    }
  }
}

void write_path_csv(std::ostream& out, const AggregateResult& result) {
  out << "method,k,mean_fdp_hat,mean_fdp_true\n";
  for (std::size_t m = 0; m < result.mean_fdp_hat_paths.size(); ++m) {
    const auto& path = result.mean_fdp_hat_paths[m];
    for (std::size_t k = 0; k < path.size(); ++k) {
      out << csv_field(result.methods[m]) << ',' << (k + 1) << ',' << format_number(path[k]) << ','
          << format_number(result.mean_fdp_true_path[k]) << '\n';
    }
  }
}

NullMask planted_null_mask(const SignalCurve& curve, std::size_t n) {
  if (n == 0) throw DomainError("planted_null_mask: n must be positive");
  const auto report = validate_signal_curve(curve, 0.0);
  if (!report.structural()) {
    throw ContractError("signal curve cannot be planted: " + report.message);
  }
  NullMask mask(n, true);
  long placed = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const auto target = static_cast<long>(std::floor(kd * curve(kd / static_cast<double>(n)) + 0.5));
    if (target > placed) {
      mask[k - 1] = false;
      ++placed;
    }
  }
  return mask;
}

OrderedPValues generate_from_curve(const SignalCurve& curve, std::size_t n,
                                   const AlternativeDensity& density, std::uint64_t seed) {
  auto mask = planted_null_mask(curve, n);
  Rng rng(seed);
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = mask[i] ? rng.uniform() : density.sample(rng);
  return OrderedPValues(std::move(p), std::move(mask));
}

MartingaleStats simulate_bernoulli_martingale(std::size_t n, double rho, std::size_t replicates,
                                              std::uint64_t seed, unsigned threads) {
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("martingale: rho outside (0,1]");
  if (n == 0 || replicates == 0) throw DomainError("martingale: n and replicates must be positive");
  constexpr double kNonNullRate = 0.1;  // indicator rate at non-null positions
  constexpr double kThreshold = 0.4;    // khat = max{k : sum_{i<=k} B_i <= 0.4 k}

  std::vector<double> final_values(replicates);
  std::vector<double> stopped_values(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    Rng rng(child_seed(seed, r));
    std::vector<double> m_path(n + 1, 1.0);
    std::size_t nulls = 0;
    std::size_t null_hits = 0;
    std::size_t all_hits = 0;
    std::size_t khat = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const bool is_null = rng.bernoulli(0.5);
      const bool b = rng.bernoulli(is_null ? rho : kNonNullRate);
      if (is_null) {
        ++nulls;
        null_hits += b ? 1 : 0;
      }
      all_hits += b ? 1 : 0;
      m_path[k] = (1.0 + static_cast<double>(nulls)) / (1.0 + static_cast<double>(null_hits));
      if (static_cast<double>(all_hits) <= kThreshold * static_cast<double>(k)) khat = k;
    }
    final_values[r] = m_path[n];
    stopped_values[r] = m_path[khat];
  });
  return {mean_and_se(final_values), mean_and_se(stopped_values)};
}

}  // namespace acctest
