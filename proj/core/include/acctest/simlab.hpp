#pragma once

// Monte Carlo laboratory: the ranked z-test simulation, per-trial scoring,
// aggregation across trials, and curve-driven sequence generation.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "acctest/density.hpp"
#include "acctest/power_theory.hpp"
#include "acctest/seqtest.hpp"

namespace acctest {

/// 0.05, 0.075, ..., 0.25.
std::vector<double> default_alpha_grid();

/// SeqStep, SeqStep+, ForwardStop and HingeExp, all with C = 2.
std::vector<Method> default_methods();

struct SimConfig {
  std::size_t n = 1000;
  std::size_t n_nonnull = 100;
  double mu1 = 3.0;  // separation of the prior ranking
  double mu2 = 3.0;  // signal strength of the p-values
  std::vector<double> alpha_grid = default_alpha_grid();
  std::size_t trials = 50;
  std::uint64_t seed = 0;

  /// Throws ValidationError unless 0 < n_nonnull < n, alphas in (0,1) and
  /// trials >= 1.
  void validate() const;
};

/// One trial of the ranked z-test design: prior z-scores order the
/// hypotheses by |Z| (descending, ties by index), then fresh z-scores give
/// two-sided p-values. Deterministic in (config.seed, trial_index).
OrderedPValues generate_ranked_trial(const SimConfig& config, std::size_t trial_index);

struct MethodOutcome {
  std::size_t k_hat = 0;
  std::size_t false_pos = 0;
  double power = 0.0;
  double fdp = 0.0;
};

struct TrialTable {
  std::vector<std::vector<MethodOutcome>> cells;   // [method][alpha]
  std::vector<std::vector<double>> fdp_hat_paths;  // [method][k-1], optional
  std::vector<double> fdp_true_path;               // [k-1], optional
};

TrialTable run_trial(const OrderedPValues& pvals, std::span<const Method> methods,
                     std::span<const double> alpha_grid, bool record_paths = false);

struct CellStats {
  double mean_power = 0.0;
  double se_power = 0.0;
  double mean_fdp = 0.0;
  double se_fdp = 0.0;
};

struct AggregateResult {
  std::vector<std::string> methods;
  std::vector<double> alpha_grid;
  std::size_t trials = 0;
  std::vector<std::vector<CellStats>> cells;            // [method][alpha]
  std::vector<std::vector<double>> mean_fdp_hat_paths;  // [method][k-1]; empty without paths
  std::vector<double> mean_fdp_true_path;               // [k-1]
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Mean and standard error (sample sd / sqrt(n)); fixed-shape pairwise sums.
MeanSe mean_and_se(std::span<const double> values);

/// Pairwise summation with a fixed tree shape (bitwise reproducible).
double pairwise_sum(std::span<const double> values);

/// ContractError on empty input or tables of differing shape.
AggregateResult aggregate(std::span<const TrialTable> tables, std::span<const Method> methods,
                          std::span<const double> alpha_grid);

std::vector<TrialTable> run_trials(const SimConfig& config, std::span<const Method> methods,
                                   bool record_paths, unsigned threads);

AggregateResult simulate(const SimConfig& config, std::span<const Method> methods,
                         bool record_paths, unsigned threads);

/// method,alpha,mean_power,se_power,mean_fdp,se_fdp
void write_summary_csv(std::ostream& out, const AggregateResult& result);
/// method,k,mean_fdp_hat,mean_fdp_true
void write_path_csv(std::ostream& out, const AggregateResult& result);

/// Non-null indicator per position such that the running non-null count is
/// round(k f(k/n)). ContractError if the curve is not structurally valid.
NullMask planted_null_mask(const SignalCurve& curve, std::size_t n);

/// Planted positions from `curve`; non-null p-values from `density`, null
/// p-values uniform.
OrderedPValues generate_from_curve(const SignalCurve& curve, std::size_t n,
                                   const AlternativeDensity& density, std::uint64_t seed);

struct MartingaleStats {
  MeanSe final_value;    // M_n
  MeanSe stopped_value;  // M at a reverse-time stopping time
};

/// Bernoulli(rho) indicators on a random interleaving of nulls and
/// non-nulls; reports E[M_n] and E[M_khat] for
/// M_k = (1 + #nulls <= k) / (1 + sum of null indicators <= k).
MartingaleStats simulate_bernoulli_martingale(std::size_t n, double rho, std::size_t replicates,
                                              std::uint64_t seed, unsigned threads);

}  // namespace acctest
