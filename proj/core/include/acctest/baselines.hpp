#pragma once

// Unordered FDR baselines: Benjamini-Hochberg and Storey's adaptive variant.

#include <cstddef>
#include <span>
#include <vector>

namespace acctest {

struct RejectionSet {
  std::size_t count = 0;
  /// Rank k of the BH threshold p_(k) in ascending order (0: nothing rejected).
  std::size_t threshold_index = 0;
  /// Original indices of the rejected hypotheses, ascending.
  std::vector<std::size_t> indices;
};

/// Step-up Benjamini-Hochberg at level alpha in [0,1].
RejectionSet bh_select(std::span<const double> pvals, double alpha);

/// Storey's procedure: m0_hat = #{p > lambda} / (1 - lambda), clamped to
/// [1, n], replaces n in the BH thresholds.
RejectionSet storey_select(std::span<const double> pvals, double alpha, double lambda = 0.9);

/// The clamped null-count estimate used by storey_select.
double storey_null_estimate(std::span<const double> pvals, double lambda);

}  // namespace acctest
