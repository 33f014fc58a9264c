#pragma once

// Accumulation tests on an ordered list of p-values: estimated-FDP paths,
// the adaptive cutoff, and ground-truth FDP / mFDP / power.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acctest/accumulation.hpp"

namespace acctest {

/// true at position i  <=>  hypothesis i is null.
using NullMask = std::vector<bool>;

/// p-values in rank order (index 0 is the hypothesis ranked first), with an
/// optional ground-truth null mask.
class OrderedPValues {
 public:
  /// Throws ValidationError if a value is outside [0,1] or NaN, or the mask
  /// length differs.
  explicit OrderedPValues(std::vector<double> values);
  OrderedPValues(std::vector<double> values, NullMask null_mask);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool has_mask() const { return mask_.has_value(); }
  /// Throws ContractError when no mask is attached.
  const NullMask& null_mask() const;

 private:
  std::vector<double> values_;
  std::optional<NullMask> mask_;
};

enum class Rule {
  Plain,  // FDP_hat(k) = sum_{i<=k} h(p_i) / k
  PlusC,  // FDP_hat(k) = (c + sum_{i<=k} h(p_i)) / (1 + k)
};

struct CutoffResult {
  std::size_t k_hat = 0;
  std::vector<double> fdp_hat_path;  // entry k-1 holds FDP_hat(k)
  Rule rule = Rule::Plain;
  double alpha = 0.0;
  double c_param = 0.0;  // PlusC only
};

/// An accumulation function together with the cutoff rule it is run with.
struct Method {
  AccumulationSpec spec;
  Rule rule = Rule::Plain;
  double plus_c = 0.0;

  /// `seqstep:C=2` (plain) or `seqstep+:C=2` (PlusC with c = C). The plus
  /// constant can be overridden with `c=`, e.g. `hingeexp+:C=2,c=3`;
  /// `forwardstop+:c=2` must give it; `piecewise+:...` uses the largest level.
  static Method parse(std::string_view text);
  std::string to_string() const;
};

std::vector<double> estimated_fdp_path(const OrderedPValues& pvals, const AccumulationSpec& spec);

std::vector<double> estimated_fdp_path_plus(const OrderedPValues& pvals,
                                            const AccumulationSpec& spec, double c);

/// Largest k (1-based) with path[k-1] <= alpha, scanning all k; 0 if none.
std::size_t select_cutoff(std::span<const double> path, double alpha);

CutoffResult accumulation_test(const OrderedPValues& pvals, const Method& method, double alpha);

std::size_t false_positives(std::size_t k, const NullMask& mask);

/// FalsePos(k) / max(1, k).
double fdp(std::size_t k, const NullMask& mask);
double fdp(std::size_t k, const OrderedPValues& pvals);

/// FalsePos(k) / (c + k), 0 at k = 0.
double mfdp(std::size_t k, const NullMask& mask, double c);
double mfdp(std::size_t k, const OrderedPValues& pvals, double c);

/// Fraction of all non-nulls found among the first k. ContractError if the
/// mask has no non-null.
double power_of_cutoff(std::size_t k, const NullMask& mask);
double power_of_cutoff(std::size_t k, const OrderedPValues& pvals);

/// Maps p-values on the grid {k/grid_size} to k/(grid_size+1), removing
/// exact ones. Throws ValidationError for off-grid values.
OrderedPValues shift_discrete_pvalues(const OrderedPValues& pvals, std::size_t grid_size);

}  // namespace acctest
