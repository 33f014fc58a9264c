#pragma once

// Dosage-response pipeline: genes are reordered by high-dose evidence, then
// low-dose effects are tested with sign-directed permutation p-values that
// feed the accumulation tests. BH and Storey on the unordered low-vs-control
// p-values serve as baselines.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acctest/seqtest.hpp"

namespace acctest {

enum class Group { Control, Low, High };
enum class Sign { Plus, Minus };

/// Genes x trials of log expression levels with a group per trial.
class ExpressionMatrix {
 public:
  /// Throws ValidationError if the matrix is ragged, a value is not finite
  /// or a group has no trial.
  ExpressionMatrix(std::vector<std::string> gene_ids, std::vector<Group> groups,
                   std::vector<std::vector<double>> values);

  /// Header `gene_id,<labels>`, labels starting with C, L or H. Errors name
  /// the missing group or the row and column of a bad cell.
  static ExpressionMatrix read_csv(std::istream& in);
  void write_csv(std::ostream& out) const;

  std::size_t genes() const { return gene_ids_.size(); }
  std::size_t trials() const { return groups_.size(); }
  const std::vector<std::string>& gene_ids() const { return gene_ids_; }
  const std::vector<Group>& groups() const { return groups_; }
  std::span<const double> row(std::size_t gene) const { return values_[gene]; }
  std::size_t group_size(Group g) const;

  /// Values of `gene` in the given group, in column order.
  std::vector<double> group_values(std::size_t gene, Group g) const;

 private:
  std::vector<std::string> gene_ids_;
  std::vector<Group> groups_;
  std::vector<std::vector<double>> values_;
};

/// Welch two-sample t-test, two-sided. Both samples need at least two
/// values (ContractError otherwise). When both variances vanish: equal
/// means give 1, unequal means give 0.
double welch_p_two_sided(std::span<const double> a, std::span<const double> b);

/// One-sided Welch test; Plus tests mean(a) > mean(b). With both variances
/// zero: 0.5 for equal means, otherwise 0 or 1 depending on direction.
double welch_p_one_sided(std::span<const double> a, std::span<const double> b, Sign direction);

struct HighDoseRank {
  std::size_t gene = 0;
  double p_high = 1.0;
  Sign sign = Sign::Plus;
};

/// p_high = Welch(High, Control+Low), sign of mean(High) - mean(Control+Low)
/// (Plus on a tie). Sorted by p_high ascending, ties by gene index.
std::vector<HighDoseRank> high_dose_ordering(const ExpressionMatrix& matrix, unsigned threads = 1);

inline constexpr std::uint64_t kMaxPartitions = 1'000'000;

/// Number of ways to choose the pseudo-control set. Throws DomainError
/// above kMaxPartitions.
std::uint64_t partition_count(std::size_t m_control, std::size_t m_low);

/// Permutation p-value over all C(m_C + m_L, m_C) splits of `values` (the
/// first m_C entries are the true controls). Each split is scored by the
/// Welch p-value of pseudo-low against pseudo-control: one-sided in
/// `direction`, or two-sided when it is empty. Returns #{p_split <= p_init}/P,
/// the share of splits at least as extreme as the observed labels.
/// A group of one trial is scored with zero variance.
double permutation_pvalue(std::span<const double> values, std::size_t m_control, std::size_t m_low,
                          std::optional<Sign> direction);

/// All split p-values in lexicographic order of the chosen control indices.
std::vector<double> permutation_distribution(std::span<const double> values,
                                             std::size_t m_control, std::size_t m_low,
                                             std::optional<Sign> direction);

struct GeneRecord {
  double p_high = 1.0;
  Sign sign = Sign::Plus;
  double p_init = 1.0;
  double p_final = 1.0;
  std::size_t original_index = 0;
};

struct DosageCount {
  std::string method;
  double alpha = 0.0;
  std::size_t discoveries = 0;
};

struct DosageResult {
  std::vector<GeneRecord> records;  // in high-dose order
  std::size_t partitions = 0;
  std::vector<double> p_ttest;  // two-sided low vs control, original order
  std::vector<double> p_perm;   // two-sided permutation, original order
  std::vector<DosageCount> counts;
};

struct DosageOptions {
  std::vector<Method> methods;
  std::vector<double> alpha_grid;
  bool baselines = true;   // bh-ttest, bh-perm, storey-ttest, storey-perm
  double storey_lambda = 0.9;
  unsigned threads = 1;
};

/// Alphas must lie in [0,1); alpha = 0 reports no discoveries. Unbounded
/// accumulation functions see p-values shifted from k/P to k/(P+1).
DosageResult run_pipeline(const ExpressionMatrix& matrix, const DosageOptions& options);

/// method,alpha,discoveries
void write_dosage_csv(std::ostream& out, std::span<const DosageCount> counts);

struct SyntheticDosage {
  std::size_t genes = 500;
  std::size_t signal_genes = 0;  // the first genes carry the effects
  std::size_t m_control = 5;
  std::size_t m_low = 5;
  std::size_t m_high = 5;
  double low_effect = 1.5;
  double high_effect = 3.0;
  std::uint64_t seed = 0;
};

/// Gaussian log-expression with unit noise; signal genes shift low and high
/// trials by the effects, with a random sign per gene.
ExpressionMatrix generate_dosage_matrix(const SyntheticDosage& config);

}  // namespace acctest
