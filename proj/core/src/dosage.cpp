#include "acctest/dosage.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "acctest/baselines.hpp"
#include "acctest/csv.hpp"
#include "acctest/errors.hpp"
#include "acctest/parallel.hpp"
#include "acctest/rng.hpp"
#include "acctest/special.hpp"
#include "text.hpp"

namespace acctest {

namespace {

const char* group_name(Group g) {
  switch (g) {
    case Group::Control: return "Control";
    case Group::Low: return "Low";
    case Group::High: return "High";
  }
  return "?";
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double n = 0.0;
};

// Sorting first makes the result depend only on the multiset of values, so
// relabelings that swap equal multisets give bitwise equal p-values.
// A single value counts as zero variance; only the permutation engine allows
// that, so singleton groups fall under the degenerate-variance convention.
Moments moments(std::span<const double> x, std::vector<double>& scratch, bool allow_singleton) {
  if (x.size() < (allow_singleton ? 1u : 2u)) {
    throw ContractError("Welch test needs at least two values per sample");
  }
  scratch.assign(x.begin(), x.end());
  std::sort(scratch.begin(), scratch.end());
  double sum = 0.0;
  for (double v : scratch) sum += v;
  const auto n = static_cast<double>(scratch.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : scratch) ss += (v - mean) * (v - mean);
  return {mean, n > 1.0 ? ss / (n - 1.0) : 0.0, n};
}

struct WelchStat {
  double t = 0.0;
  double df = 0.0;
  double diff = 0.0;  // mean(a) - mean(b)
  bool degenerate = false;
};

WelchStat welch(std::span<const double> a, std::span<const double> b, std::vector<double>& scratch,
                bool allow_singleton = false) {
  const auto ma = moments(a, scratch, allow_singleton);
  const auto mb = moments(b, scratch, allow_singleton);
  const double sa = ma.var / ma.n;
  const double sb = mb.var / mb.n;
  WelchStat s;
  s.diff = ma.mean - mb.mean;
  const double se2 = sa + sb;
  if (se2 == 0.0) {
    s.degenerate = true;
    return s;
  }
  s.t = s.diff / std::sqrt(se2);
  auto term = [](double v, double n) { return n > 1.0 ? v * v / (n - 1.0) : 0.0; };
  s.df = se2 * se2 / (term(sa, ma.n) + term(sb, mb.n));
  return s;
}

double two_sided(const WelchStat& s) {
  if (s.degenerate) return s.diff == 0.0 ? 1.0 : 0.0;
  return special::student_t_two_sided(s.t, s.df);
}

double one_sided(const WelchStat& s, Sign direction) {
  const double signed_t = direction == Sign::Plus ? s.t : -s.t;
  if (s.degenerate) {
    if (s.diff == 0.0) return 0.5;
    const bool agrees = (s.diff > 0.0) == (direction == Sign::Plus);
    return agrees ? 0.0 : 1.0;
  }
  return special::student_t_sf(signed_t, s.df);
}

double score(const WelchStat& s, std::optional<Sign> direction) {
  return direction ? one_sided(s, *direction) : two_sided(s);
}

}  // namespace

ExpressionMatrix::ExpressionMatrix(std::vector<std::string> gene_ids, std::vector<Group> groups,
                                   std::vector<std::vector<double>> values)
    : gene_ids_(std::move(gene_ids)), groups_(std::move(groups)), values_(std::move(values)) {
  if (gene_ids_.size() != values_.size()) throw ValidationError("gene id count differs from row count");
  if (gene_ids_.empty()) throw ValidationError("expression matrix has no genes");
  for (Group g : {Group::Control, Group::Low, Group::High}) {
    if (group_size(g) == 0) {
      throw ValidationError(std::string("missing group: ") + group_name(g) + " (no trial label starting with " +
                            group_name(g)[0] + ")");
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].size() != groups_.size()) {
      throw ValidationError("gene '" + gene_ids_[i] + "' has " + std::to_string(values_[i].size()) +
                            " values, expected " + std::to_string(groups_.size()));
    }
    for (std::size_t j = 0; j < values_[i].size(); ++j) {
      if (!std::isfinite(values_[i][j])) {
        throw ValidationError("row " + std::to_string(i + 1) + ", column " + std::to_string(j + 2) +
                              ": value is not finite");
      }
    }
  }
}

std::size_t ExpressionMatrix::group_size(Group g) const {
  return static_cast<std::size_t>(std::count(groups_.begin(), groups_.end(), g));
}

std::vector<double> ExpressionMatrix::group_values(std::size_t gene, Group g) const {
  std::vector<double> out;
  const auto& row = values_.at(gene);
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    if (groups_[j] == g) out.push_back(row[j]);
  }
  return out;
}

ExpressionMatrix ExpressionMatrix::read_csv(std::istream& in) {
  const auto table = acctest::read_csv(in);
  if (table.header.size() < 2) throw ValidationError("matrix header needs gene_id and trial columns");
  std::vector<Group> groups;
  for (std::size_t j = 1; j < table.header.size(); ++j) {
    const auto& label = table.header[j];
    const char c = label.empty() ? '\0' : static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
    if (c == 'C') {
      groups.push_back(Group::Control);
    } else if (c == 'L') {
      groups.push_back(Group::Low);
    } else if (c == 'H') {
      groups.push_back(Group::High);
    } else {
      throw ValidationError("column " + std::to_string(j + 1) + ": trial label '" + label +
                            "' does not start with C, L or H");
    }
  }
  std::vector<std::string> ids;
  std::vector<std::vector<double>> values;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    ids.push_back(row[0]);
    std::vector<double> v(row.size() - 1);
    for (std::size_t j = 1; j < row.size(); ++j) {
      const std::string where = "row " + std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                                " ('" + table.header[j] + "')";
      v[j - 1] = detail::parse_double(row[j], where);
    }
    values.push_back(std::move(v));
  }
  return ExpressionMatrix(std::move(ids), std::move(groups), std::move(values));
}

void ExpressionMatrix::write_csv(std::ostream& out) const {
  out << "gene_id";
  std::size_t counter[3] = {0, 0, 0};
  for (Group g : groups_) {
    const auto k = static_cast<std::size_t>(g);
    out << ',' << group_name(g)[0] << ++counter[k];
  }
  out << '\n';
  for (std::size_t i = 0; i < genes(); ++i) {
    out << csv_field(gene_ids_[i]);
    for (double v : values_[i]) out << ',' << format_number(v);
    out << '\n';
  }
}

double welch_p_two_sided(std::span<const double> a, std::span<const double> b) {
  std::vector<double> scratch;
  return two_sided(welch(a, b, scratch));
}

double welch_p_one_sided(std::span<const double> a, std::span<const double> b, Sign direction) {
  std::vector<double> scratch;
  return one_sided(welch(a, b, scratch), direction);
}

std::vector<HighDoseRank> high_dose_ordering(const ExpressionMatrix& matrix, unsigned threads) {
  std::vector<HighDoseRank> ranks(matrix.genes());
  parallel_for(matrix.genes(), threads, [&](std::size_t i) {
    const auto high = matrix.group_values(i, Group::High);
    auto rest = matrix.group_values(i, Group::Control);
    const auto low = matrix.group_values(i, Group::Low);
    rest.insert(rest.end(), low.begin(), low.end());
    std::vector<double> scratch;
    const auto s = welch(high, rest, scratch);
    ranks[i] = {i, two_sided(s), s.diff < 0.0 ? Sign::Minus : Sign::Plus};
  });
  std::stable_sort(ranks.begin(), ranks.end(),
                   [](const HighDoseRank& x, const HighDoseRank& y) { return x.p_high < y.p_high; });
  return ranks;
}

std::uint64_t partition_count(std::size_t m_control, std::size_t m_low) {
  if (m_control == 0 || m_low == 0) throw DomainError("permutation test needs nonempty groups");
  const std::uint64_t m = m_control + m_low;
  const std::uint64_t k = std::min<std::uint64_t>(m_control, m_low);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // c * (m - k + i) / i stays exact: c is C(m-k+i-1, i-1).
    c = c * (m - k + i) / i;
    if (c > kMaxPartitions) {
      throw DomainError("permutation test would enumerate more than " + std::to_string(kMaxPartitions) +
                        " splits; subsample the control and low trials");
    }
  }
  return c;
}

std::vector<double> permutation_distribution(std::span<const double> values,
                                             std::size_t m_control, std::size_t m_low,
                                             std::optional<Sign> direction) {
  const auto total = partition_count(m_control, m_low);
  if (values.size() != m_control + m_low) {
    throw ContractError("permutation test: value count differs from m_C + m_L");
  }
  const std::size_t m = values.size();
  std::vector<std::size_t> chosen(m_control);
  std::iota(chosen.begin(), chosen.end(), std::size_t{0});
  std::vector<double> control(m_control);
  std::vector<double> low(m_low);
  std::vector<double> scratch;
  std::vector<bool> in_control(m);
  std::vector<double> out;
  out.reserve(total);
  for (;;) {
    std::fill(in_control.begin(), in_control.end(), false);
    for (std::size_t j = 0; j < m_control; ++j) {
      control[j] = values[chosen[j]];
      in_control[chosen[j]] = true;
    }
    for (std::size_t i = 0, l = 0; i < m; ++i) {
      if (!in_control[i]) low[l++] = values[i];
    }
    out.push_back(score(welch(low, control, scratch, true), direction));

    // Next combination in lexicographic order.
    std::size_t j = m_control;
    while (j > 0 && chosen[j - 1] == m - m_control + (j - 1)) --j;
    if (j == 0) break;
    ++chosen[j - 1];
    for (std::size_t r = j; r < m_control; ++r) chosen[r] = chosen[r - 1] + 1;
  }
  return out;
}

double permutation_pvalue(std::span<const double> values, std::size_t m_control, std::size_t m_low,
                          std::optional<Sign> direction) {
  const auto dist = permutation_distribution(values, m_control, m_low, direction);
  const double p_init = dist.front();  // the identity split comes first
  const auto hits = std::count_if(dist.begin(), dist.end(), [&](double p) { return p <= p_init; });
  return static_cast<double>(hits) / static_cast<double>(dist.size());
}

DosageResult run_pipeline(const ExpressionMatrix& matrix, const DosageOptions& options) {
  for (double a : options.alpha_grid) {
    if (!(a >= 0.0 && a < 1.0)) throw ValidationError("dosage alphas must lie in [0,1)");
  }
  const std::size_t n = matrix.genes();
  const std::size_t m_c = matrix.group_size(Group::Control);
  const std::size_t m_l = matrix.group_size(Group::Low);

  DosageResult result;
  result.partitions = partition_count(m_c, m_l);
  const auto order = high_dose_ordering(matrix, options.threads);

  std::vector<GeneRecord> by_gene(n);
  result.p_ttest.resize(n);
  result.p_perm.resize(n);
  std::vector<Sign> signs(n);
  for (const auto& r : order) signs[r.gene] = r.sign;
  parallel_for(n, options.threads, [&](std::size_t i) {
    auto cl = matrix.group_values(i, Group::Control);
    const auto low = matrix.group_values(i, Group::Low);
    cl.insert(cl.end(), low.begin(), low.end());
    const auto directed = permutation_distribution(cl, m_c, m_l, signs[i]);
    auto& rec = by_gene[i];
    rec.original_index = i;
    rec.sign = signs[i];
    rec.p_init = directed.front();
    rec.p_final = static_cast<double>(std::count_if(directed.begin(), directed.end(),
                                                    [&](double p) { return p <= rec.p_init; })) /
                  static_cast<double>(directed.size());
    if (options.baselines) {
      const auto undirected = permutation_distribution(cl, m_c, m_l, std::nullopt);
      result.p_ttest[i] = undirected.front();
      result.p_perm[i] = static_cast<double>(std::count_if(undirected.begin(), undirected.end(),
                                                           [&](double p) { return p <= undirected.front(); })) /
                         static_cast<double>(undirected.size());
    }
  });

  std::vector<double> ordered(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto rec = by_gene[order[k].gene];
    rec.p_high = order[k].p_high;
    result.records.push_back(rec);
    ordered[k] = rec.p_final;
  }

  const OrderedPValues raw(ordered);
  const auto shifted = shift_discrete_pvalues(raw, result.partitions);
  for (const auto& method : options.methods) {
    const auto& input = method.spec.bounded() ? raw : shifted;
    const auto path = method.rule == Rule::Plain
                          ? estimated_fdp_path(input, method.spec)
                          : estimated_fdp_path_plus(input, method.spec, method.plus_c);
    for (double a : options.alpha_grid) {
      result.counts.push_back({method.to_string(), a, a == 0.0 ? 0 : select_cutoff(path, a)});
    }
  }
  if (options.baselines) {
    auto add = [&](const char* name, const std::vector<double>& p, bool storey) {
      for (double a : options.alpha_grid) {
        std::size_t count = 0;
        if (a > 0.0) {
          count = storey ? storey_select(p, a, options.storey_lambda).count : bh_select(p, a).count;
        }
        result.counts.push_back({name, a, count});
      }
    };
    add("bh-ttest", result.p_ttest, false);
    add("bh-perm", result.p_perm, false);
    add("storey-ttest", result.p_ttest, true);
    add("storey-perm", result.p_perm, true);
  }
  return result;
}

void write_dosage_csv(std::ostream& out, std::span<const DosageCount> counts) {
  out << "method,alpha,discoveries\n";
  for (const auto& c : counts) {
    out << csv_field(c.method) << ',' << format_number(c.alpha) << ',' << c.discoveries << '\n';
  }
}

ExpressionMatrix generate_dosage_matrix(const SyntheticDosage& config) {
  if (config.genes == 0 || config.signal_genes > config.genes) {
    throw ValidationError("synthetic dosage: need 0 < genes and signal_genes <= genes");
  }
  std::vector<Group> groups;
  groups.insert(groups.end(), config.m_control, Group::Control);
  groups.insert(groups.end(), config.m_low, Group::Low);
  groups.insert(groups.end(), config.m_high, Group::High);
  std::vector<std::string> ids(config.genes);
  std::vector<std::vector<double>> values(config.genes);
  for (std::size_t i = 0; i < config.genes; ++i) {
    Rng rng(child_seed(config.seed, i));
    ids[i] = "g" + std::to_string(i + 1);
    const bool signal = i < config.signal_genes;
    const double s = rng.bernoulli(0.5) ? 1.0 : -1.0;
    for (Group g : groups) {
      double shift = 0.0;
      if (signal && g == Group::Low) shift = s * config.low_effect;
      if (signal && g == Group::High) shift = s * config.high_effect;
      values[i].push_back(rng.normal(shift, 1.0));
    }
  }
  return ExpressionMatrix(std::move(ids), std::move(groups), std::move(values));
}

}  // namespace acctest
