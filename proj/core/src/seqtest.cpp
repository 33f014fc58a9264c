#include "acctest/seqtest.hpp"

#include <cmath>

#include "acctest/errors.hpp"
#include "text.hpp"

namespace acctest {

namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k > n) throw DomainError("cutoff k exceeds the number of hypotheses");
}

}  // namespace

OrderedPValues::OrderedPValues(std::vector<double> values) : values_(std::move(values)) {
  for (double p : values_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("p-value outside [0,1]: " + detail::format_double(p));
    }
  }
}

OrderedPValues::OrderedPValues(std::vector<double> values, NullMask null_mask)
    : OrderedPValues(std::move(values)) {
  if (null_mask.size() != values_.size()) {
    throw ValidationError("null mask length differs from the number of p-values");
  }
  mask_ = std::move(null_mask);
}

const NullMask& OrderedPValues::null_mask() const {
  if (!mask_) throw ContractError("ground-truth null mask required");
  return *mask_;
}

Method Method::parse(std::string_view text) {
  text = detail::trim(text);
  const auto colon = text.find(':');
  auto name = text.substr(0, colon);
  if (!name.ends_with('+')) return Method{AccumulationSpec::parse(text), Rule::Plain, 0.0};

  name.remove_suffix(1);
  auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  std::optional<double> c;
  std::string spec_text(name);
  if (name == "piecewise") {
    spec_text += ":" + std::string(rest);
  } else {
    auto params = detail::parse_params(rest, name);
    if (const auto it = params.find("c"); it != params.end()) {
      c = it->second;
      params.erase(it);
    }
    std::string joined;
    for (const auto& [key, value] : params) {
      joined += (joined.empty() ? "" : ",") + key + "=" + detail::format_double(value);
    }
    if (!joined.empty()) spec_text += ":" + joined;
  }
  auto spec = AccumulationSpec::parse(spec_text);
  if (!c) {
    if (!spec.bounded() && spec.family() != Family::HingeExp) {
      throw ValidationError(std::string(name) + "+ needs an explicit c=<value>");
    }
    c = spec.family() == Family::HingeExp ? spec.c() : spec.upper_bound();
  }
  if (!(*c > 0.0) || !std::isfinite(*c)) throw ValidationError("plus rule: c must be positive");
  return Method{std::move(spec), Rule::PlusC, *c};
}

std::string Method::to_string() const {
  if (rule == Rule::Plain) return spec.to_string();
  const auto name = std::string(family_name(spec.family()));
  const auto c_text = detail::format_double(plus_c);
  switch (spec.family()) {
    case Family::ForwardStop:
      return name + "+:c=" + c_text;
    case Family::PiecewiseConstant:
      return name + "+:" + format_pieces(spec.pieces());
    default: {
      auto out = name + "+:C=" + detail::format_double(spec.c());
      if (plus_c != spec.c()) out += ",c=" + c_text;
      return out;
    }
  }
}

std::vector<double> estimated_fdp_path(const OrderedPValues& pvals, const AccumulationSpec& spec) {
  if (pvals.empty()) throw DomainError("estimated_fdp_path: no p-values");
  std::vector<double> path(pvals.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    sum += spec(pvals[i]);
    path[i] = sum / static_cast<double>(i + 1);
  }
  return path;
}

std::vector<double> estimated_fdp_path_plus(const OrderedPValues& pvals,
                                            const AccumulationSpec& spec, double c) {
  if (pvals.empty()) throw DomainError("estimated_fdp_path_plus: no p-values");
  if (!(c > 0.0)) throw DomainError("estimated_fdp_path_plus: c must be positive");
  std::vector<double> path(pvals.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    sum += spec(pvals[i]);
    path[i] = (c + sum) / static_cast<double>(i + 2);
  }
  return path;
}

std::size_t select_cutoff(std::span<const double> path, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("select_cutoff: alpha outside (0,1)");
  if (path.empty()) throw DomainError("select_cutoff: empty path");
  for (std::size_t k = path.size(); k > 0; --k) {
    if (path[k - 1] <= alpha) return k;
  }
  return 0;
}

CutoffResult accumulation_test(const OrderedPValues& pvals, const Method& method, double alpha) {
  CutoffResult r;
  r.rule = method.rule;
  r.alpha = alpha;
  if (method.rule == Rule::Plain) {
    r.fdp_hat_path = estimated_fdp_path(pvals, method.spec);
  } else {
    r.c_param = method.plus_c;
    r.fdp_hat_path = estimated_fdp_path_plus(pvals, method.spec, method.plus_c);
  }
  r.k_hat = select_cutoff(r.fdp_hat_path, alpha);
  return r;
}

std::size_t false_positives(std::size_t k, const NullMask& mask) {
  check_k(k, mask.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < k; ++i) count += mask[i] ? 1 : 0;
  return count;
}

double fdp(std::size_t k, const NullMask& mask) {
  const auto fp = false_positives(k, mask);
  return k == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(k);
}

double fdp(std::size_t k, const OrderedPValues& pvals) { return fdp(k, pvals.null_mask()); }

double mfdp(std::size_t k, const NullMask& mask, double c) {
  if (!(c >= 0.0)) throw DomainError("mfdp: c must be nonnegative");
  const auto fp = false_positives(k, mask);
  return k == 0 ? 0.0 : static_cast<double>(fp) / (c + static_cast<double>(k));
}

double mfdp(std::size_t k, const OrderedPValues& pvals, double c) {
  return mfdp(k, pvals.null_mask(), c);
}

double power_of_cutoff(std::size_t k, const NullMask& mask) {
  check_k(k, mask.size());
  std::size_t total = 0;
  std::size_t found = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) {
      ++total;
      if (i < k) ++found;
    }
  }
  if (total == 0) throw ContractError("power is undefined without non-null hypotheses");
  return static_cast<double>(found) / static_cast<double>(total);
}

double power_of_cutoff(std::size_t k, const OrderedPValues& pvals) {
  return power_of_cutoff(k, pvals.null_mask());
}

OrderedPValues shift_discrete_pvalues(const OrderedPValues& pvals, std::size_t grid_size) {
  if (grid_size == 0) throw DomainError("shift_discrete_pvalues: grid size must be positive");
  const auto g = static_cast<double>(grid_size);
  std::vector<double> shifted(pvals.size());
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    const double k = std::round(pvals[i] * g);
    if (k < 1.0 || k > g || std::fabs(pvals[i] - k / g) > 1e-12) {
      throw ValidationError("p-value " + detail::format_double(pvals[i]) + " is not on the grid k/" +
                            std::to_string(grid_size));
    }
    shifted[i] = k / (g + 1.0);
  }
  if (pvals.has_mask()) return OrderedPValues(std::move(shifted), pvals.null_mask());
  return OrderedPValues(std::move(shifted));
}

}  // namespace acctest
