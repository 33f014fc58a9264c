#include "acctest/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "acctest/errors.hpp"

namespace acctest {

namespace {

void check_inputs(std::span<const double> pvals, double alpha) {
  if (pvals.empty()) throw DomainError("no p-values");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha outside [0,1]");
  for (double p : pvals) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p-value outside [0,1]");
  }
}

RejectionSet step_up(std::span<const double> pvals, double alpha, double m) {
  std::vector<std::size_t> order(pvals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });

  RejectionSet out;
  for (std::size_t k = order.size(); k > 0; --k) {
    if (pvals[order[k - 1]] <= alpha * static_cast<double>(k) / m) {
      out.threshold_index = k;
      break;
    }
  }
  if (out.threshold_index == 0) return out;
  const double cut = pvals[order[out.threshold_index - 1]];
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    if (pvals[i] <= cut) out.indices.push_back(i);
  }
  out.count = out.indices.size();
  return out;
}

}  // namespace

RejectionSet bh_select(std::span<const double> pvals, double alpha) {
  check_inputs(pvals, alpha);
  return step_up(pvals, alpha, static_cast<double>(pvals.size()));
}

double storey_null_estimate(std::span<const double> pvals, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("storey: lambda outside (0,1)");
  const auto above = std::count_if(pvals.begin(), pvals.end(), [&](double p) { return p > lambda; });
  const double raw = static_cast<double>(above) / (1.0 - lambda);
  return std::clamp(raw, 1.0, static_cast<double>(pvals.size()));
}

RejectionSet storey_select(std::span<const double> pvals, double alpha, double lambda) {
  check_inputs(pvals, alpha);
  return step_up(pvals, alpha, storey_null_estimate(pvals, lambda));
}

}  // namespace acctest
