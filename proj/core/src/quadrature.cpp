#include "acctest/quadrature.hpp"

#include <cmath>
#include <algorithm>
#include <vector>

namespace acctest::quadrature {

namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double flm, frm;
  double value;  // Richardson-corrected composite Simpson
  double error;
};

bool operator<(const Panel& x, const Panel& y) { return x.error < y.error; }

}  // namespace

Result adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, long max_panels) {
  Result result;
  if (!(b > a)) return result;

  auto eval = [&](double x) {
    ++result.evaluations;
    const double v = f(x);
    if (!std::isfinite(v)) result.converged = false;
    return v;
  };
  auto make_panel = [&](double pa, double fa, double pm, double fm, double pb, double fb) {
    Panel p{pa, pm, pb, fa, fm, fb, 0.0, 0.0, 0.0, 0.0};
    p.flm = eval(0.5 * (pa + pm));
    p.frm = eval(0.5 * (pm + pb));
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (pm - pa) / 6.0 * (fa + 4.0 * p.flm + fm);
    const double right = (pb - pm) / 6.0 * (fm + 4.0 * p.frm + fb);
    const double delta = left + right - whole;
    p.value = left + right + delta / 15.0;
    p.error = std::fabs(delta) / 15.0;
    // Panels that can no longer be split contribute no refinable error.
    if (!(0.5 * (pa + pm) > pa && 0.5 * (pm + pb) < pb)) p.error = 0.0;
    return p;
  };

  const double fa = eval(std::nextafter(a, b));
  const double fb = eval(std::nextafter(b, a));
  const double m = 0.5 * (a + b);
  const double fm = eval(m);

  // Max-heap on the error estimate.
  std::vector<Panel> heap;
  heap.push_back(make_panel(a, fa, m, fm, b, fb));
  double total_error = heap.front().error;
  long panels = 1;

  while (result.converged && total_error > abs_tol && heap.front().error > 0.0) {
    if (panels >= max_panels) {
      result.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const Panel p = heap.back();
    heap.pop_back();
    const Panel left = make_panel(p.a, p.fa, 0.5 * (p.a + p.m), p.flm, p.m, p.fm);
    const Panel right = make_panel(p.m, p.fm, 0.5 * (p.m + p.b), p.frm, p.b, p.fb);
    total_error += left.error + right.error - p.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    ++panels;
    // Re-sum periodically so cancellation in the running total cannot drift.
    if (panels % 4096 == 0) {
      total_error = 0.0;
      for (const auto& q : heap) total_error += q.error;
    }
  }

  // Neumaier-compensated sum over panels.
  double sum = 0.0;
  double comp = 0.0;
  double err = 0.0;
  for (const auto& q : heap) {
    const double v = q.value;
    err += q.error;
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  sum += comp;
  result.value = sum;
  result.error_estimate = err;
  if (!std::isfinite(sum)) result.converged = false;
  return result;
}

}  // namespace acctest::quadrature
