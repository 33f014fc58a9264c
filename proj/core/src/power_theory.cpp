#include "acctest/power_theory.hpp"

#include <algorithm>
#include <cmath>

#include "acctest/errors.hpp"
#include "acctest/parallel.hpp"
#include "text.hpp"

namespace acctest {

SignalCurve::SignalCurve(std::vector<Knot> knots, double delta)
    : knots_(std::move(knots)), delta_(delta) {
  if (!(delta_ > 0.0) || !std::isfinite(delta_)) throw ValidationError("curve: delta must be positive");
  if (knots_.size() < 2) throw ValidationError("curve: need at least two knots");
  if (knots_.front().t != 0.0 || knots_.back().t != 1.0) {
    throw ValidationError("curve: knots must start at t=0 and end at t=1");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(knots_[i].f >= 0.0 && knots_[i].f <= 1.0)) {
      throw ValidationError("curve: f must map into [0,1]");
    }
    if (i > 0 && !(knots_[i].t > knots_[i - 1].t)) {
      throw ValidationError("curve: knot positions must be strictly increasing");
    }
  }
}

SignalCurve SignalCurve::constant(double value, double delta) {
  return SignalCurve({{0.0, value}, {1.0, value}}, delta);
}

SignalCurve SignalCurve::parse(std::string_view text, double delta) {
  text = detail::trim(text);
  if (!text.starts_with("f:")) throw ValidationError("curve: expected 'f:t,f;t,f;...'");
  std::vector<Knot> knots;
  for (auto item : detail::split(text.substr(2), ';')) {
    const auto fields = detail::split(item, ',');
    if (fields.size() != 2) throw ValidationError("curve: bad knot '" + std::string(item) + "'");
    knots.push_back({detail::parse_double(fields[0], "curve"), detail::parse_double(fields[1], "curve")});
  }
  return SignalCurve(std::move(knots), delta);
}

std::string SignalCurve::to_string() const {
  std::string out = "f:";
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (i > 0) out += ';';
    out += detail::format_double(knots_[i].t) + ',' + detail::format_double(knots_[i].f);
  }
  return out;
}

double SignalCurve::operator()(double t) const {
  if (t <= 0.0) return knots_.front().f;
  if (t >= 1.0) return knots_.back().f;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double x, const Knot& k) { return x < k.t; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.f + w * (hi.f - lo.f);
}

CurveReport validate_signal_curve(const SignalCurve& curve, double alpha) {
  CurveReport report;
  constexpr std::size_t n = kCurveGridPoints;
  const double step = 1.0 / static_cast<double>(n - 1);
  auto grid = [&](std::size_t i) { return i == n - 1 ? 1.0 : static_cast<double>(i) * step; };

  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = curve(grid(i));

  auto note = [&](double t, const std::string& what) {
    if (!report.first_violation || t < *report.first_violation) {
      report.first_violation = t;
      report.message = what + " at t=" + detail::format_double(t);
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i == n - 1 ? n - 1 : i + 1;
    const double slope = (f[hi] - f[lo]) / (grid(hi) - grid(lo));
    const double t = grid(i);
    if (slope > kCurveSlack) {
      if (report.nonincreasing) note(t, "f is increasing");
      report.nonincreasing = false;
    }
    if (f[i] >= 1.0 - alpha && slope > -curve.delta() + kCurveSlack) {
      if (report.slope_margin) note(t, "slope above -delta where f >= 1 - alpha");
      report.slope_margin = false;
    }
    if (i + 1 < n && grid(i + 1) * f[i + 1] < t * f[i] - kCurveSlack) {
      if (report.count_nondecreasing) note(t, "t*f(t) decreases");
      report.count_nondecreasing = false;
    }
  }
  return report;
}

double asymptotic_threshold(const SignalCurve& curve, double alpha, double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("asymptotic_threshold: mu outside (0,1)");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("asymptotic_threshold: alpha outside [0,1]");
  const auto report = validate_signal_curve(curve, alpha);
  if (!report.structural()) throw ContractError("signal curve fails validation: " + report.message);

  const double target = (1.0 - alpha) / (1.0 - mu);
  const double f0 = curve(0.0);
  const double f1 = curve(1.0);
  if (target >= f0) return 0.0;
  if (target <= f1) return 1.0;
  if (!report.slope_margin) throw ContractError("signal curve fails validation: " + report.message);

  // f is linear between knots: find the first knot at or below the target
  // and interpolate on the segment leading to it.
  const auto knots = curve.knots();
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const auto& a = knots[i - 1];
    const auto& b = knots[i];
    if (b.f <= target) return a.t + (a.f - target) / (a.f - b.f) * (b.t - a.t);
  }
  return 1.0;
}

double asymptotic_power(const SignalCurve& curve, double alpha, double mu) {
  const double f1 = curve(1.0);
  if (!(f1 > 0.0)) throw ContractError("asymptotic_power: f(1) = 0, limit power undefined");
  const double t = asymptotic_threshold(curve, alpha, mu);
  return t * curve(t) / f1;
}

double expected_fdp_curve(const SignalCurve& curve, double mu, double t) {
  return 1.0 - curve(t) * (1.0 - mu);
}

double step_optimality_gap(const AccumulationSpec& spec, double c, const AlternativeDensity& density) {
  if (!(c >= 1.0) || !std::isfinite(c)) throw DomainError("step_optimality_gap: c must be >= 1");
  if (!density.nonincreasing()) throw ContractError("step_optimality_gap: density must be nonincreasing");
  constexpr std::size_t n = kCurveGridPoints;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    if (spec(t) > c + 1e-12) {
      throw ContractError("step_optimality_gap: " + spec.to_string() + " exceeds the bound c");
    }
  }
  const auto step = c > 1.0 ? AccumulationSpec::seq_step(c)
                            : AccumulationSpec::piecewise({Piece{0.0, 1.0, 1.0}});
  return nonnull_mean(spec, density) - nonnull_mean(step, density);
}

double walk_envelope(double sigma2, double b, double epsilon, double t) {
  if (!(sigma2 > 0.0)) throw DomainError("walk_envelope: sigma2 must be positive");
  if (!(b >= 0.0)) throw DomainError("walk_envelope: b must be nonnegative");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("walk_envelope: epsilon outside (0,1]");
  if (!(t > 0.0)) throw DomainError("walk_envelope: t must be positive");
  const double root = std::sqrt(2.0 * std::log2(4.0 / epsilon));
  return root * std::max(std::sqrt(sigma2), b * root) * std::sqrt(t * std::log1p(t));
}

EnvelopeCheck envelope_exit_rate(const StepSampler& step, double sigma2, double b, double epsilon,
                                 std::size_t t_max, std::size_t replicates, std::uint64_t seed,
                                 unsigned threads) {
  if (replicates == 0) throw DomainError("envelope_exit_rate: need at least one replicate");
  std::vector<double> bound(t_max);
  for (std::size_t t = 1; t <= t_max; ++t) {
    bound[t - 1] = walk_envelope(sigma2, b, epsilon, static_cast<double>(t));
  }
  std::vector<unsigned char> exited(replicates, 0);
  parallel_for(replicates, threads, [&](std::size_t r) {
    Rng rng(child_seed(seed, r));
    double sum = 0.0;
    for (std::size_t t = 0; t < t_max; ++t) {
      sum += step(rng);
      if (std::fabs(sum) > bound[t]) {
        exited[r] = 1;
        return;
      }
    }
  });
  const auto count = static_cast<double>(std::count(exited.begin(), exited.end(), 1));
  const auto n = static_cast<double>(replicates);
  const double p = count / n;
  return EnvelopeCheck{p, std::sqrt(p * (1.0 - p) / n), replicates};
}

}  // namespace acctest
