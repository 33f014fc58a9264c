#pragma once

// Asymptotic power of accumulation tests when the local fraction of
// non-nulls along the list follows a curve f, plus the optimality gap of
// bounded accumulation functions and the random-walk envelope used in the
// uniform-concentration argument.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acctest/accumulation.hpp"
#include "acctest/density.hpp"
#include "acctest/rng.hpp"

namespace acctest {

struct Knot {
  double t = 0.0;
  double f = 0.0;
};

/// Piecewise-linear signal curve f on [0,1] given by knots (t_0 = 0 < ... <
/// t_m = 1), together with the slope margin delta.
class SignalCurve {
 public:
  SignalCurve(std::vector<Knot> knots, double delta);
  static SignalCurve constant(double value, double delta);

  /// "f:0,0.5;1,0.3" (t,f pairs). Throws ValidationError.
  static SignalCurve parse(std::string_view text, double delta);
  std::string to_string() const;

  double operator()(double t) const;
  double delta() const { return delta_; }
  std::span<const Knot> knots() const { return knots_; }

 private:
  std::vector<Knot> knots_;
  double delta_;
};

struct CurveReport {
  bool nonincreasing = true;      // f' <= 0
  bool slope_margin = true;       // f' <= -delta wherever f >= 1 - alpha
  bool count_nondecreasing = true;  // t * f(t) nondecreasing
  std::optional<double> first_violation;  // smallest grid t that failed any check
  std::string message;

  bool passed() const { return nonincreasing && slope_margin && count_nondecreasing; }
  /// The checks that do not depend on alpha or delta.
  bool structural() const { return nonincreasing && count_nondecreasing; }
};

inline constexpr std::size_t kCurveGridPoints = 10'000;
inline constexpr double kCurveSlack = 1e-8;

CurveReport validate_signal_curve(const SignalCurve& curve, double alpha);

/// Limit T of k_hat / n. ContractError if the curve fails the structural
/// checks, or if T falls strictly inside (0,1) while the slope margin fails.
double asymptotic_threshold(const SignalCurve& curve, double alpha, double mu);

/// T * f(T) / f(1). ContractError when f(1) = 0.
double asymptotic_power(const SignalCurve& curve, double alpha, double mu);

/// 1 - f(t) (1 - mu): the limiting estimated FDP at position t n.
double expected_fdp_curve(const SignalCurve& curve, double mu, double t);

/// E[h(p)] - E[h0(p)] for h0(t) = c 1{t > 1 - 1/c}. Requires h <= c (checked
/// on a grid) and a nonincreasing density.
double step_optimality_gap(const AccumulationSpec& spec, double c, const AlternativeDensity& density);

/// sqrt(2 log2(4/eps)) * max(sigma, b sqrt(2 log2(4/eps))) * sqrt(t log(1+t)).
double walk_envelope(double sigma2, double b, double epsilon, double t);

struct EnvelopeCheck {
  double exit_fraction = 0.0;
  double standard_error = 0.0;
  std::size_t replicates = 0;
};

using StepSampler = std::function<double(Rng&)>;

/// Fraction of random walks with i.i.d. centered steps drawn by `step` whose
/// partial sums leave the envelope at some t <= t_max.
EnvelopeCheck envelope_exit_rate(const StepSampler& step, double sigma2, double b, double epsilon,
                                 std::size_t t_max, std::size_t replicates, std::uint64_t seed,
                                 unsigned threads);

}  // namespace acctest
