#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "acctest/piecewise.hpp"
#include "acctest/rng.hpp"

namespace acctest {

/// Distribution of a non-null p-value on [0,1].
class AlternativeDensity {
 public:
  enum class Form { Uniform, TwoSidedZ, Beta, PiecewiseConstant };

  static AlternativeDensity uniform();
  /// p = 2(1 - Phi(|Z|)) with Z ~ N(mu, 1).
  static AlternativeDensity two_sided_z(double mu);
  static AlternativeDensity beta(double a, double b);
  static AlternativeDensity piecewise(std::vector<Piece> pieces);

  /// "uniform", "z:mu=2", "beta:a=1,b=2", "piecewise:0,0.5,1.6;0.5,1,0.4".
  static AlternativeDensity parse(std::string_view text);
  std::string to_string() const;

  Form form() const { return form_; }
  double pdf(double t) const;
  double cdf(double t) const;
  double sample(Rng& rng) const;

  /// Analytic check of the nonincreasing-density assumption.
  bool nonincreasing() const;
  /// Interior points where the density is not smooth.
  std::vector<double> breakpoints() const;

 private:
  Form form_ = Form::Uniform;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::vector<Piece> pieces_;
};

}  // namespace acctest
