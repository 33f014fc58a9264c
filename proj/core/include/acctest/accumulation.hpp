#pragma once

// Accumulation functions h : [0,1] -> [0, inf] with unit integral, and the
// integrals the FDR and power theory is phrased in.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acctest/density.hpp"
#include "acctest/piecewise.hpp"

namespace acctest {

enum class Family { ForwardStop, SeqStep, HingeExp, PiecewiseConstant };

std::string_view family_name(Family family);

/// A named accumulation function. Immutable once constructed; every
/// factory validates its arguments.
///
///   ForwardStop        h(t) = log(1/(1-t))
///   SeqStep(C)         h(t) = C * 1{t > 1 - 1/C}
///   HingeExp(C)        h(t) = C * log(1/(C(1-t))) * 1{t > 1 - 1/C}
///   PiecewiseConstant  step function with user levels integrating to one
class AccumulationSpec {
 public:
  static AccumulationSpec forward_stop();
  /// Requires C > 1.
  static AccumulationSpec seq_step(double c);
  /// Requires C > 1.
  static AccumulationSpec hinge_exp(double c);
  static AccumulationSpec piecewise(std::vector<Piece> pieces);

  /// Text form: `forwardstop`, `seqstep:C=2`, `hingeexp:C=2`,
  /// `piecewise:0,0.5,0.4;0.5,1,1.6`. Throws ValidationError.
  static AccumulationSpec parse(std::string_view text);
  std::string to_string() const;

  Family family() const { return family_; }
  /// The C parameter (0 for ForwardStop and PiecewiseConstant).
  double c() const { return c_; }
  std::span<const Piece> pieces() const { return pieces_; }

  /// h(t) without range checking. +inf at t = 1 for ForwardStop/HingeExp.
  double operator()(double t) const;

  bool bounded() const;
  /// sup over [0,1] of h; +inf for unbounded families.
  double upper_bound() const;
  /// Interior points in (0,1) where h is not smooth.
  std::vector<double> kinks() const;

  friend bool operator==(const AccumulationSpec&, const AccumulationSpec&) = default;

 private:
  Family family_ = Family::ForwardStop;
  double c_ = 0.0;
  double hinge_ = 0.0;  // 1 - 1/C
  std::vector<Piece> pieces_;
};

/// h(t); throws DomainError for t outside [0,1].
double evaluate(const AccumulationSpec& spec, double t);

/// Quadrature of h over [0,1]. Throws ValidationError if it fails to converge.
double unit_integral(const AccumulationSpec& spec);

/// Quadrature of min(h(t), cap) over [0,1]; cap >= 0, may be +inf.
double truncated_integral(const AccumulationSpec& spec, double cap);

/// E[h(p)] for p drawn from `density`.
double nonnull_mean(const AccumulationSpec& spec, const AlternativeDensity& density);

/// Absolute tolerance used by the three integrals above.
inline constexpr double kQuadratureTolerance = 1e-9;
/// Width of the end segments [0, eps] and [1-eps, 1] handled analytically.
inline constexpr double kEndpointGuard = 1e-12;

}  // namespace acctest
