#include "acctest/accumulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acctest/errors.hpp"
#include "acctest/quadrature.hpp"
#include "text.hpp"

namespace acctest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// G_k(x) = integral over u in (0, x) of min(-log u, k); k may be +inf.
double log_tail(double x, double k) {
  const double knee = std::exp(-k);
  if (knee >= x) return k * x;
  return x * (1.0 - std::log(x)) - knee;
}

// Integral of min(h, cap) over [1 - eps, 1] for the unbounded families.
double unbounded_tail(const AccumulationSpec& spec, double cap, double eps) {
  if (spec.family() == Family::ForwardStop) return log_tail(eps, cap);
  // HingeExp: substitute v = C(1 - t).
  const double c = spec.c();
  return log_tail(c * eps, cap / c);
}

double integrate(const AccumulationSpec& spec, double cap, const AlternativeDensity* density,
                 const char* what) {
  if (cap == 0.0) return 0.0;
  constexpr double eps = kEndpointGuard;
  const double lo = eps;
  const double hi = 1.0 - eps;

  std::vector<double> points{lo, hi};
  for (double k : spec.kinks()) points.push_back(k);
  if (density != nullptr) {
    for (double k : density->breakpoints()) points.push_back(k);
  }
  std::erase_if(points, [&](double x) { return x < lo || x > hi; });
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto integrand = [&](double t) {
    const double h = std::min(spec(t), cap);
    if (h == 0.0) return 0.0;
    return density == nullptr ? h : h * density->pdf(t);
  };

  const double tol = kQuadratureTolerance / static_cast<double>(points.size() + 1);
  double body = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto r = quadrature::adaptive_simpson(integrand, points[i], points[i + 1], tol);
    if (!r.converged) {
      throw ValidationError(std::string(what) + ": quadrature did not converge for " +
                            spec.to_string());
    }
    body += r.value;
  }

  // [0, eps]: h is constant there for every family.
  const double head_h = std::min(spec(0.5 * eps), cap);
  const double head = head_h == 0.0 ? 0.0 : head_h * (density ? density->cdf(lo) : lo);

  // [1 - eps, 1]: closed forms for h, density frozen at the midpoint.
  double tail = 0.0;
  if (spec.bounded()) {
    const double tail_h = std::min(spec(1.0 - 0.5 * eps), cap);
    if (tail_h != 0.0) tail = tail_h * (density ? 1.0 - density->cdf(hi) : 1.0 - hi);
  } else {
    tail = unbounded_tail(spec, cap, 1.0 - hi);
    if (density != nullptr) tail *= density->pdf(1.0 - 0.5 * eps);
  }

  const double total = head + body + tail;
  if (!std::isfinite(total)) {
    throw ValidationError(std::string(what) + ": integral diverges for " + spec.to_string());
  }
  return total;
}

double param(const auto& params, std::string_view key, std::string_view family) {
  const auto it = params.find(key);
  if (it == params.end() || params.size() != 1) {
    throw ValidationError(std::string(family) + ": expected exactly the parameter '" +
                          std::string(key) + "'");
  }
  return it->second;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::ForwardStop:
      return "forwardstop";
    case Family::SeqStep:
      return "seqstep";
    case Family::HingeExp:
      return "hingeexp";
    case Family::PiecewiseConstant:
      return "piecewise";
  }
  return "?";
}

AccumulationSpec AccumulationSpec::forward_stop() { return AccumulationSpec{}; }

AccumulationSpec AccumulationSpec::seq_step(double c) {
  if (!(c > 1.0) || !std::isfinite(c)) throw ValidationError("seqstep: C must be > 1");
  AccumulationSpec s;
  s.family_ = Family::SeqStep;
  s.c_ = c;
  s.hinge_ = 1.0 - 1.0 / c;
  return s;
}

AccumulationSpec AccumulationSpec::hinge_exp(double c) {
  if (!(c > 1.0) || !std::isfinite(c)) throw ValidationError("hingeexp: C must be > 1");
  AccumulationSpec s;
  s.family_ = Family::HingeExp;
  s.c_ = c;
  s.hinge_ = 1.0 - 1.0 / c;
  return s;
}

AccumulationSpec AccumulationSpec::piecewise(std::vector<Piece> pieces) {
  validate_pieces(pieces, "piecewise");
  AccumulationSpec s;
  s.family_ = Family::PiecewiseConstant;
  s.pieces_ = std::move(pieces);
  return s;
}

AccumulationSpec AccumulationSpec::parse(std::string_view text) {
  text = detail::trim(text);
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (name == "forwardstop") {
    if (!detail::trim(rest).empty()) throw ValidationError("forwardstop takes no parameters");
    return forward_stop();
  }
  if (name == "seqstep") return seq_step(param(detail::parse_params(rest, name), "C", name));
  if (name == "hingeexp") return hinge_exp(param(detail::parse_params(rest, name), "C", name));
  if (name == "piecewise") return piecewise(parse_pieces(rest));
  throw ValidationError("unknown accumulation function '" + std::string(text) + "'");
}

std::string AccumulationSpec::to_string() const {
  switch (family_) {
    case Family::ForwardStop:
      return "forwardstop";
    case Family::SeqStep:
      return "seqstep:C=" + detail::format_double(c_);
    case Family::HingeExp:
      return "hingeexp:C=" + detail::format_double(c_);
    case Family::PiecewiseConstant:
      return "piecewise:" + format_pieces(pieces_);
  }
  return {};
}

double AccumulationSpec::operator()(double t) const {
  switch (family_) {
    case Family::ForwardStop:
      return t >= 1.0 ? kInf : -std::log1p(-t);
    case Family::SeqStep:
      return t > hinge_ ? c_ : 0.0;
    case Family::HingeExp:
      if (t <= hinge_) return 0.0;
      if (t >= 1.0) return kInf;
      return std::max(0.0, -c_ * std::log(c_ * (1.0 - t)));
    case Family::PiecewiseConstant:
      return piece_value(pieces_, t);
  }
  return 0.0;
}

bool AccumulationSpec::bounded() const {
  return family_ == Family::SeqStep || family_ == Family::PiecewiseConstant;
}

double AccumulationSpec::upper_bound() const {
  switch (family_) {
    case Family::SeqStep:
      return c_;
    case Family::PiecewiseConstant: {
      double m = 0.0;
      for (const auto& p : pieces_) m = std::max(m, p.level);
      return m;
    }
    default:
      return kInf;
  }
}

std::vector<double> AccumulationSpec::kinks() const {
  switch (family_) {
    case Family::SeqStep:
    case Family::HingeExp:
      return {hinge_};
    case Family::PiecewiseConstant: {
      std::vector<double> out;
      for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].lo);
      return out;
    }
    default:
      return {};
  }
}

double evaluate(const AccumulationSpec& spec, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("evaluate: t outside [0,1]");
  return spec(t);
}

double unit_integral(const AccumulationSpec& spec) {
  return integrate(spec, kInf, nullptr, "unit_integral");
}

double truncated_integral(const AccumulationSpec& spec, double cap) {
  if (!(cap >= 0.0)) throw DomainError("truncated_integral: cap must be nonnegative");
  return integrate(spec, cap, nullptr, "truncated_integral");
}

double nonnull_mean(const AccumulationSpec& spec, const AlternativeDensity& density) {
  return integrate(spec, kInf, &density, "nonnull_mean");
}

}  // namespace acctest
