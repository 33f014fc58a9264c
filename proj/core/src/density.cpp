#include "acctest/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "acctest/errors.hpp"
#include "acctest/special.hpp"
#include "text.hpp"

namespace acctest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double params_get(const auto& params, std::string_view key, std::string_view what) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw ValidationError(std::string(what) + ": missing parameter '" + std::string(key) + "'");
  }
  return it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Piecewise helpers

void validate_pieces(std::span<const Piece> pieces, std::string_view what) {
  const std::string name(what);
  if (pieces.empty()) throw ValidationError(name + ": no pieces");
  if (pieces.front().lo != 0.0) throw ValidationError(name + ": first piece must start at 0");
  if (pieces.back().hi != 1.0) throw ValidationError(name + ": last piece must end at 1");
  double mass = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.hi > p.lo)) throw ValidationError(name + ": empty or reversed interval");
    if (i > 0 && p.lo != pieces[i - 1].hi) {
      throw ValidationError(name + ": pieces must be contiguous");
    }
    if (!(p.level >= 0.0) || !std::isfinite(p.level)) {
      throw ValidationError(name + ": levels must be finite and nonnegative");
    }
    mass += p.level * (p.hi - p.lo);
  }
  if (std::fabs(mass - 1.0) > 1e-9) {
    throw ValidationError(name + ": levels integrate to " + detail::format_double(mass) +
                          ", expected 1");
  }
}

double piece_value(std::span<const Piece> pieces, double t) {
  for (const auto& p : pieces) {
    if (t < p.hi) return p.level;
  }
  return pieces.back().level;
}

std::vector<Piece> parse_pieces(std::string_view text) {
  std::vector<Piece> out;
  for (auto item : detail::split(text, ';')) {
    const auto fields = detail::split(item, ',');
    if (fields.size() != 3) {
      throw ValidationError("piecewise: expected lo,hi,level but got '" + std::string(item) + "'");
    }
    out.push_back(Piece{detail::parse_double(fields[0], "piecewise"),
                        detail::parse_double(fields[1], "piecewise"),
                        detail::parse_double(fields[2], "piecewise")});
  }
  return out;
}

std::string format_pieces(std::span<const Piece> pieces) {
  std::string out;
  for (const auto& p : pieces) {
    if (!out.empty()) out += ';';
    out += detail::format_double(p.lo) + ',' + detail::format_double(p.hi) + ',' +
           detail::format_double(p.level);
  }
  return out;
}

// ---------------------------------------------------------------------------
// AlternativeDensity

AlternativeDensity AlternativeDensity::uniform() { return AlternativeDensity{}; }

AlternativeDensity AlternativeDensity::two_sided_z(double mu) {
  if (!std::isfinite(mu)) throw ValidationError("z density: mu must be finite");
  AlternativeDensity d;
  d.form_ = Form::TwoSidedZ;
  d.p1_ = std::fabs(mu);
  return d;
}

AlternativeDensity AlternativeDensity::beta(double a, double b) {
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("beta density: a and b must be positive");
  }
  AlternativeDensity d;
  d.form_ = Form::Beta;
  d.p1_ = a;
  d.p2_ = b;
  return d;
}

AlternativeDensity AlternativeDensity::piecewise(std::vector<Piece> pieces) {
  validate_pieces(pieces, "piecewise density");
  AlternativeDensity d;
  d.form_ = Form::PiecewiseConstant;
  d.pieces_ = std::move(pieces);
  return d;
}

AlternativeDensity AlternativeDensity::parse(std::string_view text) {
  text = detail::trim(text);
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (name == "uniform") return uniform();
  if (name == "z") return two_sided_z(params_get(detail::parse_params(rest, "z"), "mu", "z"));
  if (name == "beta") {
    const auto params = detail::parse_params(rest, "beta");
    return beta(params_get(params, "a", "beta"), params_get(params, "b", "beta"));
  }
  if (name == "piecewise") return piecewise(parse_pieces(rest));
  throw ValidationError("unknown density '" + std::string(text) + "'");
}

std::string AlternativeDensity::to_string() const {
  switch (form_) {
    case Form::Uniform:
      return "uniform";
    case Form::TwoSidedZ:
      return "z:mu=" + detail::format_double(p1_);
    case Form::Beta:
      return "beta:a=" + detail::format_double(p1_) + ",b=" + detail::format_double(p2_);
    case Form::PiecewiseConstant:
      return "piecewise:" + format_pieces(pieces_);
  }
  return {};
}

double AlternativeDensity::pdf(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("density: t outside [0,1]");
  switch (form_) {
    case Form::Uniform:
      return 1.0;
    case Form::TwoSidedZ: {
      if (t == 0.0) return p1_ == 0.0 ? 1.0 : kInf;
      // z = Phi^{-1}(1 - t/2), taken from the lower tail for accuracy.
      const double z = -special::normal_quantile(0.5 * t);
      const double mu = p1_;
      return 0.5 * (std::exp(mu * z - 0.5 * mu * mu) + std::exp(-mu * z - 0.5 * mu * mu));
    }
    case Form::Beta: {
      const double a = p1_;
      const double b = p2_;
      if (t == 0.0) return a < 1.0 ? kInf : (a == 1.0 ? b : 0.0);
      if (t == 1.0) return b < 1.0 ? kInf : (b == 1.0 ? a : 0.0);
      const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
      return std::exp(log_norm + (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t));
    }
    case Form::PiecewiseConstant:
      return piece_value(pieces_, t);
  }
  return 0.0;
}

double AlternativeDensity::cdf(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("density: t outside [0,1]");
  switch (form_) {
    case Form::Uniform:
      return t;
    case Form::TwoSidedZ: {
      if (t == 0.0) return 0.0;
      const double z = -special::normal_quantile(0.5 * t);
      return special::normal_sf(z - p1_) + special::normal_sf(z + p1_);
    }
    case Form::Beta:
      return special::incomplete_beta(p1_, p2_, t);
    case Form::PiecewiseConstant: {
      double acc = 0.0;
      for (const auto& p : pieces_) {
        if (t <= p.lo) break;
        acc += p.level * (std::min(t, p.hi) - p.lo);
      }
      return std::min(acc, 1.0);
    }
  }
  return 0.0;
}

double AlternativeDensity::sample(Rng& rng) const {
  switch (form_) {
    case Form::Uniform:
      return rng.uniform();
    case Form::TwoSidedZ: {
      const double z = rng.normal(p1_, 1.0);
      return std::erfc(std::fabs(z) / std::numbers::sqrt2);
    }
    case Form::Beta:
      return rng.beta(p1_, p2_);
    case Form::PiecewiseConstant: {
      const double u = rng.uniform();
      double acc = 0.0;
      for (const auto& p : pieces_) {
        const double mass = p.level * (p.hi - p.lo);
        if (mass > 0.0 && u <= acc + mass) return p.lo + (u - acc) / p.level;
        acc += mass;
      }
      // Rounding left u beyond the accumulated mass: return the top of the
      // last piece with positive level.
      for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
        if (it->level > 0.0) return std::nextafter(it->hi, it->lo);
      }
      return 0.5;
    }
  }
  return 0.0;
}

bool AlternativeDensity::nonincreasing() const {
  switch (form_) {
    case Form::Uniform:
    case Form::TwoSidedZ:
      return true;
    case Form::Beta:
      return p1_ <= 1.0 && p2_ >= 1.0;
    case Form::PiecewiseConstant:
      for (std::size_t i = 1; i < pieces_.size(); ++i) {
        if (pieces_[i].level > pieces_[i - 1].level) return false;
      }
      return true;
  }
  return false;
}

std::vector<double> AlternativeDensity::breakpoints() const {
  std::vector<double> out;
  if (form_ == Form::PiecewiseConstant) {
    for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].lo);
  }
  return out;
}

}  // namespace acctest
