#pragma once

// Ball domains in R^d and the exponent fields defined on them. Everything in
// the toolkit is radial about the ball center, so all geometry reduces to the
// scalar radius |x - x0| and the unit-ball volume nu_d.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <stdexcept>
#include <vector>

namespace slt {

// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
inline double unit_ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

class BallDomain {
 public:
  BallDomain(int dim, double radius,
             std::vector<double> center = {})
      : dim_(dim), radius_(radius), center_(std::move(center)) {
    if (dim_ < 2) throw std::invalid_argument("BallDomain: dim must be >= 2");
    if (!(radius_ > 0.0))
      throw std::invalid_argument("BallDomain: radius must be positive");
    if (center_.empty()) center_.assign(static_cast<std::size_t>(dim_), 0.0);
    if (center_.size() != static_cast<std::size_t>(dim_))
      throw std::invalid_argument("BallDomain: center/dim mismatch");
  }

  int dim() const { return dim_; }
  double radius() const { return radius_; }
  const std::vector<double>& center() const { return center_; }
  double unit_volume() const { return unit_ball_volume(dim_); }
  double measure() const {
    return unit_volume() * std::pow(radius_, dim_);
  }
  // Measure of the centered ball of radius r (clipped to the domain).
  double ball_measure(double r) const {
    const double rr = std::clamp(r, 0.0, radius_);
    return unit_volume() * std::pow(rr, dim_);
  }

 private:
  int dim_;
  double radius_;
  std::vector<double> center_;
};

// A scalar field on a ball, evaluated at the radius. Fields expose bounds
// (for norm bracketing) and breakpoints (radii where smoothness changes, used
// to seed quadrature cells).
template <class F>
concept ScalarField = requires(const F& f, double r) {
  { f(r) } -> std::convertible_to<double>;
  { f.lower_bound() } -> std::convertible_to<double>;
  { f.upper_bound() } -> std::convertible_to<double>;
  { f.breakpoints() } -> std::convertible_to<std::vector<double>>;
};

// The variable exponent q(.): either a constant q0, or the log-singular
// family
//   q(r) = p* - C / |log(1/r)|^ell   for 0 < r <= eta,   q(r) = q(eta) beyond,
// with p* = d p/(d - p), clamped into [1, p*]. The field increases to p* as
// r -> 0 and is constant outside the ball of radius eta.
class ExponentField {
 public:
  enum class Kind { Constant, LogSingular };

  static ExponentField constant(double q0) {
    if (!(q0 >= 1.0))
      throw std::invalid_argument("ExponentField: constant exponent must be >= 1");
    ExponentField f;
    f.kind_ = Kind::Constant;
    f.q0_ = q0;
    return f;
  }

  static ExponentField log_singular(double p, int d, double C, double ell,
                                    double eta) {
    if (!(p >= 1.0) || !(static_cast<double>(d) > p))
      throw std::invalid_argument("ExponentField: need 1 <= p < d");
    if (d < 2) throw std::invalid_argument("ExponentField: need d >= 2");
    if (!(C > 0.0)) throw std::invalid_argument("ExponentField: need C > 0");
    if (!(ell > 0.0 && ell <= 1.0))
      throw std::invalid_argument("ExponentField: need 0 < ell <= 1");
    if (!(eta > 0.0 && eta < 1.0))
      throw std::invalid_argument("ExponentField: need 0 < eta < 1");
    ExponentField f;
    f.kind_ = Kind::LogSingular;
    f.p_ = p;
    f.d_ = d;
    f.C_ = C;
    f.ell_ = ell;
    f.eta_ = eta;
    f.p_star_ = d * p / (static_cast<double>(d) - p);
    // The raw formula attains its minimum at r = eta; if it dips below 1
    // there, evaluation clamps and the field records the fact.
    f.clamped_ = (f.raw(eta) < 1.0);
    return f;
  }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  bool clamped() const { return clamped_; }

  double operator()(double r) const {
    if (kind_ == Kind::Constant) return q0_;
    if (r <= 0.0) return p_star_;
    const double rr = std::min(r, eta_);
    return std::clamp(raw(rr), 1.0, p_star_);
  }

  // Critical exponent p* = d p / (d - p); for a constant field this is just
  // the constant (the natural upper bound).
  double p_star() const { return kind_ == Kind::Constant ? q0_ : p_star_; }

  double lower_bound() const {
    if (kind_ == Kind::Constant) return q0_;
    return std::clamp(raw(eta_), 1.0, p_star_);
  }
  double upper_bound() const { return p_star(); }

  std::vector<double> breakpoints() const {
    if (kind_ == Kind::Constant) return {};
    return {eta_};
  }

  // LogSingular parameters (throw for constant fields).
  double sobolev_p() const { return checked(p_); }
  int dim() const {
    if (kind_ != Kind::LogSingular)
      throw std::logic_error("ExponentField: not log-singular");
    return d_;
  }
  double C() const { return checked(C_); }
  double ell() const { return checked(ell_); }
  double eta() const { return checked(eta_); }
  double constant_value() const {
    if (kind_ != Kind::Constant)
      throw std::logic_error("ExponentField: not constant");
    return q0_;
  }

 private:
  ExponentField() = default;
  double raw(double r) const {
    return p_star_ - C_ / std::pow(-std::log(r), ell_);
  }
  double checked(double v) const {
    if (kind_ != Kind::LogSingular)
      throw std::logic_error("ExponentField: not log-singular");
    return v;
  }

  Kind kind_ = Kind::Constant;
  double q0_ = 1.0;
  double p_ = 1.0;
  int d_ = 2;
  double C_ = 1.0;
  double ell_ = 1.0;
  double eta_ = 0.5;
  double p_star_ = 1.0;
  bool clamped_ = false;
};

static_assert(ScalarField<ExponentField>);

} // namespace slt
