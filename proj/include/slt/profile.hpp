#pragma once

// Radial function carriers. Two concrete representations share one concept:
//
//   RadialProfile  -- piecewise-linear in the radius (the workhorse),
//   RadialStep     -- piecewise-constant in the radius (indicators and other
//                     simple functions, where level sets must be exact).
//
// Both expose exact superlevel-set decompositions {r : f(r) > lambda} as
// finite unions of radius intervals; all norms downstream are computed from
// those. Restriction and weighted-disjoint-sum views model the same concept
// so that functions with jumps (truncations, sums over disjoint annuli) never
// need a lossy piecewise-linear re-approximation.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "slt/geometry.hpp"
#include "slt/quadrature.hpp"

namespace slt {

// A finite union of half-open radius intervals [lo, hi), kept sorted and
// disjoint.
struct IntervalSet {
  std::vector<std::pair<double, double>> parts;

  double measure(const BallDomain& dom) const {
    const double nu = dom.unit_volume();
    double m = 0.0;
    for (const auto& [lo, hi] : parts) {
      m += nu * (std::pow(hi, dom.dim()) - std::pow(lo, dom.dim()));
    }
    return m;
  }

  void clip(double lo_cut, double hi_cut) {
    std::vector<std::pair<double, double>> out;
    for (auto& [lo, hi] : parts) {
      const double l = std::max(lo, lo_cut);
      const double h = std::min(hi, hi_cut);
      if (h > l) out.emplace_back(l, h);
    }
    parts = std::move(out);
  }

  void append_merged(double lo, double hi) {
    if (!(hi > lo)) return;
    if (!parts.empty() && lo <= parts.back().second) {
      parts.back().second = std::max(parts.back().second, hi);
    } else {
      parts.emplace_back(lo, hi);
    }
  }
};

template <class F>
concept RadialFunction = requires(const F& f, double r, double lam) {
  { f.domain() } -> std::convertible_to<const BallDomain&>;
  { f.value(r) } -> std::convertible_to<double>;
  { f.max_value() } -> std::convertible_to<double>;
  { f.superlevel(lam) } -> std::convertible_to<IntervalSet>;
  { f.radial_breakpoints() } -> std::convertible_to<std::vector<double>>;
  { f.value_breakpoints() } -> std::convertible_to<std::vector<double>>;
};

// Piecewise-linear radial function on a ball: knots 0 = r_0 < ... < r_K = a,
// nonnegative values, zero outside [0, a].
class RadialProfile {
 public:
  RadialProfile(BallDomain dom, std::vector<double> radii,
                std::vector<double> values, bool decreasing = false)
      : dom_(std::move(dom)),
        radii_(std::move(radii)),
        values_(std::move(values)),
        decreasing_(decreasing) {
    if (radii_.size() < 2 || radii_.size() != values_.size())
      throw std::invalid_argument("RadialProfile: bad knot arrays");
    if (radii_.front() != 0.0)
      throw std::invalid_argument("RadialProfile: first knot must be 0");
    if (std::abs(radii_.back() - dom_.radius()) >
        1e-12 * std::max(1.0, dom_.radius()))
      throw std::invalid_argument(
          "RadialProfile: last knot must be the domain radius");
    radii_.back() = dom_.radius();
    for (std::size_t i = 0; i + 1 < radii_.size(); ++i) {
      if (!(radii_[i] < radii_[i + 1]))
        throw std::invalid_argument("RadialProfile: knots must increase");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
        throw std::invalid_argument("RadialProfile: values must be >= 0");
      if (decreasing_ && i > 0 && values_[i] > values_[i - 1] + 0.0)
        throw std::invalid_argument("RadialProfile: not decreasing");
    }
  }

  const BallDomain& domain() const { return dom_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }
  bool decreasing_flag() const { return decreasing_; }
  std::size_t knot_count() const { return radii_.size(); }

  double value(double r) const {
    if (r < 0.0 || r > dom_.radius()) return 0.0;
    const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    if (it == radii_.begin()) return values_.front();
    if (it == radii_.end()) return values_.back();
    const std::size_t i = static_cast<std::size_t>(it - radii_.begin()) - 1;
    const double t = (r - radii_[i]) / (radii_[i + 1] - radii_[i]);
    return values_[i] + t * (values_[i + 1] - values_[i]);
  }

  double max_value() const {
    return *std::max_element(values_.begin(), values_.end());
  }

  double boundary_value() const { return values_.back(); }

  // Slope magnitude on knot interval i (the radial weak gradient there).
  double slope(std::size_t i) const {
    return (values_[i + 1] - values_[i]) / (radii_[i + 1] - radii_[i]);
  }

  IntervalSet superlevel(double lam) const {
    IntervalSet out;
    for (std::size_t i = 0; i + 1 < radii_.size(); ++i) {
      const double v0 = values_[i], v1 = values_[i + 1];
      const double r0 = radii_[i], r1 = radii_[i + 1];
      if (v0 > lam && v1 > lam) {
        out.append_merged(r0, r1);
      } else if (v0 > lam || v1 > lam) {
        const double x = r0 + (lam - v0) / (v1 - v0) * (r1 - r0);
        if (v0 > lam)
          out.append_merged(r0, x);
        else
          out.append_merged(x, r1);
      }
    }
    return out;
  }

  std::vector<double> radial_breakpoints() const { return radii_; }

  std::vector<double> value_breakpoints() const {
    std::vector<double> v = values_;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  // f_lambda(r) := f(lambda * r). Exact: piecewise-linear structure is
  // preserved under the linear change of radius.
  RadialProfile dilate(double lambda) const {
    if (!(lambda > 0.0))
      throw std::invalid_argument("RadialProfile::dilate: lambda > 0 required");
    const double a = dom_.radius();
    std::vector<double> r, v;
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      const double ri = radii_[i] / lambda;
      if (ri < a) {
        r.push_back(ri);
        v.push_back(values_[i]);
      }
    }
    r.push_back(a);
    v.push_back(value(lambda * a));
    return RadialProfile(dom_, std::move(r), std::move(v), decreasing_);
  }

  RadialProfile scaled(double c) const {
    if (!(c >= 0.0)) throw std::invalid_argument("RadialProfile::scaled: c >= 0");
    std::vector<double> v = values_;
    for (double& x : v) x *= c;
    return RadialProfile(dom_, radii_, std::move(v), decreasing_);
  }

  // Replaces the values inside [0, s] by the constant f(s); the result is
  // still piecewise-linear (a knot is inserted at s).
  RadialProfile flattened_inside(double s) const {
    if (!(s > 0.0 && s < dom_.radius()))
      throw std::invalid_argument("RadialProfile::flattened_inside: bad radius");
    const double level = value(s);
    std::vector<double> r{0.0}, v{level};
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      if (radii_[i] <= s) continue;
      if (r.size() == 1) {
        r.push_back(s);
        v.push_back(level);
      }
      r.push_back(radii_[i]);
      v.push_back(values_[i]);
    }
    if (r.size() == 1) {
      r.push_back(s);
      v.push_back(level);
    }
    if (r.back() != dom_.radius()) {
      r.push_back(dom_.radius());
      v.push_back(values_.back());
    }
    return RadialProfile(dom_, std::move(r), std::move(v), decreasing_);
  }

 private:
  BallDomain dom_;
  std::vector<double> radii_;
  std::vector<double> values_;
  bool decreasing_;
};

// Piecewise-constant radial function: value values_[i] on [edges_[i],
// edges_[i+1]), zero outside the domain.
class RadialStep {
 public:
  RadialStep(BallDomain dom, std::vector<double> edges,
             std::vector<double> values)
      : dom_(std::move(dom)), edges_(std::move(edges)), values_(std::move(values)) {
    if (edges_.size() < 2 || values_.size() + 1 != edges_.size())
      throw std::invalid_argument("RadialStep: bad arrays");
    if (edges_.front() != 0.0 ||
        std::abs(edges_.back() - dom_.radius()) > 1e-12 * std::max(1.0, dom_.radius()))
      throw std::invalid_argument("RadialStep: edges must span [0, radius]");
    edges_.back() = dom_.radius();
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
      if (!(edges_[i] < edges_[i + 1]))
        throw std::invalid_argument("RadialStep: edges must increase");
    for (double v : values_)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("RadialStep: values must be >= 0");
  }

  static RadialStep ball_indicator(const BallDomain& dom, double rho,
                                   double height = 1.0) {
    if (!(rho > 0.0)) throw std::invalid_argument("ball_indicator: rho > 0");
    if (rho >= dom.radius())
      return RadialStep(dom, {0.0, dom.radius()}, {height});
    return RadialStep(dom, {0.0, rho, dom.radius()}, {height, 0.0});
  }

  static RadialStep annulus_indicator(const BallDomain& dom, double r1,
                                      double r2, double height = 1.0) {
    if (!(0.0 <= r1 && r1 < r2 && r2 <= dom.radius()))
      throw std::invalid_argument("annulus_indicator: bad radii");
    std::vector<double> e, v;
    if (r1 > 0.0) {
      e = {0.0, r1, r2};
      v = {0.0, height};
    } else {
      e = {0.0, r2};
      v = {height};
    }
    if (r2 < dom.radius()) {
      e.push_back(dom.radius());
      v.push_back(0.0);
    }
    return RadialStep(dom, std::move(e), std::move(v));
  }

  const BallDomain& domain() const { return dom_; }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& cell_values() const { return values_; }

  double value(double r) const {
    if (r < 0.0 || r >= dom_.radius()) return 0.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - edges_.begin());
    return values_[i == 0 ? 0 : i - 1];
  }

  double max_value() const {
    return *std::max_element(values_.begin(), values_.end());
  }

  IntervalSet superlevel(double lam) const {
    IntervalSet out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] > lam) out.append_merged(edges_[i], edges_[i + 1]);
    }
    return out;
  }

  std::vector<double> radial_breakpoints() const { return edges_; }

  std::vector<double> value_breakpoints() const {
    std::vector<double> v = values_;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

 private:
  BallDomain dom_;
  std::vector<double> edges_;
  std::vector<double> values_;
};

// f . chi_{[0, w)} : keeps the part of f strictly inside radius w.
template <RadialFunction F>
class InnerRestriction {
 public:
  InnerRestriction(const F& f, double w) : f_(&f), w_(w) {}

  const BallDomain& domain() const { return f_->domain(); }
  double value(double r) const { return r < w_ ? f_->value(r) : 0.0; }
  double max_value() const { return f_->max_value(); }
  IntervalSet superlevel(double lam) const {
    IntervalSet s = f_->superlevel(lam);
    s.clip(0.0, w_);
    return s;
  }
  std::vector<double> radial_breakpoints() const {
    std::vector<double> b = f_->radial_breakpoints();
    b.push_back(w_);
    std::sort(b.begin(), b.end());
    return b;
  }
  std::vector<double> value_breakpoints() const { return f_->value_breakpoints(); }

 private:
  const F* f_;
  double w_;
};

// f . chi_{[t, infinity)} : zero inside radius t.
template <RadialFunction F>
class OuterRestriction {
 public:
  OuterRestriction(const F& f, double t) : f_(&f), t_(t) {}

  const BallDomain& domain() const { return f_->domain(); }
  double value(double r) const { return r >= t_ ? f_->value(r) : 0.0; }
  double max_value() const { return f_->value(t_); }
  IntervalSet superlevel(double lam) const {
    IntervalSet s = f_->superlevel(lam);
    s.clip(t_, f_->domain().radius());
    return s;
  }
  std::vector<double> radial_breakpoints() const {
    std::vector<double> b = f_->radial_breakpoints();
    b.push_back(t_);
    std::sort(b.begin(), b.end());
    return b;
  }
  std::vector<double> value_breakpoints() const { return f_->value_breakpoints(); }

 private:
  const F* f_;
  double t_;
};

// |c| * f for a nonnegative weight.
template <RadialFunction F>
class ScaledFunction {
 public:
  ScaledFunction(const F& f, double c) : f_(&f), c_(std::abs(c)) {}

  const BallDomain& domain() const { return f_->domain(); }
  double value(double r) const { return c_ * f_->value(r); }
  double max_value() const { return c_ * f_->max_value(); }
  IntervalSet superlevel(double lam) const {
    if (c_ == 0.0) return {};
    return f_->superlevel(lam / c_);
  }
  std::vector<double> radial_breakpoints() const {
    return f_->radial_breakpoints();
  }
  std::vector<double> value_breakpoints() const {
    std::vector<double> v = f_->value_breakpoints();
    for (double& x : v) x *= c_;
    return v;
  }

 private:
  const F* f_;
  double c_;
};

// p-th power L^p norm integrand over cells; shared by the norm below.
template <RadialFunction F>
double lp_modular_radial(const F& f, double p, double abs_tol = 1e-12) {
  const BallDomain& dom = f.domain();
  const int d = dom.dim();
  const double factor = d * dom.unit_volume();
  const auto integrand = [&](double r) {
    return std::pow(f.value(r), p) * std::pow(r, d - 1);
  };
  std::vector<double> cells = f.radial_breakpoints();
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    total += integrate(integrand, cells[i], cells[i + 1], abs_tol);
  }
  return factor * total;
}

// (int_Omega |f|^p dx)^{1/p} via the radial reduction
// d * nu_d * int_0^a |f(r)|^p r^{d-1} dr.
template <RadialFunction F>
double lp_norm_radial(const F& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_radial: p >= 1 required");
  return std::pow(lp_modular_radial(f, p), 1.0 / p);
}

// W_0^{1,p} seminorm of a piecewise-linear radial profile; exact since the
// slope is constant per knot interval. A profile used as a W_0^{1,p} element
// must vanish at the boundary.
inline double sobolev_seminorm_radial(const RadialProfile& f, double p,
                                      bool require_zero_boundary = true) {
  if (!(p >= 1.0))
    throw std::invalid_argument("sobolev_seminorm_radial: p >= 1 required");
  if (require_zero_boundary && f.boundary_value() != 0.0)
    throw std::invalid_argument(
        "sobolev_seminorm_radial: nonzero boundary value");
  const BallDomain& dom = f.domain();
  const int d = dom.dim();
  const double nu = dom.unit_volume();
  double sum = 0.0;
  const auto& r = f.radii();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double s = std::abs(f.slope(i));
    if (s == 0.0) continue;
    sum += std::pow(s, p) * nu * (std::pow(r[i + 1], d) - std::pow(r[i], d));
  }
  return std::pow(sum, 1.0 / p);
}

// Signed linear combination of piecewise-linear profiles, returned as the
// (nonnegative) absolute value with knots inserted at sign changes. All
// norms downstream act on |f|, so this loses nothing.
inline RadialProfile abs_linear_combination(
    std::span<const RadialProfile* const> profiles, std::span<const double> coefs) {
  if (profiles.empty() || profiles.size() != coefs.size())
    throw std::invalid_argument("abs_linear_combination: size mismatch");
  const BallDomain& dom = profiles[0]->domain();
  std::vector<double> knots;
  for (const RadialProfile* f : profiles) {
    const auto& r = f->radii();
    knots.insert(knots.end(), r.begin(), r.end());
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<double> vals(knots.size(), 0.0);
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    for (std::size_t k = 0; k < knots.size(); ++k) {
      vals[k] += coefs[j] * profiles[j]->value(knots[k]);
    }
  }
  std::vector<double> r_out, v_out;
  r_out.reserve(knots.size() + 8);
  v_out.reserve(knots.size() + 8);
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (k > 0 && ((vals[k - 1] < 0.0 && vals[k] > 0.0) ||
                  (vals[k - 1] > 0.0 && vals[k] < 0.0))) {
      const double t = vals[k - 1] / (vals[k - 1] - vals[k]);
      const double x = knots[k - 1] + t * (knots[k] - knots[k - 1]);
      if (x > r_out.back() && x < knots[k]) {
        r_out.push_back(x);
        v_out.push_back(0.0);
      }
    }
    r_out.push_back(knots[k]);
    v_out.push_back(std::abs(vals[k]));
  }
  return RadialProfile(dom, std::move(r_out), std::move(v_out));
}

inline RadialProfile abs_difference(const RadialProfile& f,
                                    const RadialProfile& g) {
  const RadialProfile* ps[2] = {&f, &g};
  const double cs[2] = {1.0, -1.0};
  return abs_linear_combination(std::span<const RadialProfile* const>(ps, 2),
                                std::span<const double>(cs, 2));
}

// Builders for the recurring test shapes.

// Tent: height at the center, linear to 0 at outer_radius.
inline RadialProfile make_tent(const BallDomain& dom, double outer_radius,
                               double height = 1.0) {
  if (outer_radius < dom.radius()) {
    return RadialProfile(dom, {0.0, outer_radius, dom.radius()},
                         {height, 0.0, 0.0}, true);
  }
  return RadialProfile(dom, {0.0, dom.radius()}, {height, 0.0}, true);
}

// Plateau-tent bump: constant inner plateau on [0, outer/2], linear to 0 at
// outer. The canonical bump has height 1 on the unit ball.
inline RadialProfile make_plateau_tent(const BallDomain& dom,
                                       double outer_radius,
                                       double height = 1.0) {
  const double half = 0.5 * outer_radius;
  if (outer_radius < dom.radius()) {
    return RadialProfile(dom, {0.0, half, outer_radius, dom.radius()},
                         {height, height, 0.0, 0.0}, true);
  }
  return RadialProfile(dom, {0.0, half, dom.radius()}, {height, height, 0.0},
                       true);
}

// (1 - r/outer)^beta sampled on a uniform grid; monotone decreasing.
inline RadialProfile make_power_profile(const BallDomain& dom,
                                        double outer_radius, double beta,
                                        double height = 1.0,
                                        std::size_t knots = 64) {
  std::vector<double> r, v;
  for (std::size_t k = 0; k <= knots; ++k) {
    const double x = outer_radius * static_cast<double>(k) / knots;
    r.push_back(x);
    v.push_back(height * std::pow(1.0 - x / outer_radius, beta));
  }
  v.back() = 0.0;
  if (outer_radius < dom.radius()) {
    r.push_back(dom.radius());
    v.push_back(0.0);
  } else {
    r.back() = dom.radius();
  }
  return RadialProfile(dom, std::move(r), std::move(v), true);
}

} // namespace slt
