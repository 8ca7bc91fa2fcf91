#pragma once

// The modular rho_{q(.)}, the Luxemburg norm of L^{q(.)}, and the variable
// Lorentz norm L^{q(.), p}.
//
// The Lorentz norm is an outer integral over the level lambda of the
// Luxemburg norm of the superlevel indicator; each Luxemburg evaluation is a
// bisection whose modular is integrated from a precomputed node table
// (exponent-field values cached per quadrature node), with warm-started
// brackets along the lambda grid. Constant exponent fields take exact
// closed-form shortcuts throughout.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "slt/geometry.hpp"
#include "slt/profile.hpp"
#include "slt/quadrature.hpp"

namespace slt {

struct NormSpec {
  ExponentField q;
  double p;

  NormSpec(ExponentField q_field, double second_index)
      : q(std::move(q_field)), p(second_index) {
    if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: p >= 1 required");
  }
};

namespace detail {

// (v / lam)^e without overflow surprises; v, lam > 0.
inline double pow_ratio(double v, double lam, double e) {
  if (v <= 0.0) return 0.0;
  const double t = e * (std::log(v) - std::log(lam));
  if (t > 700.0) return std::numeric_limits<double>::infinity();
  return std::exp(t);
}

} // namespace detail

// rho_{q(.)}(f / lam) = d nu_d int |f(r)/lam|^{q(r)} r^{d-1} dr.
template <RadialFunction F, ScalarField Q>
double modular_scaled(const F& f, const Q& field, double lam,
                      double abs_tol = 1e-12) {
  const BallDomain& dom = f.domain();
  const int d = dom.dim();
  const double factor = d * dom.unit_volume();
  std::vector<double> cells = f.radial_breakpoints();
  for (double b : field.breakpoints()) cells.push_back(b);
  cells.push_back(0.0);
  cells.push_back(dom.radius());
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  const auto integrand = [&](double r) {
    return detail::pow_ratio(f.value(r), lam, field(r)) * std::pow(r, d - 1);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    if (cells[i] == 0.0) {
      total += integrate_graded_to_zero(integrand, cells[i + 1], abs_tol);
    } else {
      total += integrate(integrand, cells[i], cells[i + 1], abs_tol);
    }
  }
  return factor * total;
}

// The modular rho_{q(.),Omega}(f); the exponent field is finite-valued here
// (no essential-sup part).
template <RadialFunction F, ScalarField Q>
double modular(const F& f, const Q& field, double abs_tol = 1e-12) {
  return modular_scaled(f, field, 1.0, abs_tol);
}

// Precomputed quadrature nodes over a fixed radial partition with the
// exponent field evaluated once per node. set_modular() then computes
// int_E s^{-q(r)} dmu for interval sets E using cached nodes on interior
// cells and fresh 15-point panels on the two boundary slivers.
template <ScalarField Q>
class ModularTable {
 public:
  ModularTable(const BallDomain& dom, const Q& field,
               std::vector<double> breakpoints, int graded_levels = 48)
      : dom_(dom), field_(field) {
    const double a = dom.radius();
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (double b : breakpoints)
      if (b > 0.0 && b < a) cuts.push_back(b);
    for (double b : field.breakpoints())
      if (b > 0.0 && b < a) cuts.push_back(b);
    cuts.push_back(a);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    // Grade the first cell toward the origin (the field's singular point).
    std::vector<double> edges;
    {
      const double first = cuts[1];
      std::vector<double> sub;
      double hi = first;
      for (int k = 0; k < graded_levels && hi > 1e-300; ++k) {
        sub.push_back(hi);
        hi *= 0.5;
      }
      edges.push_back(0.0);
      for (auto it = sub.rbegin(); it != sub.rend(); ++it) edges.push_back(*it);
      for (std::size_t i = 2; i < cuts.size(); ++i) edges.push_back(cuts[i]);
    }
    // Split any remaining wide cells so the field is well resolved per cell.
    std::vector<double> refined{edges.front()};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double lo = edges[i], hi = edges[i + 1];
      int parts = 1;
      if (lo > 0.0 && hi / lo > 4.0)
        parts = static_cast<int>(std::ceil(std::log2(hi / lo) / 2.0));
      for (int k = 1; k <= parts; ++k)
        refined.push_back(lo == 0.0
                              ? hi * static_cast<double>(k) / parts
                              : lo * std::pow(hi / lo, static_cast<double>(k) / parts));
    }
    edges = std::move(refined);
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const int d = dom.dim();
    const double geom = d * dom.unit_volume();
    cell_lo_.reserve(edges.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      cell_lo_.push_back(edges[i]);
      cell_hi_.push_back(edges[i + 1]);
      const double mid = 0.5 * (edges[i] + edges[i + 1]);
      const double half = 0.5 * (edges[i + 1] - edges[i]);
      for (int j = 0; j < 15; ++j) {
        const int k = j < 7 ? j : 14 - j;
        const double off = detail::kGK15Nodes[k];
        const double r = j < 7 ? mid - half * off : mid + half * off;
        const double w = detail::kGK15Weights[k] * half;
        node_w_.push_back(geom * w * std::pow(r, d - 1));
        node_q_.push_back(field(r));
      }
    }
  }

  const BallDomain& domain() const { return dom_; }

  // int_E s^{-q(r)} dmu(r); E must lie inside the domain.
  double set_modular(const IntervalSet& E, double s) const {
    const double ls = std::log(s);
    double total = 0.0;
    for (const auto& [lo, hi] : E.parts) {
      total += range_modular(lo, hi, ls);
    }
    return total;
  }

 private:
  double range_modular(double lo, double hi, double ls) const {
    if (!(hi > lo)) return 0.0;
    // Cells fully inside [lo, hi]: cached nodes. Boundary slivers: fresh.
    const auto first_it =
        std::lower_bound(cell_lo_.begin(), cell_lo_.end(), lo);
    std::size_t ci = static_cast<std::size_t>(first_it - cell_lo_.begin());
    // Partial left sliver in cell ci-1.
    double total = 0.0;
    if (ci > 0 && cell_hi_[ci - 1] > lo) {
      total += fresh_panel(lo, std::min(hi, cell_hi_[ci - 1]), ls);
      if (hi <= cell_hi_[ci - 1]) return total;
    }
    while (ci < cell_lo_.size() && cell_hi_[ci] <= hi) {
      const std::size_t base = ci * 15;
      double cell = 0.0;
      for (int j = 0; j < 15; ++j) {
        const double t = -node_q_[base + j] * ls;
        cell += node_w_[base + j] *
                (t > 700.0 ? std::numeric_limits<double>::infinity()
                           : std::exp(t));
      }
      total += cell;
      ++ci;
    }
    if (ci < cell_lo_.size() && cell_lo_[ci] < hi) {
      total += fresh_panel(cell_lo_[ci], hi, ls);
    }
    return total;
  }

  double fresh_panel(double lo, double hi, double ls) const {
    if (!(hi > lo)) return 0.0;
    const int d = dom_.dim();
    const double geom = d * dom_.unit_volume();
    const auto integrand = [&](double r) {
      const double t = -field_(r) * ls;
      const double v = t > 700.0 ? std::numeric_limits<double>::infinity()
                                 : std::exp(t);
      return geom * v * std::pow(r, d - 1);
    };
    return gauss_kronrod_15(integrand, lo, hi).value;
  }

  BallDomain dom_;
  Q field_;
  std::vector<double> cell_lo_, cell_hi_;
  std::vector<double> node_w_, node_q_;
};

namespace detail {

// Modular of an indicator against a possibly unbounded field, graded toward
// the origin with divergence detection (cell contributions that stop
// decaying mean the integral is infinite for this s).
template <ScalarField Q>
double indicator_modular_graded(const IntervalSet& E, const Q& field,
                                const BallDomain& dom, double s,
                                double abs_tol = 1e-13) {
  const int d = dom.dim();
  const double geom = d * dom.unit_volume();
  const double ls = std::log(s);
  const auto integrand = [&](double r) {
    const double t = -field(r) * ls;
    if (t > 700.0) return std::numeric_limits<double>::infinity();
    return geom * std::exp(t) * std::pow(r, d - 1);
  };
  double total = 0.0;
  for (const auto& [lo, hi] : E.parts) {
    if (lo > 0.0) {
      std::vector<double> bps = field.breakpoints();
      total += integrate_cells(integrand, lo, hi, bps, abs_tol);
      if (std::isinf(total)) return total;
      continue;
    }
    // Dyadic march toward 0 with divergence check.
    double cell_hi = hi;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2000; ++k) {
      const double cell_lo = 0.5 * cell_hi;
      const double cell = integrate(integrand, cell_lo, cell_hi, abs_tol, 20);
      if (std::isinf(cell)) return cell;
      total += cell;
      if (k > 12 && cell >= prev && cell > abs_tol) {
        return std::numeric_limits<double>::infinity(); // no decay: diverges
      }
      if (k > 12 && cell < abs_tol * 1e-3) break;
      prev = cell;
      cell_hi = cell_lo;
      if (cell_hi < 1e-300) break;
    }
  }
  return total;
}

} // namespace detail

// Luxemburg norm of the indicator of a radius-interval set E:
//   inf { s > 0 : int_E (1/s)^{q(x)} dx <= 1 }.
// Constant fields reduce to |E|^{1/q0}. `table` (optional) supplies cached
// nodes; `hint` (optional) warm-starts the bracket.
template <ScalarField Q>
double indicator_luxemburg(const IntervalSet& E, const Q& field,
                           const BallDomain& dom, double rel_tol = 1e-11,
                           const ModularTable<Q>* table = nullptr,
                           double hint = 0.0) {
  const double m = E.measure(dom);
  if (m <= 0.0) return 0.0;
  const bool unbounded = std::isinf(field.upper_bound());
  if (!unbounded && field.lower_bound() == field.upper_bound()) {
    return std::pow(m, 1.0 / field.lower_bound());
  }
  const auto rho = [&](double s) {
    if (table && !unbounded) return table->set_modular(E, s);
    return detail::indicator_modular_graded(E, field, dom, s);
  };
  // rho decreases in s; find the smallest s with rho(s) <= 1.
  double guess = hint;
  if (!(guess > 0.0)) {
    const double qm = std::isinf(field.upper_bound())
                          ? field.lower_bound()
                          : 0.5 * (field.lower_bound() + field.upper_bound());
    guess = std::pow(m, 1.0 / qm);
  }
  double lo = guess, hi = guess;
  int guard = 0;
  while (rho(hi) > 1.0) {
    lo = hi;
    hi *= 4.0;
    if (++guard > 600)
      throw std::runtime_error("indicator_luxemburg: bracket failure (high)");
  }
  guard = 0;
  while (rho(lo) <= 1.0) {
    hi = lo;
    lo *= 0.25;
    if (++guard > 600) {
      // rho stays <= 1 all the way down: the norm vanishes in the limit.
      return 0.0;
    }
  }
  for (int i = 0; i < 200 && (hi - lo) > rel_tol * hi; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (rho(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Luxemburg norm of a general radial function: bisection on lambda with the
// scaled modular. Constant exponents use the exact closed form.
template <RadialFunction F, ScalarField Q>
double luxemburg_norm(const F& f, const Q& field, double rel_tol = 1e-10) {
  const double sup = f.max_value();
  if (sup <= 0.0) return 0.0;
  if (field.lower_bound() == field.upper_bound() &&
      !std::isinf(field.upper_bound())) {
    const double q0 = field.lower_bound();
    return std::pow(modular(f, field), 1.0 / q0);
  }
  const double meas = f.domain().measure();
  const double q_lo = field.lower_bound();
  const double q_hi_raw = field.upper_bound();
  const double q_hi = std::isinf(q_hi_raw) ? q_lo : q_hi_raw;
  double lo = sup * std::min(1.0, std::pow(meas, 1.0 / q_lo)) / 1024.0;
  double hi = sup * std::max(1.0, std::pow(meas, 1.0 / q_hi)) * 1024.0;
  int guard = 0;
  while (modular_scaled(f, field, hi) > 1.0) {
    hi *= 4.0;
    if (++guard > 300)
      throw std::runtime_error("luxemburg_norm: bracket failure (high)");
  }
  guard = 0;
  while (modular_scaled(f, field, lo) <= 1.0) {
    hi = std::min(hi, lo);
    lo *= 0.25;
    if (++guard > 300) return 0.0;
  }
  int steps = 0;
  while ((hi - lo) > rel_tol * hi) {
    if (++steps > 200)
      throw std::runtime_error("luxemburg_norm: bisection did not converge");
    const double mid = std::sqrt(lo * hi);
    if (modular_scaled(f, field, mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

struct LorentzOptions {
  double abs_tol_p = 1e-10;  // absolute tolerance on the p-th power
  double lux_rel_tol = 1e-11;
  int max_depth = 14;
};

// p-th power of the variable Lorentz norm,
//   int_0^{sup f} lambda^{p-1} || chi_{{f > lambda}} ||_{L^{q(.)}}^p dlambda.
// The lambda grid is seeded at every distinct profile value (the level-set
// measure kinks there) and refined adaptively within each cell.
template <RadialFunction F>
double lorentz_norm_p_power(const F& f, const NormSpec& spec,
                            LorentzOptions opts = {}) {
  const double sup = f.max_value();
  if (sup <= 0.0) return 0.0;
  const BallDomain& dom = f.domain();
  const double p = spec.p;
  const bool constant_q = spec.q.is_constant();

  std::vector<double> lam_cells = f.value_breakpoints();
  lam_cells.push_back(0.0);
  std::sort(lam_cells.begin(), lam_cells.end());
  lam_cells.erase(std::unique(lam_cells.begin(), lam_cells.end()),
                  lam_cells.end());
  while (!lam_cells.empty() && lam_cells.back() > sup) lam_cells.pop_back();
  if (lam_cells.empty() || lam_cells.back() < sup) lam_cells.push_back(sup);

  std::unique_ptr<ModularTable<ExponentField>> table;
  if (!constant_q) {
    table = std::make_unique<ModularTable<ExponentField>>(
        dom, spec.q, f.radial_breakpoints());
  }

  double warm = 0.0;
  const auto indicator_norm = [&](double lam) {
    const IntervalSet E = f.superlevel(lam);
    if (constant_q) {
      const double m = E.measure(dom);
      return m <= 0.0 ? 0.0 : std::pow(m, 1.0 / spec.q.constant_value());
    }
    const double n = indicator_luxemburg(E, spec.q, dom, opts.lux_rel_tol,
                                         table.get(), warm);
    if (n > 0.0) warm = n;
    return n;
  };
  const auto integrand = [&](double lam) {
    const double n = indicator_norm(lam);
    if (n <= 0.0) return 0.0;
    return std::pow(lam, p - 1.0) * std::pow(n, p);
  };

  const double cell_tol =
      opts.abs_tol_p / static_cast<double>(lam_cells.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < lam_cells.size(); ++i) {
    warm = 0.0;
    total += detail::adaptive_rec(integrand, lam_cells[i], lam_cells[i + 1],
                                  cell_tol, opts.max_depth)
                 .value;
  }
  return total;
}

template <RadialFunction F>
double lorentz_norm(const F& f, const NormSpec& spec, LorentzOptions opts = {}) {
  return std::pow(lorentz_norm_p_power(f, spec, opts), 1.0 / spec.p);
}

// The Hoelder-conjugate exponent field x -> p(x) q(x) / (p(x) - q(x)), with
// the convention that the value is +infinity where p = q. A coincidence set
// of positive measure is rejected; the log-singular family touches its
// critical exponent only at the center (a single point).
class ConjugateField {
 public:
  ConjugateField(const ExponentField& p_field, const ExponentField& q_field,
                 const BallDomain& dom)
      : p_(p_field), q_(q_field) {
    const double a = dom.radius();
    if (p_.is_constant() && q_.is_constant()) {
      if (q_.constant_value() > p_.constant_value() + 1e-12)
        throw std::invalid_argument("ConjugateField: q > p");
      all_infinite_ = (q_.constant_value() == p_.constant_value());
      return;
    }
    // Pointwise validation on a log-spaced grid; equality is allowed only in
    // the limit r -> 0.
    for (int k = 0; k <= 200; ++k) {
      const double r = a * std::pow(10.0, -9.0 * (200 - k) / 200.0);
      const double pv = p_(r), qv = q_(r);
      if (qv > pv + 1e-12)
        throw std::invalid_argument("ConjugateField: q > p at some radius");
      if (qv >= pv - 1e-14 && r > 0.0 && k < 200) {
        // Interior coincidence would make the infinity set of positive
        // measure for these monotone families.
        throw std::invalid_argument(
            "ConjugateField: coincidence set of positive measure");
      }
    }
  }

  bool all_infinite() const { return all_infinite_; }

  double operator()(double r) const {
    if (all_infinite_) return std::numeric_limits<double>::infinity();
    const double pv = p_(r), qv = q_(r);
    if (qv >= pv) return std::numeric_limits<double>::infinity();
    return pv * qv / (pv - qv);
  }

  // m = p q / (p - q) increases in q and decreases in p.
  double lower_bound() const {
    if (all_infinite_) return std::numeric_limits<double>::infinity();
    const double phi = p_.upper_bound(), qlo = q_.lower_bound();
    return phi * qlo / std::max(phi - qlo, 1e-300);
  }

  double upper_bound() const {
    if (all_infinite_) return std::numeric_limits<double>::infinity();
    const double plo = p_.lower_bound(), qhi = q_.upper_bound();
    if (qhi >= plo) return std::numeric_limits<double>::infinity();
    return plo * qhi / (plo - qhi);
  }

  std::vector<double> breakpoints() const {
    std::vector<double> b = p_.breakpoints();
    for (double x : q_.breakpoints()) b.push_back(x);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }

 private:
  ExponentField p_;
  ExponentField q_;
  bool all_infinite_ = false;
};

inline ConjugateField holder_conjugate_field(const ExponentField& p_field,
                                             const ExponentField& q_field,
                                             const BallDomain& dom) {
  return ConjugateField(p_field, q_field, dom);
}

static_assert(ScalarField<ConjugateField>);

} // namespace slt
