#pragma once

// Compact / non-compact classification of the Sobolev embedding
// W_0^{1,p}(Omega) -> L^{q(.),p}(Omega) for the log-singular exponent
// family: the closed-form rearrangement s* of the singularity scale field,
// the finiteness integral (two evaluation routes with an exponential tail
// certificate), the indicator-decay diagnostic in the conjugate exponent,
// and the bump-family witness for the non-compact regime.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "slt/geometry.hpp"
#include "slt/profile.hpp"
#include "slt/rearrangement.hpp"
#include "slt/variable_norms.hpp"

namespace slt {

// r -> 1/(P - q(r)) where P is the constant upper exponent (p* in use).
// For the log-singular family this is (1/C)|log r|^ell up to clamping.
class ScaleField {
 public:
  ScaleField(ExponentField q, double upper) : q_(std::move(q)), upper_(upper) {
    if (q_.upper_bound() > upper_ + 1e-12)
      throw std::invalid_argument("ScaleField: q exceeds the upper exponent");
  }

  double operator()(double r) const {
    const double gap = upper_ - q_(r);
    if (gap <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / gap;
  }

  double lower_bound() const {
    const double gap = upper_ - q_.lower_bound();
    return gap <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / gap;
  }
  double upper_bound() const {
    const double gap = upper_ - q_.upper_bound();
    return gap <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / gap;
  }
  std::vector<double> breakpoints() const { return q_.breakpoints(); }

  // Log-spaced piecewise-linear discretization (for rearrangement oracles).
  RadialProfile discretize(const BallDomain& dom, std::size_t knots = 2048,
                           double min_radius_factor = 1e-9) const {
    const double a = dom.radius();
    std::vector<double> r{0.0};
    const double r_min = a * min_radius_factor;
    for (std::size_t k = 0; k <= knots; ++k) {
      r.push_back(r_min *
                  std::pow(a / r_min, static_cast<double>(k) / knots));
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    std::vector<double> v;
    v.reserve(r.size());
    for (double x : v) (void)x;
    for (double x : r) v.push_back(x == 0.0 ? (*this)(r_min * 0.5) : (*this)(x));
    return RadialProfile(dom, std::move(r), std::move(v));
  }

 private:
  ExponentField q_;
  double upper_;
};

static_assert(ScalarField<ScaleField>);

inline ScaleField s_field(const ExponentField& q, double upper) {
  return ScaleField(q, upper);
}

namespace detail {

// s*(t) for the log-singular scale field: the three-piece closed form.
// Valid for 0 < ell <= 1.
struct SStarParams {
  double C, ell, eta, nu_d, omega_measure;
  int d;

  double singular_cut() const { return nu_d * std::pow(eta, d); }
  double plateau() const {
    return std::pow(std::abs(std::log(1.0 / eta)), ell) / C;
  }
  double eval(double t) const {
    if (t >= omega_measure) return 0.0;
    const double cut = std::min(singular_cut(), omega_measure);
    if (t >= cut) return plateau();
    return std::pow(std::log(nu_d / t), ell) / (C * std::pow(d, ell));
  }
};

} // namespace detail

// The closed-form rearrangement s*(t) of the scale field, as an evaluable
// object. Rejects ell >= 1 (the public contract covers the sub-critical
// family; the finiteness integral handles ell = 1 internally).
class SStarClosedForm {
 public:
  SStarClosedForm(double C, int d, double ell, double eta,
                  const BallDomain& dom) {
    if (!(ell > 0.0 && ell < 1.0))
      throw std::invalid_argument("SStarClosedForm: need 0 < ell < 1");
    if (!(eta > 0.0 && eta < 1.0))
      throw std::invalid_argument("SStarClosedForm: need 0 < eta < 1");
    if (!(C > 0.0)) throw std::invalid_argument("SStarClosedForm: need C > 0");
    p_ = {C, ell, eta, dom.unit_volume(), dom.measure(), dom.dim()};
  }

  double operator()(double t) const { return p_.eval(t); }
  double singular_cut() const { return p_.singular_cut(); }
  double plateau_value() const { return p_.plateau(); }
  double domain_measure() const { return p_.omega_measure; }

 private:
  detail::SStarParams p_;
};

inline SStarClosedForm closed_form_s_star(double C, int d, double ell,
                                          double eta, const BallDomain& dom) {
  return SStarClosedForm(C, d, ell, eta, dom);
}

struct FinitenessResult {
  double value = 0.0;             // direct route
  double substituted_value = 0.0; // change-of-variables route
  bool converged = false;
  bool divergent = false; // integrand fails to decay (ell = 1, alpha large)
  double tail_omega = 0.0;
  double tail_y0 = 0.0;
  double tail_bound = 0.0;
};

// int_0^{|Omega|} alpha^{s*(t)} dt computed two ways:
//  (1) directly, on a mesh graded dyadically toward t = 0 (extended until the
//      integrand mass is exhausted -- for large alpha the mass sits far below
//      |Omega| 2^{-60});
//  (2) in the variable y = log(nu_d / t):
//      nu_d int_{-d log eta}^inf exp(kappa y^ell - y) dy + the plateau piece,
//      where kappa = log(alpha)/(C d^ell), truncated where the certified
//      envelope exp(-omega y) makes the remainder negligible.
// converged requires the two routes to agree to 1e-4 relative with a valid
// tail certificate. For ell = 1 and kappa >= 1 the integrand grows: the
// result is flagged divergent (the expected non-compact signal).
inline FinitenessResult finiteness_integral(double alpha, double C, int d,
                                            double ell, double eta,
                                            const BallDomain& dom) {
  if (!(alpha > 1.0))
    throw std::invalid_argument("finiteness_integral: alpha > 1 required");
  if (!(ell > 0.0 && ell <= 1.0))
    throw std::invalid_argument("finiteness_integral: 0 < ell <= 1");
  if (dom.radius() < eta)
    throw std::invalid_argument("finiteness_integral: domain must contain B_eta");

  FinitenessResult res;
  const detail::SStarParams sp{C, ell, eta, dom.unit_volume(), dom.measure(),
                               dom.dim()};
  const double log_alpha = std::log(alpha);
  const double kappa = log_alpha / (C * std::pow(d, ell));

  if (ell == 1.0 && kappa >= 1.0) {
    res.divergent = true;
    res.converged = false;
    res.value = std::numeric_limits<double>::infinity();
    res.substituted_value = res.value;
    return res;
  }

  // Tail certificate: kappa y^{ell-1} <= 1 - omega for y >= y0.
  const double y_min = -static_cast<double>(d) * std::log(eta);
  double omega, y0;
  if (ell < 1.0) {
    omega = 0.5;
    y0 = std::max(y_min, std::pow(kappa / (1.0 - omega), 1.0 / (1.0 - ell)));
  } else {
    omega = 1.0 - kappa;
    y0 = y_min;
  }
  res.tail_omega = omega;
  res.tail_y0 = y0;

  const double plateau_piece =
      (sp.omega_measure - std::min(sp.singular_cut(), sp.omega_measure)) *
      std::exp(log_alpha * sp.plateau());

  // Route 2 first (it also provides the remainder bound for route 1).
  const auto y_integrand = [&](double y) {
    const double e = kappa * std::pow(y, ell) - y;
    return e > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(e);
  };
  // Truncation point: exp(-omega y) tail below 1e-8 absolute after the nu_d
  // factor (and relative to the plateau scale).
  double Y = y0;
  {
    const double target = 1e-10;
    Y = std::max(y0, std::log(sp.nu_d / (omega * target)) / omega);
    Y = std::max(Y, y_min + 1.0);
  }
  double subst = 0.0;
  {
    std::vector<double> cuts;
    for (double y = y_min; y < Y; y += std::max(1.0, (Y - y_min) / 64.0))
      cuts.push_back(y);
    subst = sp.nu_d * integrate_cells(y_integrand, y_min, Y, cuts, 1e-13);
    res.tail_bound = sp.nu_d * std::exp(-omega * Y) / omega;
    subst += 0.0; // tail excluded; bounded by tail_bound
  }
  res.substituted_value = subst + plateau_piece;

  // Route 1: direct in t, graded toward 0. Mass concentrates near
  // t = nu_d exp(-y_peak); march until past the peak and the cells decay.
  const double cut = std::min(sp.singular_cut(), sp.omega_measure);
  const auto t_integrand = [&](double t) {
    const double e = log_alpha * sp.eval(t);
    return e > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(e);
  };
  double direct = 0.0;
  {
    double hi = cut;
    double prev_cell = std::numeric_limits<double>::infinity();
    const double t_stop = sp.nu_d * std::exp(-std::max(Y, 30.0));
    for (int k = 0; k < 4000; ++k) {
      const double lo = 0.5 * hi;
      const double cell = integrate(t_integrand, lo, hi, 1e-14, 20);
      direct += cell;
      if (std::isinf(cell)) break;
      if (hi < t_stop && cell < 1e-12 * std::max(direct, 1.0) &&
          cell <= prev_cell) {
        break;
      }
      prev_cell = cell;
      hi = lo;
      if (hi < 1e-280) break;
    }
  }
  res.value = direct + plateau_piece;

  const double rel_gap = std::abs(res.value - res.substituted_value) /
                         std::max({std::abs(res.value), 1e-300});
  const bool tail_ok =
      res.tail_bound <= 1e-8 * std::max(1.0, std::abs(res.value));
  res.converged = std::isfinite(res.value) && rel_gap < 1e-4 && tail_ok;
  return res;
}

// Luxemburg norms of chi_{B_{radii[n]}} in the Hoelder-conjugate field of
// (p*, q). Decays to zero exactly when the embedding machinery is almost
// compact; stalls at a positive level in the critical (ell = 1) regime.
inline std::vector<double> indicator_decay_diagnostic(
    const ExponentField& q, double p_star, const std::vector<double>& radii,
    const BallDomain& dom) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw std::invalid_argument(
          "indicator_decay_diagnostic: radii must decrease");
  const ConjugateField conj(ExponentField::constant(p_star), q, dom);
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    IntervalSet ball;
    ball.append_merged(0.0, std::min(r, dom.radius()));
    out.push_back(indicator_luxemburg(ball, conj, dom));
  }
  return out;
}

struct BumpWitness {
  double delta = 0.0;
  double threshold = 0.0; // e^{-C0 (d-p)/p} nu_d / 2^d
  double lorentz_lower = 0.0; // delta / p^{1/p}
  std::vector<long> n_values;
  std::vector<double> modulars;        // rho[chi_plateau / (delta n^{-(d-p)/p})]
  std::vector<double> luxemburg_lower; // delta n^{-(d-p)/p}
  std::vector<double> luxemburg_values;
  std::vector<double> lorentz_values;  // || phi_n ||_{L^{q(.),p}}
  std::vector<double> lp_values;       // || phi_n ||_{L^p}
  double grad_norm = 0.0;              // || grad phi ||_{L^p(B_1)}, n-invariant
  bool ok = false;
  std::string message;
};

// The non-compactness witness: rescaled plateau-tent bumps phi_n with the
// critical (ell = 1) exponent family. Verifies, for each n, that the modular
// of the rescaled inner-plateau indicator exceeds 1 (hence the Luxemburg
// lower bound), and that the Lorentz norm of phi_n stays above
// delta / p^{1/p} while || phi_n ||_{L^p} -> 0.
inline BumpWitness bump_noncompactness_witness(double p, int d, double C0,
                                               double eta0,
                                               const std::vector<long>& n_list,
                                               double domain_radius = 1.0) {
  if (!(p >= 1.0) || !(static_cast<double>(d) > p))
    throw std::invalid_argument("bump_noncompactness_witness: need 1 <= p < d");
  BallDomain dom(d, domain_radius);
  const ExponentField field = ExponentField::log_singular(p, d, C0, 1.0, eta0);
  const double sob = (static_cast<double>(d) - p) / p;

  BumpWitness w;
  w.threshold = std::exp(-C0 * sob) * dom.unit_volume() / std::pow(2.0, d);
  w.delta = 0.5 * w.threshold;
  w.lorentz_lower = w.delta / std::pow(p, 1.0 / p);
  w.ok = true;

  const NormSpec spec(field, p);
  {
    const RadialProfile phi = make_plateau_tent(dom, 1.0);
    w.grad_norm = sobolev_seminorm_radial(phi, p);
  }
  for (long n : n_list) {
    if (n < 1 || 1.0 / n > domain_radius)
      throw std::invalid_argument("bump_noncompactness_witness: bad n");
    const double height = std::pow(static_cast<double>(n), sob);
    const double scale = w.delta / height;
    const RadialStep plateau =
        RadialStep::ball_indicator(dom, 0.5 / static_cast<double>(n));
    const double mod = modular_scaled(plateau, field, scale);
    w.n_values.push_back(n);
    w.modulars.push_back(mod);
    w.luxemburg_lower.push_back(scale);
    const double lux = luxemburg_norm(plateau, field);
    w.luxemburg_values.push_back(lux);
    if (!(mod > 1.0)) {
      w.ok = false;
      w.message = "modular witness <= 1 at n = " + std::to_string(n) +
                  " (parameters outside the estimate's regime)";
    }
    if (lux + 1e-12 < scale) {
      w.ok = false;
      w.message = "Luxemburg lower bound failed at n = " + std::to_string(n);
    }
    const RadialProfile phi_n =
        make_plateau_tent(dom, 1.0 / static_cast<double>(n), height);
    w.lorentz_values.push_back(lorentz_norm(phi_n, spec));
    w.lp_values.push_back(lp_norm_radial(phi_n, p));
    if (!(w.lorentz_values.back() >= w.lorentz_lower - 1e-9)) {
      w.ok = false;
      w.message = "Lorentz lower bound failed at n = " + std::to_string(n);
    }
  }
  return w;
}

enum class Verdict { Compact, NonCompact, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Compact: return "Compact";
    case Verdict::NonCompact: return "NonCompact";
    default: return "Inconclusive";
  }
}

struct ClassifyParams {
  double p = 1.0;
  int d = 2;
  double C = 1.0;
  double ell = 0.5;
  double eta = 0.1;
  double domain_radius = 1.0;
  std::vector<double> alphas = {2.0, 10.0, 1e2, 1e4, 1e8};
  std::vector<long> witness_n = {4, 16, 64, 256};
};

struct CompactnessVerdict {
  Verdict verdict = Verdict::Inconclusive;
  ClassifyParams params;
  std::vector<double> alphas;
  std::vector<FinitenessResult> finiteness; // ell < 1 evidence
  BumpWitness bump;                         // ell = 1 evidence
  std::string note;
};

// ell < 1 with every finiteness integral converged -> Compact;
// ell = 1 with the bump witness succeeding -> NonCompact;
// anything else -> Inconclusive, with the evidence attached.
inline CompactnessVerdict classify(const ClassifyParams& params) {
  CompactnessVerdict out;
  out.params = params;
  out.alphas = params.alphas;
  BallDomain dom(params.d, params.domain_radius);
  if (params.ell < 1.0) {
    bool all_ok = true;
    for (double a : params.alphas) {
      out.finiteness.push_back(finiteness_integral(a, params.C, params.d,
                                                   params.ell, params.eta, dom));
      all_ok = all_ok && out.finiteness.back().converged;
    }
    out.verdict = all_ok ? Verdict::Compact : Verdict::Inconclusive;
    if (!all_ok) out.note = "finiteness integral failed to converge";
  } else if (params.ell == 1.0) {
    out.bump = bump_noncompactness_witness(params.p, params.d, params.C,
                                           params.eta, params.witness_n,
                                           params.domain_radius);
    out.verdict = out.bump.ok ? Verdict::NonCompact : Verdict::Inconclusive;
    if (!out.bump.ok) out.note = out.bump.message;
  } else {
    out.note = "ell > 1 is outside the classified regimes";
  }
  return out;
}

} // namespace slt
