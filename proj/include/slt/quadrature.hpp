#pragma once

// One-dimensional quadrature: adaptive Gauss-Kronrod 7-15 on intervals,
// dyadically graded meshes for integrands that are singular (or merely
// nasty) at the left endpoint, and reusable node tables for integrands of
// the form r -> w(r) * pow(base, exponent(r)) that get re-evaluated many
// times with different bases.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace slt {

namespace detail {

// QUADPACK dqk15 abscissae/weights on [-1, 1].
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};

inline constexpr double kGK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};

inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

} // namespace detail

struct QuadResult {
  double value = 0.0;
  double error = 0.0; // |K15 - G7| based estimate, summed over cells
};

// Single Gauss-Kronrod 7-15 panel on [a, b].
template <class F>
QuadResult gauss_kronrod_15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double k15 = detail::kGK15Weights[7] * f(mid);
  double g7 = detail::kG7Weights[3] * f(mid);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * detail::kGK15Nodes[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    k15 += detail::kGK15Weights[i] * fsum;
    if (i % 2 == 1) g7 += detail::kG7Weights[i / 2] * fsum;
  }
  k15 *= half;
  g7 *= half;
  return {k15, std::abs(k15 - g7)};
}

namespace detail {

template <class F>
QuadResult adaptive_rec(const F& f, double a, double b, double tol, int depth) {
  const QuadResult whole = gauss_kronrod_15(f, a, b);
  if (whole.error <= tol || depth <= 0 ||
      b - a < std::numeric_limits<double>::epsilon() * (std::abs(a) + 1.0)) {
    return whole;
  }
  const double mid = 0.5 * (a + b);
  const QuadResult left = adaptive_rec(f, a, mid, 0.5 * tol, depth - 1);
  const QuadResult right = adaptive_rec(f, mid, b, 0.5 * tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

} // namespace detail

// Adaptive integration of f over [a, b] to an absolute tolerance.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                 int max_depth = 48) {
  if (!(b > a)) return 0.0;
  return detail::adaptive_rec(f, a, b, abs_tol, max_depth).value;
}

// Integration over [a, b] split at the given interior breakpoints; cells are
// processed left to right so the summation order is deterministic.
template <class F>
double integrate_cells(const F& f, double a, double b,
                       const std::vector<double>& breakpoints,
                       double abs_tol = 1e-12, int max_depth = 48) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts;
  cuts.push_back(a);
  for (double c : breakpoints) {
    if (c > cuts.back() && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  const double cell_tol = abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += detail::adaptive_rec(f, cuts[i], cuts[i + 1], cell_tol, max_depth).value;
  }
  return total;
}

// Integrates f over (0, b] with cells [b*2^{-k-1}, b*2^{-k}] marching toward
// the origin. Stops once a cell contributes less than tail_tol in absolute
// value after a few initial cells, or after max_levels halvings. Suited to
// integrands that blow up slower than any power of 1/r at 0 (after the
// r^{d-1} volume weight) -- cell contributions then decay geometrically.
template <class F>
double integrate_graded_to_zero(const F& f, double b, double abs_tol = 1e-12,
                                int max_levels = 400) {
  if (!(b > 0.0)) return 0.0;
  double total = 0.0;
  double hi = b;
  for (int k = 0; k < max_levels; ++k) {
    const double lo = 0.5 * hi;
    const double cell =
        detail::adaptive_rec(f, lo, hi, abs_tol * 0.25, 24).value;
    total += cell;
    if (k > 8 && std::abs(cell) < abs_tol * 0.01) break;
    hi = lo;
    if (hi < std::numeric_limits<double>::min() * 4.0) break;
  }
  return total;
}

// Precomputed nodes for integrals of the form
//   sum_i w_i * pow(base, e_i)
// where w_i already carries the geometric weight (Kronrod weight times any
// fixed factor such as r^{d-1}) and e_i is a per-node exponent. Used for
// modular evaluations where the same region is integrated against many
// different bases; building the table costs one pass of exponent-field
// evaluations, each subsequent evaluation is one exp() per node.
struct ExponentNodeTable {
  std::vector<double> weight;
  std::vector<double> exponent;

  // sum_i weight_i * base^{-exponent_i}, computed as exp-log for speed;
  // clamps to +inf on overflow rather than producing NaN.
  double eval_neg_pow(double base) const {
    const double lb = std::log(base);
    double s = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
      const double t = -exponent[i] * lb;
      if (t > 700.0) return std::numeric_limits<double>::infinity();
      s += weight[i] * std::exp(t);
    }
    return s;
  }
};

} // namespace slt
