#pragma once

// Distribution functions, decreasing rearrangements f*, and symmetric
// decreasing rearrangements f#.
//
// Level-set measures of the radial carriers are exact (level sets of
// piecewise-monotone radial functions are finite unions of annuli), so the
// toolkit keeps two routes everywhere:
//   * exact pointwise evaluators (bisection against exact level-set
//     measures) for assertions with tight tolerances, and
//   * StepFunction / RadialProfile carriers sampled to a configurable value
//     resolution for downstream consumption and file output.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "slt/profile.hpp"
#include "slt/step_function.hpp"

namespace slt {

// |{ x : |f(x)| > lambda }| computed exactly from the radial representation.
template <RadialFunction F>
double level_set_measure(const F& f, double lam) {
  return f.superlevel(lam).measure(f.domain());
}

namespace detail {

// A maximal radius interval on which the function is monotone (linear) or
// constant. Used by the descending-lambda sweep that samples distribution
// functions on many levels at once.
struct MonotonePiece {
  double r0, r1; // radius interval
  double v0, v1; // values at the ends
};

inline std::vector<MonotonePiece> monotone_pieces(const RadialProfile& f) {
  std::vector<MonotonePiece> out;
  const auto& r = f.radii();
  const auto& v = f.values();
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    out.push_back({r[i], r[i + 1], v[i], v[i + 1]});
  return out;
}

inline std::vector<MonotonePiece> monotone_pieces(const RadialStep& f) {
  std::vector<MonotonePiece> out;
  const auto& e = f.edges();
  const auto& v = f.cell_values();
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back({e[i], e[i + 1], v[i], v[i]});
  return out;
}

// Measure of {f > lam} restricted to one monotone piece.
inline double piece_superlevel_measure(const MonotonePiece& p, double lam,
                                       int d, double nu) {
  const double mlo = std::min(p.v0, p.v1), mhi = std::max(p.v0, p.v1);
  if (lam >= mhi) return 0.0;
  const double full = nu * (std::pow(p.r1, d) - std::pow(p.r0, d));
  if (lam < mlo || p.v0 == p.v1) return full;
  const double x = p.r0 + (lam - p.v0) / (p.v1 - p.v0) * (p.r1 - p.r0);
  if (p.v0 > p.v1) // active part is [r0, x)
    return nu * (std::pow(x, d) - std::pow(p.r0, d));
  return nu * (std::pow(p.r1, d) - std::pow(x, d)); // active part is (x, r1]
}

// d_f at every lambda of a descending grid, in one sweep. Pieces move from
// inactive to partially active (at their max value) to fully active (at their
// min value); fully active pieces contribute a constant.
template <class F>
std::vector<double> distribution_at_levels(const F& f,
                                           const std::vector<double>& lam_desc) {
  const auto pieces = monotone_pieces(f);
  const int d = f.domain().dim();
  const double nu = f.domain().unit_volume();

  struct Event {
    double lam;
    std::size_t piece;
    bool enters; // true: becomes partial at lam < max; false: becomes full
  };
  std::vector<Event> events;
  events.reserve(2 * pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double mlo = std::min(pieces[i].v0, pieces[i].v1);
    const double mhi = std::max(pieces[i].v0, pieces[i].v1);
    events.push_back({mhi, i, true});
    events.push_back({mlo, i, false});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.lam > b.lam; });

  std::vector<std::size_t> partial;
  std::vector<char> is_partial(pieces.size(), 0);
  double full_sum = 0.0;
  std::size_t next_event = 0;

  std::vector<double> out;
  out.reserve(lam_desc.size());
  for (double lam : lam_desc) {
    while (next_event < events.size() && events[next_event].lam > lam) {
      const Event& ev = events[next_event++];
      const auto& p = pieces[ev.piece];
      if (ev.enters) {
        if (p.v0 != p.v1) {
          partial.push_back(ev.piece);
          is_partial[ev.piece] = 1;
        } else {
          full_sum += nu * (std::pow(p.r1, d) - std::pow(p.r0, d));
        }
      } else if (is_partial[ev.piece]) {
        is_partial[ev.piece] = 0;
        partial.erase(std::find(partial.begin(), partial.end(), ev.piece));
        full_sum += nu * (std::pow(p.r1, d) - std::pow(p.r0, d));
      }
    }
    double m = full_sum;
    for (std::size_t idx : partial)
      m += piece_superlevel_measure(pieces[idx], lam, d, nu);
    out.push_back(m);
  }
  return out;
}

// Descending lambda grid: every distinct function value, refined uniformly
// between neighbors until the pitch meets the value resolution (subject to a
// step cap), terminated by 0.
template <class F>
std::vector<double> level_grid(const F& f, double value_resolution_rel,
                               std::size_t max_steps) {
  std::vector<double> vals = f.value_breakpoints();
  vals.push_back(0.0);
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  const double maxv = vals.front();
  if (maxv <= 0.0) return {0.0};
  const double pitch =
      std::max(value_resolution_rel * maxv, maxv / static_cast<double>(max_steps));
  std::vector<double> grid;
  grid.push_back(vals.front());
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    const double gap = vals[i] - vals[i + 1];
    const auto pieces = static_cast<std::size_t>(std::ceil(gap / pitch));
    for (std::size_t k = 1; k < pieces; ++k) {
      grid.push_back(vals[i] - gap * static_cast<double>(k) / pieces);
    }
    grid.push_back(vals[i + 1]);
  }
  return grid;
}

} // namespace detail

struct RearrangementOptions {
  double value_resolution_rel = 1e-6;
  std::size_t max_steps = std::size_t{1} << 21;
};

// The distribution function lambda -> |{|f| > lambda}| as a right-continuous
// nonincreasing step function in lambda, exact at every sampled level.
template <class F>
StepFunction distribution_function(const F& f,
                                   RearrangementOptions opts = {}) {
  const auto grid =
      detail::level_grid(f, opts.value_resolution_rel, opts.max_steps);
  if (grid.size() < 2) return StepFunction();
  const auto measures = detail::distribution_at_levels(f, grid);
  // Steps in lambda: value measures[j] on [grid[j+1], grid[j]) scanning from
  // the top; assembled ascending for the StepFunction invariant.
  std::vector<double> breaks, levels;
  breaks.push_back(0.0);
  for (std::size_t j = grid.size(); j-- > 1;) {
    const double level = measures[j - 1]; // d_f on [grid[j], grid[j-1])
    if (level <= 0.0) break;
    if (!levels.empty() && level == levels.back()) {
      breaks.back() = grid[j - 1];
      continue;
    }
    if (!levels.empty() && level > levels.back()) break; // safety; measures sorted
    levels.push_back(level);
    breaks.push_back(grid[j - 1]);
  }
  return StepFunction(std::move(breaks), std::move(levels));
}

// Exact pointwise f*(t) = inf{ s > 0 : d_f(s) <= t } by bisection on the
// level, against exact level-set measures.
template <RadialFunction F>
double rearrangement_value(const F& f, double t, int iters = 100) {
  if (t < 0.0) throw std::invalid_argument("rearrangement_value: t >= 0");
  double hi = f.max_value();
  if (hi <= 0.0) return 0.0;
  if (level_set_measure(f, 0.0) <= t) return 0.0;
  double lo = 0.0;
  // Invariant: d_f(hi) <= t < d_f(lo).
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (level_set_measure(f, mid) <= t)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// |{ f* > lam }| through the generalized inverse only (independent of the
// direct level-set route; used to check equimeasurability).
template <RadialFunction F>
double rearrangement_superlevel_measure(const F& f, double lam,
                                        int iters = 100) {
  const double total = f.domain().measure();
  if (rearrangement_value(f, 0.0) <= lam) return 0.0;
  double lo = 0.0, hi = total;
  if (rearrangement_value(f, total) > lam) return total;
  // Invariant: f*(lo) > lam >= f*(hi).
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (rearrangement_value(f, mid) > lam)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

// f* as a step carrier. Sampled levels include every distinct function
// value, so step inputs rearrange exactly; between samples the approximation
// errs upward by at most one level pitch (the inf convention keeps the
// smallest admissible level at ties).
template <class F>
StepFunction decreasing_rearrangement(const F& f,
                                      RearrangementOptions opts = {}) {
  const auto grid =
      detail::level_grid(f, opts.value_resolution_rel, opts.max_steps);
  if (grid.size() < 2) return StepFunction();
  const auto measures = detail::distribution_at_levels(f, grid);
  std::vector<double> breaks{0.0}, levels;
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    // f*(t) = grid[j] for t in [measures[j], measures[j+1]).
    if (measures[j + 1] > breaks.back() && grid[j] > 0.0) {
      levels.push_back(grid[j]);
      breaks.push_back(measures[j + 1]);
    }
  }
  return StepFunction(std::move(breaks), std::move(levels));
}

// Exact pointwise f#(x) = f*(nu_d |x|^d).
template <RadialFunction F>
double symmetric_value(const F& f, double radius) {
  const auto& dom = f.domain();
  return rearrangement_value(f, dom.unit_volume() * std::pow(radius, dom.dim()));
}

// Exact view of f#: superlevel sets are centered balls whose measure is the
// exact level-set measure of f. Models RadialFunction, so every norm can be
// evaluated on f# without discretizing it.
template <RadialFunction F>
class SymmetrizedView {
 public:
  explicit SymmetrizedView(const F& f) : f_(&f) {}

  const BallDomain& domain() const { return f_->domain(); }
  double value(double r) const { return symmetric_value(*f_, r); }
  double max_value() const { return f_->max_value(); }

  IntervalSet superlevel(double lam) const {
    const double m = level_set_measure(*f_, lam);
    if (m <= 0.0) return {};
    const auto& dom = f_->domain();
    const double rho =
        std::pow(m / dom.unit_volume(), 1.0 / static_cast<double>(dom.dim()));
    IntervalSet s;
    s.append_merged(0.0, rho);
    return s;
  }

  // Radii where f# can kink: images of the function's own value breakpoints.
  std::vector<double> radial_breakpoints() const {
    const auto& dom = f_->domain();
    std::vector<double> out{0.0};
    for (double v : f_->value_breakpoints()) {
      const double m = level_set_measure(*f_, v);
      out.push_back(
          std::pow(m / dom.unit_volume(), 1.0 / static_cast<double>(dom.dim())));
    }
    out.push_back(dom.radius());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<double> value_breakpoints() const {
    return f_->value_breakpoints();
  }

 private:
  const F* f_;
};

// f# as a piecewise-linear carrier (values exact at the knots). Profiles
// already flagged decreasing are their own symmetric rearrangement.
inline RadialProfile symmetric_decreasing_rearrangement(
    const RadialProfile& f, std::size_t carrier_knots = 2048) {
  const auto& vals = f.values();
  const bool already =
      std::is_sorted(vals.rbegin(), vals.rend()); // nonincreasing
  if (already) {
    return RadialProfile(f.domain(), f.radii(), f.values(), true);
  }
  const auto& dom = f.domain();
  SymmetrizedView<RadialProfile> view(f);
  std::vector<double> kinks = view.radial_breakpoints();
  // Refine between kink radii up to the knot budget.
  std::vector<double> radii{0.0};
  const double span = dom.radius();
  const double pitch = span / static_cast<double>(carrier_knots);
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    const double gap = kinks[i + 1] - kinks[i];
    const auto n = static_cast<std::size_t>(
        std::min(256.0, std::max(1.0, std::ceil(gap / pitch))));
    for (std::size_t k = 1; k <= n; ++k)
      radii.push_back(kinks[i] + gap * static_cast<double>(k) / n);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  if (radii.back() != dom.radius()) radii.push_back(dom.radius());
  std::vector<double> values;
  values.reserve(radii.size());
  for (double r : radii) values.push_back(symmetric_value(f, r));
  // Enforce monotonicity against bisection jitter.
  for (std::size_t i = 1; i < values.size(); ++i)
    values[i] = std::min(values[i], values[i - 1]);
  return RadialProfile(dom, std::move(radii), std::move(values), true);
}

// base^{f(.)} for base > 1; the level sets are those of f at the transformed
// level, so rearrangement commutes with the transform structurally.
template <RadialFunction F>
class ExpTransform {
 public:
  ExpTransform(const F& f, double base) : f_(&f), base_(base) {
    if (!(base > 1.0)) throw std::invalid_argument("ExpTransform: base > 1");
  }

  const BallDomain& domain() const { return f_->domain(); }
  double value(double r) const { return std::pow(base_, f_->value(r)); }
  double max_value() const { return std::pow(base_, f_->max_value()); }
  IntervalSet superlevel(double lam) const {
    if (lam <= 0.0) {
      IntervalSet s;
      s.append_merged(0.0, f_->domain().radius());
      return s;
    }
    return f_->superlevel(std::log(lam) / std::log(base_));
  }
  std::vector<double> radial_breakpoints() const {
    return f_->radial_breakpoints();
  }
  std::vector<double> value_breakpoints() const {
    std::vector<double> v = f_->value_breakpoints();
    for (double& x : v) x = std::pow(base_, x);
    return v;
  }

 private:
  const F* f_;
  double base_;
};

// [base^{s(.)}]*(t), returned in the closed form base^{s*(t)} after checking
// the two routes against each other at sampled points. The direct route
// rearranges the transformed function; the closed form transforms the
// rearrangement.
template <class F>
StepFunction exponent_rearrangement(const F& s, double base,
                                    RearrangementOptions opts = {},
                                    double check_rel_tol = 1e-9) {
  if (!(base > 1.0))
    throw std::invalid_argument("exponent_rearrangement: base must be > 1");
  const StepFunction s_star = decreasing_rearrangement(s, opts);
  const double total = s.domain().measure();

  // Route check at sampled t via the exact evaluators.
  ExpTransform<F> direct(s, base);
  for (int k = 1; k <= 16; ++k) {
    const double t = total * static_cast<double>(k) / 17.0;
    const double via_closed = std::pow(base, rearrangement_value(s, t));
    const double via_direct = rearrangement_value(direct, t);
    const double scale = std::max({1.0, via_closed, via_direct});
    if (std::abs(via_closed - via_direct) > check_rel_tol * scale)
      throw std::runtime_error(
          "exponent_rearrangement: route disagreement (internal error)");
  }

  // Assemble base^{s*}: same breakpoints, transformed levels; the function
  // equals base^0 = 1 past the support of s* up to the domain measure.
  std::vector<double> breaks = s_star.breakpoints();
  std::vector<double> levels = s_star.levels();
  for (double& c : levels) c = std::pow(base, c);
  if (breaks.back() < total) {
    breaks.push_back(total);
    levels.push_back(1.0);
  }
  return StepFunction(std::move(breaks), std::move(levels));
}

// Hardy-Littlewood pairing: returns (int f g dx, int_0^inf f*(y) g*(y) dy).
// The first entry never exceeds the second (up to quadrature tolerance); the
// step carriers of f* and g* err upward, which preserves the inequality.
template <RadialFunction F, RadialFunction G>
std::pair<double, double> hardy_littlewood_check(const F& f, const G& g,
                                                 RearrangementOptions opts = {}) {
  const BallDomain& dom = f.domain();
  const int d = dom.dim();
  const double factor = d * dom.unit_volume();
  std::vector<double> cells = f.radial_breakpoints();
  {
    const auto gb = g.radial_breakpoints();
    cells.insert(cells.end(), gb.begin(), gb.end());
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  }
  const auto integrand = [&](double r) {
    return f.value(r) * g.value(r) * std::pow(r, d - 1);
  };
  double lhs = 0.0;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i)
    lhs += integrate(integrand, cells[i], cells[i + 1], 1e-13);
  lhs *= factor;

  const StepFunction fs = decreasing_rearrangement(f, opts);
  const StepFunction gs = decreasing_rearrangement(g, opts);
  std::vector<double> merged = fs.breakpoints();
  {
    const auto& gb = gs.breakpoints();
    merged.insert(merged.end(), gb.begin(), gb.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  }
  double rhs = 0.0;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const double mid = 0.5 * (merged[i] + merged[i + 1]);
    rhs += fs(mid) * gs(mid) * (merged[i + 1] - merged[i]);
  }
  return {lhs, rhs};
}

} // namespace slt
