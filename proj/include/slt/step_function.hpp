#pragma once

// Right-continuous nonincreasing step functions on [0, infinity) with compact
// support: the carrier for decreasing rearrangements f*(t) and sampled
// distribution functions d_f(lambda).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace slt {

// Equals levels[i] on [breaks[i], breaks[i+1]) and 0 on [breaks.back(), inf).
// breaks.front() == 0 and the levels are strictly decreasing and positive;
// duplicate adjacent levels are merged on construction.
class StepFunction {
 public:
  StepFunction() = default;

  StepFunction(std::vector<double> breaks, std::vector<double> levels) {
    if (breaks.size() != levels.size() + 1)
      throw std::invalid_argument("StepFunction: size mismatch");
    if (!breaks.empty() && breaks.front() != 0.0)
      throw std::invalid_argument("StepFunction: first breakpoint must be 0");
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      if (!(breaks[i] < breaks[i + 1]))
        throw std::invalid_argument("StepFunction: breakpoints must increase");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (!(levels[i] >= 0.0))
        throw std::invalid_argument("StepFunction: negative level");
      if (i > 0 && levels[i] > levels[i - 1])
        throw std::invalid_argument("StepFunction: levels must decrease");
    }
    // Merge equal adjacent levels and drop trailing zeros.
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] == 0.0) break;
      if (!levels_.empty() && levels[i] == levels_.back()) {
        breaks_.back() = breaks[i + 1];
      } else {
        if (levels_.empty()) breaks_.push_back(breaks[i]);
        levels_.push_back(levels[i]);
        breaks_.push_back(breaks[i + 1]);
      }
    }
    if (breaks_.empty()) breaks_.push_back(0.0);
  }

  bool is_zero() const { return levels_.empty(); }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& levels() const { return levels_; }

  // Right-continuous evaluation.
  double operator()(double t) const {
    if (levels_.empty() || t < 0.0 || t >= breaks_.back()) return 0.0;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
    return levels_[i == 0 ? 0 : i - 1];
  }

  // |{ t : value > lam }| -- exact from the breakpoints.
  double measure_above(double lam) const {
    if (levels_.empty()) return 0.0;
    // levels are strictly decreasing; find the last index with level > lam.
    std::size_t lo = 0, hi = levels_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (levels_[mid] > lam)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo == 0 ? 0.0 : breaks_[lo];
  }

  double support_end() const { return breaks_.back(); }
  double max_level() const { return levels_.empty() ? 0.0 : levels_.front(); }

  // int_0^inf g(value(t)) dt for a pointwise transform g; exact per step.
  template <class G>
  double integrate_transform(const G& g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      s += g(levels_[i]) * (breaks_[i + 1] - breaks_[i]);
    }
    return s;
  }

 private:
  std::vector<double> breaks_{0.0};
  std::vector<double> levels_;
};

} // namespace slt
