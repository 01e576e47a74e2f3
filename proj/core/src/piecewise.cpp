#include "mechlab/piecewise.hpp"

#include <utility>

#include "mechlab/errors.hpp"

namespace mechlab {

PiecewiseLinear::PiecewiseLinear(std::vector<Point> breakpoints, bool require_nonnegative)
    : points_(std::move(breakpoints)) {
  if (points_.empty()) throw ConfigError("piecewise-linear table needs at least one breakpoint");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].first < points_[i - 1].first)
      throw ConfigError("piecewise-linear breakpoints must be sorted by x");
    if (points_[i].second < points_[i - 1].second)
      throw ConfigError("piecewise-linear table must be non-decreasing");
  }
  if (require_nonnegative)
    for (const auto& p : points_)
      if (sgn(p.second) < 0) throw ConfigError("piecewise-linear values must be nonnegative");
}

Rational PiecewiseLinear::operator()(const Rational& x) const {
  if (x <= points_.front().first) return points_.front().second;
  if (x >= points_.back().first) return points_.back().second;
  // last breakpoint with x_k <= x
  std::size_t k = 0;
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i].first <= x) k = i;
  if (points_[k].first == x) return points_[k].second;  // right-continuous at jumps
  const auto& [x0, y0] = points_[k];
  const auto& [x1, y1] = points_[k + 1];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

bool PiecewiseLinear::covers_from_zero_to(const Rational& limit) const {
  return sgn(points_.front().first) <= 0 && points_.back().first >= limit;
}

}  // namespace mechlab
