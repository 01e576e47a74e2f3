#pragma once

#include <utility>
#include <vector>

#include "mechlab/rational.hpp"

namespace mechlab {

/// Non-decreasing piecewise-linear function given by sorted breakpoints.
/// Jump discontinuities are expressed by repeating an x with two y values;
/// evaluation at a jump is right-continuous (the last breakpoint at that x
/// wins). Beyond the table the nearest endpoint value extends as a constant.
/// Evaluation is exact rational arithmetic.
class PiecewiseLinear {
 public:
  using Point = std::pair<Rational, Rational>;

  explicit PiecewiseLinear(std::vector<Point> breakpoints, bool require_nonnegative = true);

  Rational operator()(const Rational& x) const;

  const std::vector<Point>& breakpoints() const { return points_; }
  const Rational& min_x() const { return points_.front().first; }
  const Rational& max_x() const { return points_.back().first; }
  Rational max_value() const { return points_.back().second; }

  /// True when [0, limit) is inside the table's x-range.
  bool covers_from_zero_to(const Rational& limit) const;

 private:
  std::vector<Point> points_;
};

}  // namespace mechlab
