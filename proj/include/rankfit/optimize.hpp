#pragma once

#include <functional>

namespace rankfit {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  // Index of the best coarse grid point and whether it sat on an end of
  // the grid.
  unsigned grid_index = 0;
  bool at_boundary = false;
};

// Golden-section search for a minimum of `f` on [lo, hi]. Stops when the
// bracket is narrower than `x_tol`, or after the bracket has shrunk a few
// times and the two interior values agree to `rel_tol` relative.
ScalarMinimum golden_section(const std::function<double(double)>& f,
                             double lo, double hi, double rel_tol,
                             double x_tol = 1e-10);

// Evaluates f on `grid_points` evenly spaced points of [lo, hi] (in
// parallel, up to `threads`), then refines around the best grid point with
// golden-section search. Non-finite values count as +infinity. Throws
// NumericError when every grid value is non-finite.
ScalarMinimum grid_then_golden(const std::function<double(double)>& f,
                               double lo, double hi, unsigned grid_points,
                               double rel_tol, unsigned threads);

}  // namespace rankfit
