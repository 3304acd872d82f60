#include "rankfit/optimize.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rankfit/error.hpp"
#include "rankfit/parallel.hpp"

namespace rankfit {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2
constexpr int kMaxIterations = 300;
constexpr int kMinIterations = 10;

double finite_or_inf(double v) {
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

ScalarMinimum golden_section(const std::function<double(double)>& f,
                             double lo, double hi, double rel_tol,
                             double x_tol) {
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = finite_or_inf(f(x1));
  double f2 = finite_or_inf(f(x2));

  for (int iter = 0; iter < kMaxIterations && (b - a) > x_tol; ++iter) {
    if (iter >= kMinIterations && std::isfinite(f1) && std::isfinite(f2) &&
        std::abs(f1 - f2) <= rel_tol * std::min(std::abs(f1), std::abs(f2))) {
      break;
    }
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = finite_or_inf(f(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = finite_or_inf(f(x2));
    }
  }
  return f1 <= f2 ? ScalarMinimum{x1, f1} : ScalarMinimum{x2, f2};
}

ScalarMinimum grid_then_golden(const std::function<double(double)>& f,
                               double lo, double hi, unsigned grid_points,
                               double rel_tol, unsigned threads) {
  const unsigned n = grid_points < 2 ? 2 : grid_points;
  const double step = (hi - lo) / (n - 1);
  const auto at = [&](unsigned i) { return i + 1 == n ? hi : lo + i * step; };

  std::vector<double> values(n);
  parallel_for(n, threads,
               [&](std::size_t i) { values[i] = finite_or_inf(f(at(i))); });

  unsigned best = 0;
  for (unsigned i = 1; i < n; ++i) {
    if (values[i] < values[best]) best = i;
  }
  if (!std::isfinite(values[best])) {
    throw NumericError("objective is not finite anywhere on the search grid");
  }

  const double a = at(best == 0 ? 0 : best - 1);
  const double b = at(best + 1 >= n ? n - 1 : best + 1);
  ScalarMinimum refined = golden_section(f, a, b, rel_tol);
  ScalarMinimum result = refined.value < values[best]
                             ? refined
                             : ScalarMinimum{at(best), values[best]};
  result.grid_index = best;
  result.at_boundary =
      (best == 0 || best + 1 == n) &&
      std::min(result.x - lo, hi - result.x) <= 1e-6 * (hi - lo);
  return result;
}

}  // namespace rankfit
