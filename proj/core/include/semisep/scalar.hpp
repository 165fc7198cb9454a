#pragma once

// Special functions and one-dimensional root finding.

#include <functional>
#include <utility>

namespace semisep::scalar {

inline constexpr double kDefaultTol = 1e-12;

struct RootResult {
  double root = 0.0;
  int iterations = 0;
  std::pair<double, double> bracket;
  double residual = 0.0;
};

/// Principal branch W0 of the Lambert-W function (w * e^w = x, w >= -1).
/// Accepts x >= -1/e - 1e-12; inputs in the rounding band just below -1/e
/// map to -1. Throws Error(DomainError) otherwise.
double lambert_w0(double x);

/// Bisection for a monotone f with f(lo) * f(hi) <= 0. Stops when the
/// bracket is no wider than `tol` or an exact zero is hit, and returns the
/// bracket end with the smaller |f|. Throws Error(NoSignChange).
RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi,
                       double tol = kDefaultTol, int max_iterations = 400);

}  // namespace semisep::scalar
