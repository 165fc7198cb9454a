#include "semisep/scalar.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "semisep/error.hpp"

namespace semisep::scalar {

namespace {

constexpr double kBranchPoint = -1.0 / std::numbers::e;

double initial_guess(double x) {
  if (x < -0.25) {
    // Series about the branch point in p = sqrt(2 (e x + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x <= 3.0) return std::log1p(x);
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

double bisect_w(double x) {
  double lo = -1.0;
  double hi = std::max(1.0, std::log1p(x) + 1.0);
  for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < kBranchPoint - 1e-12) {
    std::ostringstream os;
    os << "lambert_w0 needs x >= -1/e, got " << x;
    throw Error(Errc::DomainError, os.str());
  }
  if (x <= kBranchPoint) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = initial_guess(x);
  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    // Halley step.
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (!std::isfinite(w)) break;
    if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(w))) {
      return w < -1.0 ? -1.0 : w;
    }
  }
  if (std::isfinite(w) && w >= -1.0 &&
      std::abs(w * std::exp(w) - x) <= 1e-13 * std::max(1.0, std::abs(x))) {
    return w;
  }
  return bisect_w(x);
}

RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi,
                       double tol, int max_iterations) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi) || flo * fhi > 0.0) {
    std::ostringstream os;
    os << "f(" << lo << ") = " << flo << " and f(" << hi << ") = " << fhi
       << " do not bracket a root";
    throw Error(Errc::NoSignChange, os.str());
  }
  RootResult result;
  if (flo == 0.0 || fhi == 0.0) {
    const bool at_lo = flo == 0.0;
    result.root = at_lo ? lo : hi;
    result.bracket = {lo, hi};
    result.residual = 0.0;
    return result;
  }
  const bool increasing = flo < 0.0;
  int it = 0;
  while (hi - lo > tol && it < max_iterations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // bracket at floating resolution
    const double fm = f(mid);
    ++it;
    if (fm == 0.0) {
      lo = hi = mid;
      flo = fhi = 0.0;
      break;
    }
    if ((fm < 0.0) == increasing) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  result.iterations = it;
  result.bracket = {lo, hi};
  if (std::abs(flo) <= std::abs(fhi)) {
    result.root = lo;
    result.residual = flo;
  } else {
    result.root = hi;
    result.residual = fhi;
  }
  return result;
}

}  // namespace semisep::scalar
