#pragma once

// Brute-force reference computations for the tests. Nothing here calls into
// the library's solvers; formulas are re-derived and evaluated the slow way.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Bounds = std::vector<std::pair<double, double>>;

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iterations = 300) {
  double flo = f(lo);
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// w e^w = x on the principal branch, by plain bisection.
inline double lambert_w(double x) {
  const double hi = std::max(1.0, std::log1p(std::max(x, 0.0)) + 1.0);
  return bisect([x](double w) { return w * std::exp(w) - x; }, -1.0, hi);
}

inline double single_ratio(double lo, double up) {
  return lo > 0 ? 1.0 / (1.0 + std::log(up / lo)) : 0.0;
}

// phi with the set membership written as a strict comparison on the
// threshold price rather than on logs.
inline double phi(double g, const Bounds& b) {
  double s = 0.0;
  for (auto [lo, up] : b) {
    const double thr = up * std::exp(-1.0 / g);
    if (lo == 0.0 || thr > lo * (1 + 1e-13)) {
      s += g * thr;
    } else {
      s -= lo * (g * std::log(lo / up) - g + 1.0);
    }
  }
  return s;
}

inline double gamma_star(const Bounds& b) {
  return bisect([&](double g) { return phi(g, b); }, 1e-9, 1.0);
}

// Payment of the threshold mechanism, itemwise.
inline double item_payment(double g, double lo, double up, double v) {
  const double thr = up * std::exp(-1.0 / g);
  if (lo == 0.0 || thr > lo * (1 + 1e-13)) return g * std::max(0.0, v - thr);
  return g * v + lo * (g * (std::log(lo / up) - 1.0) + 1.0);
}

inline double item_allocation(double g, double up, double v) {
  return v > 0 ? std::max(0.0, g * std::log(v / up) + 1.0) : 0.0;
}

// Evenly spaced (not geometric) grid so it differs from the library's grids.
inline std::vector<double> linspace(double lo, double up, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) xs[static_cast<std::size_t>(k)] = lo + (up - lo) * k / (n - 1);
  return xs;
}

// min over an n^J linear grid of sum t_j(v_j) / sum v_j.
inline double grid_min(const Bounds& b, int n, const std::function<double(std::size_t, double)>& t) {
  const std::size_t J = b.size();
  std::vector<std::vector<double>> axes;
  for (auto [lo, up] : b) axes.push_back(linspace(lo, up, n));
  std::vector<std::size_t> idx(J, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double num = 0, den = 0;
    for (std::size_t j = 0; j < J; ++j) {
      num += t(j, axes[j][idx[j]]);
      den += axes[j][idx[j]];
    }
    if (den > 0) best = std::min(best, num / den);
    std::size_t j = 0;
    while (j < J && ++idx[j] == axes[j].size()) idx[j++] = 0;
    if (j == J) break;
  }
  return best;
}

// Ray law: v(xi) = min(w xi, up), dG = zeta sum v(xi) / xi^2.
struct Ray {
  Bounds b;
  std::vector<double> w;
  double zeta = 0;

  Ray(Bounds bounds, std::vector<double> omega) : b(std::move(bounds)), w(std::move(omega)) {
    double m = 0;
    for (std::size_t j = 0; j < w.size(); ++j) m += w[j] * (std::log(b[j].second / w[j]) + 1);
    zeta = 1 / m;
  }

  double v(std::size_t j, double xi) const { return std::min(w[j] * xi, b[j].second); }

  // Numerical CDF by integrating the density in log xi (midpoint rule).
  double cdf(double xi, int steps = 200000) const {
    if (xi <= 1) return 0;
    const double L = std::log(xi);
    const double h = L / steps;
    double s = 0;
    for (int k = 0; k < steps; ++k) {
      const double x = std::exp((k + 0.5) * h);
      double tot = 0;
      for (std::size_t j = 0; j < w.size(); ++j) tot += v(j, x);
      s += zeta * tot / x * h;  // dG/dlog xi = zeta sum v / xi
    }
    return s;
  }

  // E[sum_j p_j 1{v_j >= p_j} / sum v] by quadrature in log xi up to xi_max,
  // the remaining tail mass evaluated at v = upper.
  double posted_price_ratio(const std::vector<double>& p, double xi_max = 1e7,
                            int steps = 400000) const {
    const double L = std::log(xi_max);
    const double h = L / steps;
    double s = 0;
    double mass = 0;
    for (int k = 0; k < steps; ++k) {
      const double x = std::exp((k + 0.5) * h);
      double tot = 0, pay = 0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        const double vj = v(j, x);
        tot += vj;
        if (vj >= p[j]) pay += p[j];
      }
      const double dens = zeta * tot / x * h;
      mass += dens;
      s += pay / tot * dens;
    }
    double tot = 0, pay = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      tot += b[j].second;
      if (b[j].second >= p[j]) pay += p[j];
    }
    return s + (1 - mass) * pay / tot;
  }
};

// Random box: uppers in [0.5, 50], lower/upper spread over several decades.
inline Bounds random_bounds(std::mt19937_64& rng, std::size_t J, bool allow_zero = false) {
  std::uniform_real_distribution<double> up_d(0.5, 50.0);
  std::uniform_real_distribution<double> log_ratio(-8.0, 0.0);
  std::bernoulli_distribution zero(0.15);
  Bounds b;
  for (std::size_t j = 0; j < J; ++j) {
    const double up = up_d(rng);
    const double lo = (allow_zero && zero(rng)) ? 0.0 : up * std::exp(log_ratio(rng));
    b.emplace_back(lo, up);
  }
  if (allow_zero && std::all_of(b.begin(), b.end(), [](auto p) { return p.first == 0.0; })) {
    b[0].first = 0.1 * b[0].second;
  }
  return b;
}

}  // namespace oracle
