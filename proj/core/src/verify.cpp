#include "semisep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "semisep/error.hpp"
#include "semisep/semi_separable.hpp"
#include "semisep/separable.hpp"

namespace semisep::verify {

namespace {

constexpr double kPairBudget = 2e9;
constexpr std::size_t kMaxIcItems = 4;
constexpr int kMaxIcPoints = 40;
// Tensor-grid size for the ratio search in saddle_certificate.
constexpr double kRatioBudget = 1.6e7;
// Grid size for the pairwise IC pass in saddle_certificate.
constexpr double kIcBudget = 2e4;

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::size_t tensor_size(const std::vector<std::vector<double>>& axes) {
  double n = 1.0;
  for (const auto& a : axes) n *= static_cast<double>(a.size());
  if (n > 1e15) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(n);
}

// Calls fn(v, idx) for every point of the tensor grid, first axis slowest.
template <class Fn>
void for_each_point(const std::vector<std::vector<double>>& axes, Fn&& fn) {
  const std::size_t dims = axes.size();
  std::vector<std::size_t> idx(dims, 0);
  Valuation v(dims);
  for (std::size_t j = 0; j < dims; ++j) {
    if (axes[j].empty()) return;
    v[j] = axes[j][0];
  }
  while (true) {
    fn(static_cast<const Valuation&>(v), static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t j = dims;
    while (j > 0) {
      --j;
      if (++idx[j] < axes[j].size()) {
        v[j] = axes[j][idx[j]];
        break;
      }
      idx[j] = 0;
      v[j] = axes[j][0];
      if (j == 0) return;
    }
    if (dims == 0) return;
  }
}

int shrink_to_budget(int points, std::size_t dims, double budget) {
  while (points > 2 && std::pow(static_cast<double>(points + 2), static_cast<double>(dims)) > budget) {
    --points;
  }
  return points;
}

}  // namespace

Mechanism semi_separable_mechanism(double gamma, const Instance& instance) {
  semi_separable::Mechanism m(gamma, instance);
  Mechanism out;
  std::ostringstream name;
  name << "semi_separable(gamma=" << gamma << ")";
  out.name = name.str();
  out.items = instance.size();
  out.quote = [m](std::span<const double> v) {
    return Outcome{m.allocation(v), m.payment(v)};
  };
  for (std::size_t j = 0; j < instance.size(); ++j) {
    const double lo = instance.lower(j);
    const double up = instance.upper(j);
    out.item_payment.emplace_back(
        [gamma, lo, up](double x) { return semi_separable::item_payment(gamma, lo, up, x); });
  }
  if (gamma > 0.0) {
    try {
      out.candidates.push_back(semi_separable::worst_case_ratio(gamma, instance).argmin);
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateInstance) throw;
    }
  }
  return out;
}

Mechanism separable_mechanism(const Instance& instance) {
  std::vector<separable::SingleItemMechanism> parts;
  for (const auto& it : instance.items()) parts.push_back(separable::single_item(it.lower, it.upper));
  Mechanism out;
  out.name = "separable";
  out.items = instance.size();
  out.quote = [parts, instance](std::span<const double> v) {
    instance.check_contains(v);
    Outcome o;
    o.allocation.resize(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      o.allocation[j] = parts[j].allocation(v[j]);
      o.payment += parts[j].payment(v[j]);
    }
    return o;
  };
  for (const auto& p : parts) {
    out.item_payment.emplace_back([p](double x) { return p.payment(x); });
  }
  out.candidates.push_back(separable::joint_ratio(instance).worst_valuation);
  return out;
}

Mechanism zero_mechanism(std::size_t items) {
  Mechanism out;
  out.name = "zero";
  out.items = items;
  out.quote = [items](std::span<const double>) {
    return Outcome{std::vector<double>(items, 0.0), 0.0};
  };
  out.item_payment.assign(items, [](double) { return 0.0; });
  return out;
}

Mechanism grand_bundle_price(double price, std::size_t items) {
  Mechanism out;
  std::ostringstream name;
  name << "grand_bundle(price=" << price << ")";
  out.name = name.str();
  out.items = items;
  out.quote = [price, items](std::span<const double> v) {
    const bool buy = sum_of(v) >= price;
    return Outcome{std::vector<double>(items, buy ? 1.0 : 0.0), buy ? price : 0.0};
  };
  return out;
}

Mechanism bundle_mechanism(const bundles::BundleSolution& solution) {
  Mechanism out;
  std::ostringstream name;
  name << "bundle(gamma=" << solution.gamma() << ")";
  out.name = name.str();
  out.items = solution.partition.item_count;
  out.quote = [solution](std::span<const double> v) {
    const auto q = bundles::bundle_quote(solution, v);
    return Outcome{q.allocation(), q.payment()};
  };
  return out;
}

Mechanism with_payment_offset(Mechanism mechanism, double delta) {
  auto inner = std::move(mechanism.quote);
  mechanism.quote = [inner, delta](std::span<const double> v) {
    Outcome o = inner(v);
    o.payment += delta;
    return o;
  };
  if (mechanism.separable()) {
    auto first = std::move(mechanism.item_payment.front());
    mechanism.item_payment.front() = [first, delta](double x) { return first(x) + delta; };
  }
  mechanism.name += "+offset";
  return mechanism;
}

std::vector<double> log_grid(double lower, double upper, int points) {
  if (points < 2) throw Error(Errc::DomainError, "a grid needs at least 2 points");
  if (lower == upper) return {lower};
  const double lo = lower > 0.0 ? lower : 1e-6 * upper;
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(points) + 1);
  if (lower == 0.0) g.push_back(0.0);
  const double span = std::log(upper / lo);
  for (int k = 0; k < points; ++k) {
    g.push_back(lo * std::exp(span * k / (points - 1)));
  }
  g[lower == 0.0 ? 1 : 0] = lo;
  g.back() = upper;
  return g;
}

std::vector<std::vector<double>> grid_axes(const Instance& instance, int points,
                                           std::span<const Valuation> candidates) {
  std::vector<std::vector<double>> axes;
  axes.reserve(instance.size());
  for (std::size_t j = 0; j < instance.size(); ++j) {
    auto axis = log_grid(instance.lower(j), instance.upper(j), points);
    for (const auto& c : candidates) {
      if (c.size() == instance.size() && c[j] >= instance.lower(j) && c[j] <= instance.upper(j)) {
        axis.push_back(c[j]);
      }
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    axes.push_back(std::move(axis));
  }
  return axes;
}

IcIrReport check_ic_ir_points(const Mechanism& mechanism, std::span<const Valuation> points) {
  const std::size_t n = points.size();
  const std::size_t dims = mechanism.items;
  std::vector<double> q(n * dims);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Outcome o = mechanism.quote(points[i]);
    if (o.allocation.size() != dims) {
      throw Error(Errc::ShapeMismatch, "mechanism returned a wrong-sized allocation");
    }
    std::copy(o.allocation.begin(), o.allocation.end(), q.begin() + static_cast<std::ptrdiff_t>(i * dims));
    t[i] = o.payment;
  }
  IcIrReport rep;
  rep.points = n;
  std::size_t worst_i = 0;
  std::size_t worst_k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* v = points[i].data();
    const double* qi = &q[i * dims];
    double truthful = -t[i];
    for (std::size_t d = 0; d < dims; ++d) truthful += qi[d] * v[d];
    rep.max_ir_violation = std::max(rep.max_ir_violation, -truthful);
    double best = truthful;
    std::size_t best_k = i;
    for (std::size_t k = 0; k < n; ++k) {
      const double* qk = &q[k * dims];
      double u = -t[k];
      for (std::size_t d = 0; d < dims; ++d) u += qk[d] * v[d];
      if (u > best) {
        best = u;
        best_k = k;
      }
    }
    if (best - truthful > rep.max_ic_violation) {
      rep.max_ic_violation = best - truthful;
      worst_i = i;
      worst_k = best_k;
    }
  }
  if (rep.max_ic_violation > 0.0) {
    rep.worst_ic_truth = points[worst_i];
    rep.worst_ic_report = points[worst_k];
  }
  return rep;
}

IcIrReport check_ic_ir(const Mechanism& mechanism, const Instance& instance, int points_per_dim) {
  if (instance.size() > kMaxIcItems) {
    throw Error(Errc::TooLarge, "pairwise IC check supports at most 4 items");
  }
  if (points_per_dim > kMaxIcPoints) {
    throw Error(Errc::TooLarge, "pairwise IC check supports at most 40 points per item");
  }
  const auto axes = grid_axes(instance, points_per_dim, mechanism.candidates);
  const double n = static_cast<double>(tensor_size(axes));
  if (n * n > kPairBudget) {
    throw Error(Errc::TooLarge, "pairwise IC grid exceeds the pair budget");
  }
  std::vector<Valuation> points;
  points.reserve(static_cast<std::size_t>(n));
  for_each_point(axes, [&](const Valuation& v, const auto&) { points.push_back(v); });
  return check_ic_ir_points(mechanism, points);
}

IcIrReport check_ic_ir_per_item(const Mechanism& mechanism, const Instance& instance,
                                int points_per_dim) {
  const auto axes = grid_axes(instance, points_per_dim, mechanism.candidates);
  const Valuation base = instance.lowers();
  IcIrReport total;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    std::vector<Valuation> line;
    for (double x : axes[j]) {
      Valuation v = base;
      v[j] = x;
      line.push_back(std::move(v));
    }
    auto rep = check_ic_ir_points(mechanism, line);
    total.points += rep.points;
    total.max_ir_violation = std::max(total.max_ir_violation, rep.max_ir_violation);
    if (rep.max_ic_violation > total.max_ic_violation) {
      total.max_ic_violation = rep.max_ic_violation;
      total.worst_ic_truth = rep.worst_ic_truth;
      total.worst_ic_report = rep.worst_ic_report;
    }
  }
  return total;
}

RatioMin grid_min_ratio(const Mechanism& mechanism, const Instance& instance,
                        int points_per_dim) {
  const auto axes = grid_axes(instance, points_per_dim, mechanism.candidates);
  RatioMin best;
  best.ratio = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> pay;
  if (mechanism.separable()) {
    for (std::size_t j = 0; j < axes.size(); ++j) {
      std::vector<double> col;
      col.reserve(axes[j].size());
      for (double x : axes[j]) col.push_back(mechanism.item_payment[j](x));
      pay.push_back(std::move(col));
    }
  }
  std::vector<std::size_t> best_idx;
  for_each_point(axes, [&](const Valuation& v, const std::vector<std::size_t>& idx) {
    const double total = sum_of(v);
    if (!(total > 0.0)) return;
    ++best.points;
    double t = 0.0;
    if (mechanism.separable()) {
      for (std::size_t j = 0; j < idx.size(); ++j) t += pay[j][idx[j]];
    } else {
      t = mechanism.quote(v).payment;
    }
    const double r = t / total;
    if (r < best.ratio) {
      best.ratio = r;
      best_idx = idx;
    }
  });
  if (best.points == 0) {
    throw Error(Errc::DegenerateInstance, "every grid point sums to zero");
  }
  best.argmin.resize(axes.size());
  for (std::size_t j = 0; j < axes.size(); ++j) best.argmin[j] = axes[j][best_idx[j]];
  return best;
}

double discretized_best_response(const adversary::AdversaryDistribution& dist, int xi_points) {
  if (xi_points < 2) throw Error(Errc::DomainError, "xi grid needs at least 2 points");
  const double top = std::log(10.0 * dist.breakpoints().back());
  const auto& omega = dist.omega();
  const double zeta = dist.zeta();
  std::vector<double> best(omega.size(), 0.0);
  for (int k = 0; k < xi_points; ++k) {
    const double xi = std::exp(top * k / (xi_points - 1));
    for (std::size_t j = 0; j < omega.size(); ++j) {
      const double vj = std::min(omega[j] * xi, dist.instance().upper(j));
      best[j] = std::max(best[j], vj * zeta / xi);
    }
  }
  return std::accumulate(best.begin(), best.end(), 0.0);
}

SaddleReport saddle_certificate(const Instance& instance, const SaddleOptions& options) {
  if (instance.degenerate()) {
    throw Error(Errc::DegenerateInstance, "every lower bound is zero; no saddle to certify");
  }
  SaddleReport rep;
  const auto sol = semi_separable::solve_gamma_star(instance);
  rep.gamma_star = sol.gamma_star;
  rep.gamma_tested = options.gamma_override.value_or(sol.gamma_star);

  const Mechanism mech = semi_separable_mechanism(rep.gamma_tested, instance);
  const std::size_t dims = instance.size();

  rep.grid_resolution = shrink_to_budget(options.grid, dims, kRatioBudget);
  const auto ratio = grid_min_ratio(mech, instance, rep.grid_resolution);
  rep.grid_min_ratio = ratio.ratio;
  rep.grid_argmin = ratio.argmin;

  const auto dist = adversary::AdversaryDistribution::build(rep.gamma_tested, instance);
  rep.best_response_value = discretized_best_response(dist, options.xi_grid);
  rep.best_response_exact = dist.best_response_value();

  IcIrReport ic;
  if (dims <= kMaxIcItems) {
    rep.ic_grid_resolution =
        std::min(shrink_to_budget(options.ic_grid, dims, kIcBudget), kMaxIcPoints);
    rep.ic_method = "pairwise";
    ic = check_ic_ir(mech, instance, rep.ic_grid_resolution);
  } else {
    rep.ic_grid_resolution = options.ic_grid;
    rep.ic_method = "per_item";
    ic = check_ic_ir_per_item(mech, instance, rep.ic_grid_resolution);
  }
  rep.max_ic_violation = ic.max_ic_violation;
  rep.max_ir_violation = ic.max_ir_violation;

  const double g = rep.gamma_tested;
  rep.pass = rep.grid_min_ratio >= g - options.tol && rep.best_response_value <= g + options.tol &&
             rep.best_response_exact <= g + options.tol && rep.max_ic_violation <= options.tol &&
             rep.max_ir_violation <= options.tol;
  return rep;
}

bool support_containment(const adversary::AdversaryDistribution& dist,
                         std::span<const Halfspace> halfspaces) {
  for (const auto& h : halfspaces) {
    if (h.a.size() != dist.omega().size()) {
      throw Error(Errc::ShapeMismatch, "halfspace normal has the wrong dimension");
    }
  }
  for (double xi : dist.breakpoints()) {
    const Valuation v = dist.valuation_at(xi);
    for (const auto& h : halfspaces) {
      const double lhs = std::inner_product(h.a.begin(), h.a.end(), v.begin(), 0.0);
      if (lhs > h.b + 1e-12 * std::max(1.0, std::abs(h.b))) return false;
    }
  }
  return true;
}

MonteCarlo monte_carlo_ratio(const Mechanism& mechanism,
                             const adversary::AdversaryDistribution& dist, std::size_t n,
                             std::uint64_t seed) {
  if (n == 0) throw Error(Errc::DomainError, "Monte-Carlo needs at least one sample");
  MonteCarlo mc;
  double m2 = 0.0;
  for (const auto& s : dist.sample(n, seed)) {
    const double r = mechanism.quote(s.v).payment / sum_of(s.v);
    ++mc.n;
    const double delta = r - mc.mean;
    mc.mean += delta / static_cast<double>(mc.n);
    m2 += delta * (r - mc.mean);
  }
  if (mc.n > 1) {
    mc.std_error = std::sqrt(m2 / static_cast<double>(mc.n - 1) / static_cast<double>(mc.n));
  }
  return mc;
}

}  // namespace semisep::verify
