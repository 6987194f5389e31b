#include "slicecount/lattice_slice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "slicecount/specfun.hpp"
#include "internal/parallel.hpp"
#include "internal/powers.hpp"
#include "internal/slice_squared.hpp"

namespace slicecount {

SliceConfig::SliceConfig(int d, int k) : d_(d), k_(k) {
  if (d < 1 || d > kMaxDimension) throw DomainError("SliceConfig: d must lie in [1, 16]");
  if (k < 0 || k > d) throw DomainError("SliceConfig: k must lie in [0, d]");
}

TorusOffset::TorusOffset(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double& x : coords_) {
    if (!std::isfinite(x)) throw DomainError("TorusOffset: non-finite coordinate");
    x -= std::floor(x);
    if (x >= 1.0) x = 0.0;
  }
}

double unit_ball_volume(int d) {
  if (d < 0) throw DomainError("unit_ball_volume: negative dimension");
  return std::pow(std::numbers::pi, 0.5 * d) / gamma(HalfInteger::from_twice(d + 2));
}

double unit_sphere_area(int n) {
  if (n < 1) throw DomainError("unit_sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma(HalfInteger::from_twice(n));
}

double enumeration_size_estimate(int k, double rho) {
  if (k <= 0) return 1.0;
  return unit_ball_volume(k) * std::pow(rho + std::sqrt(static_cast<double>(k)), k) + 1.0;
}

namespace {

void check_budget(int k, double rho, double budget) {
  const double estimate = enumeration_size_estimate(k, rho);
  if (estimate > budget) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "lattice enumeration of ~%.3g points exceeds the budget of %.3g", estimate, budget);
    throw BudgetExceeded(msg);
  }
}

// Depth-first enumeration with per-level pruning. `partial` accumulates
// squared coordinate offsets in coordinate order so the final squared
// distance is bit-identical to a left-to-right sum.
template <class Leaf>
void enumerate_level(int level, int k, const double* center, double rho2, double partial, std::int64_t* point,
                     Leaf& leaf) {
  const double rem = rho2 - partial;
  if (rem <= 0.0) return;
  const double s = std::sqrt(rem);
  const double c = center[level];
  const auto lo = static_cast<std::int64_t>(std::ceil(c - s));
  const auto hi = static_cast<std::int64_t>(std::floor(c + s));
  if (level == k - 1) {
    for (std::int64_t n = lo; n <= hi; ++n) {
      const double t = static_cast<double>(n) - c;
      const double d2 = partial + t * t;
      if (d2 < rho2) {
        point[level] = n;
        leaf(point, d2);
      }
    }
    return;
  }
  for (std::int64_t n = lo; n <= hi; ++n) {
    const double t = static_cast<double>(n) - c;
    point[level] = n;
    enumerate_level(level + 1, k, center, rho2, partial + t * t, point, leaf);
  }
}

// Enumerates the subtree whose first coordinate equals `first`.
template <class Leaf>
void enumerate_subtree(std::int64_t first, int k, const double* center, double rho2, std::int64_t* point,
                       Leaf& leaf) {
  const double t = static_cast<double>(first) - center[0];
  const double partial = t * t;
  point[0] = first;
  if (k == 1) {
    if (partial < rho2) leaf(point, partial);
    return;
  }
  enumerate_level(1, k, center, rho2, partial, point, leaf);
}

struct FirstRange {
  std::int64_t lo;
  std::int64_t hi;
};

FirstRange first_coordinate_range(double c, double rho) {
  return {static_cast<std::int64_t>(std::ceil(c - rho)), static_cast<std::int64_t>(std::floor(c + rho))};
}

}  // namespace

void enumerate_lattice_ball(std::span<const double> center, double rho, const LatticeVisitor& visit,
                            double point_budget) {
  const int k = static_cast<int>(center.size());
  if (k < 1) throw DomainError("enumerate_lattice_ball: k must be >= 1");
  if (!(rho > 0.0)) throw DomainError("enumerate_lattice_ball: rho must be positive");
  check_budget(k, rho, point_budget);
  std::vector<std::int64_t> point(static_cast<std::size_t>(k));
  const std::span<const std::int64_t> view(point);
  auto leaf = [&](const std::int64_t*, double d2) { visit(view, d2); };
  enumerate_level(0, k, center.data(), rho * rho, 0.0, point.data(), leaf);
}

std::vector<std::vector<std::int64_t>> lattice_ball_points(std::span<const double> center, double rho) {
  std::vector<std::vector<std::int64_t>> out;
  enumerate_lattice_ball(center, rho, [&](std::span<const std::int64_t> p, double) { out.emplace_back(p.begin(), p.end()); });
  return out;
}

double internal::slice_volume_squared(const SliceConfig& cfg, const TorusOffset& offset, double rho2,
                                      const SliceOptions& options) {
  const double rho = std::sqrt(rho2);
  const int k = cfg.k();
  const int l = cfg.l();
  if (k == 0) return unit_ball_volume(cfg.d()) * std::pow(rho, cfg.d());
  if (offset.size() != k) throw DomainError("slice_volume: offset length differs from k");
  check_budget(k, rho, options.point_budget);

  const double* center = offset.coords().data();
  const auto [lo, hi] = first_coordinate_range(center[0], rho);
  const auto n_first = static_cast<std::size_t>(hi - lo + 1);
  std::vector<CompensatedSum> partials(n_first);

  internal::parallel_for(n_first, options.threads, [&](std::size_t idx) {
    std::vector<std::int64_t> point(static_cast<std::size_t>(k));
    CompensatedSum& acc = partials[idx];
    auto leaf = [&](const std::int64_t*, double d2) { acc.add(internal::half_power(rho2 - d2, l)); };
    enumerate_subtree(lo + static_cast<std::int64_t>(idx), k, center, rho2, point.data(), leaf);
  });

  CompensatedSum total;
  for (const auto& p : partials) total.merge(p);
  return unit_ball_volume(l) * total.value();
}

double slice_volume(const SliceConfig& cfg, const TorusOffset& offset, double rho, const SliceOptions& options) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("slice_volume: rho must be positive and finite");
  return internal::slice_volume_squared(cfg, offset, rho * rho, options);
}

double remainder(const SliceConfig& cfg, const TorusOffset& offset, double rho, const SliceOptions& options) {
  const double s = slice_volume(cfg, offset, rho, options);
  return s - unit_ball_volume(cfg.d()) * std::pow(rho, cfg.d());
}

std::vector<RemainderSample> remainder_scan(const SliceConfig& cfg, std::span<const TorusOffset> offsets,
                                            std::span<const double> rho_grid, const SliceOptions& options) {
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0.0)) throw DomainError("remainder_scan: radii must be positive");
    if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) throw DomainError("remainder_scan: radii must be strictly increasing");
  }
  for (const auto& off : offsets) {
    if (off.size() != cfg.k()) throw DomainError("remainder_scan: offset length differs from k");
  }
  const std::size_t n_off = offsets.size();
  std::vector<RemainderSample> out(rho_grid.size() * n_off);
  if (out.empty()) return out;
  if (!rho_grid.empty()) check_budget(cfg.k(), rho_grid.back(), options.point_budget);

  SliceOptions inner = options;
  inner.threads = 1;
  const double ball = unit_ball_volume(cfg.d());
  internal::parallel_for(out.size(), options.threads, [&](std::size_t idx) {
    const double rho = rho_grid[idx / n_off];
    const TorusOffset& off = offsets[idx % n_off];
    const double s = slice_volume(cfg, off, rho, inner);
    out[idx] = RemainderSample{rho, off, s, s - ball * std::pow(rho, cfg.d())};
  });
  return out;
}

std::vector<double> dyadic_grid(double rho_min, double rho_max, int per_octave, double jitter) {
  if (!(rho_min > 0.0) || !(rho_max >= rho_min)) throw DomainError("dyadic_grid: need 0 < rho_min <= rho_max");
  if (per_octave < 1) throw DomainError("dyadic_grid: per_octave must be >= 1");
  const double step = std::exp2(1.0 / per_octave);
  if (jitter < 0.0 || jitter >= 0.5 * (step - 1.0)) throw DomainError("dyadic_grid: jitter too large for the grid spacing");
  const auto n = static_cast<int>(std::floor(per_octave * std::log2(rho_max / rho_min) + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  constexpr double kGolden = 0.6180339887498949;
  for (int i = 0; i <= n; ++i) {
    double r = rho_min * std::exp2(static_cast<double>(i) / per_octave);
    if (jitter > 0.0) {
      const double f = i * kGolden - std::floor(i * kGolden);
      r *= 1.0 + jitter * f;
    }
    grid.push_back(r);
  }
  return grid;
}

}  // namespace slicecount
