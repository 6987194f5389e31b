#pragma once

// Measure of the lattice of affine planes Z^k x R^l inside a ball of radius
// rho centred at an offset on the torus T^k, computed by pruned enumeration of
// the integer points gamma with |gamma - offset| < rho.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "slicecount/errors.hpp"

namespace slicecount {

inline constexpr int kMaxDimension = 16;
inline constexpr double kDefaultPointBudget = 1e10;

/// Ambient dimension d split as k lattice coordinates plus l = d - k
/// continuous ones.
class SliceConfig {
 public:
  SliceConfig(int d, int k);

  int d() const noexcept { return d_; }
  int k() const noexcept { return k_; }
  int l() const noexcept { return d_ - k_; }

  friend bool operator==(const SliceConfig&, const SliceConfig&) = default;

 private:
  int d_;
  int k_;
};

/// Quasimomentum on T^k, stored canonically in [0, 1)^k.
class TorusOffset {
 public:
  TorusOffset() = default;
  explicit TorusOffset(std::vector<double> coords);

  static TorusOffset zero(int k) { return TorusOffset(std::vector<double>(static_cast<std::size_t>(k), 0.0)); }

  std::span<const double> coords() const noexcept { return coords_; }
  int size() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const TorusOffset&, const TorusOffset&) = default;

 private:
  std::vector<double> coords_;
};

struct RemainderSample {
  double rho = 0.0;
  TorusOffset offset;
  double volume = 0.0;
  double remainder = 0.0;
};

struct SliceOptions {
  double point_budget = kDefaultPointBudget;
  int threads = 1;
};

/// omega_d = pi^(d/2) / Gamma(1 + d/2).
double unit_ball_volume(int d);

/// Area of the unit sphere S^(n-1) in R^n (n >= 1): 2 pi^(n/2) / Gamma(n/2).
double unit_sphere_area(int n);

/// Upper estimate of the number of lattice points the enumeration visits.
double enumeration_size_estimate(int k, double rho);

/// Calls visit(point, squared_distance) for every gamma in Z^k with
/// |gamma - center| < rho, in lexicographic order. Each coordinate is
/// restricted to the interval allowed by the remaining squared radius.
using LatticeVisitor = std::function<void(std::span<const std::int64_t>, double)>;
void enumerate_lattice_ball(std::span<const double> center, double rho, const LatticeVisitor& visit,
                            double point_budget = kDefaultPointBudget);

/// Convenience wrapper collecting the points of enumerate_lattice_ball.
std::vector<std::vector<std::int64_t>> lattice_ball_points(std::span<const double> center, double rho);

/// S(rho; offset; d, k) = omega_l * sum_{|gamma - offset| < rho} (rho^2 - |gamma - offset|^2)^(l/2).
/// Throws BudgetExceeded when the enumeration estimate exceeds the budget.
double slice_volume(const SliceConfig& cfg, const TorusOffset& offset, double rho, const SliceOptions& options = {});

/// R = S - omega_d rho^d.
double remainder(const SliceConfig& cfg, const TorusOffset& offset, double rho, const SliceOptions& options = {});

/// One sample per (rho, offset) pair, rho-major then offset index. The
/// threads option fans out over pairs; results do not depend on it.
std::vector<RemainderSample> remainder_scan(const SliceConfig& cfg, std::span<const TorusOffset> offsets,
                                            std::span<const double> rho_grid, const SliceOptions& options = {});

/// Geometric grid with per_octave points per doubling covering
/// [rho_min, rho_max] (both included when rho_max / rho_min is a power of 2).
/// jitter > 0 multiplies point i by (1 + jitter * frac(i * golden ratio)),
/// moving radii off exact squared-distance ties.
std::vector<double> dyadic_grid(double rho_min, double rho_max, int per_octave, double jitter = 0.0);

}  // namespace slicecount
