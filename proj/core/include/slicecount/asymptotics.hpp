#pragma once

// Predicted remainder exponents, log-log power-law fits of measured
// remainders, and Fourier coefficients of the remainder over the torus.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slicecount/lattice_slice.hpp"

namespace slicecount {

enum class BoundKind { upper, lower };

struct ExponentPrediction {
  double exponent = 0.0;
  bool log_factor = false;
  BoundKind kind = BoundKind::upper;
  double epsilon_slack = 0.0;
};

/// Uniform-in-offset upper exponent: (d-1)/2 for k < (d+1)/2, (d-1)/2 with a
/// log factor at k = (d+1)/2, and d - 2k/(1-d+2k) above. Requires 1 <= k <= d.
ExponentPrediction upper_exponent(int d, int k);

/// d - 2k/(1-d+2k), the large-k branch, evaluated for any k with 1 - d + 2k > 0.
double large_k_exponent(int d, double k);

/// Exponent achieved for some offset: (d-1-eps)/2 when d = 1 mod 4 (k > 1),
/// (d-1)/2 otherwise. Empty for d = 1 mod 4 with k = 1.
std::optional<ExponentPrediction> lower_exponent(int d, int k, double eps_slack = 0.0);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural log of the prefactor
  double r_squared = 0.0;
  int n_points = 0;
};

/// Ordinary least squares of log(magnitude) on log(rho).
PowerLawFit fit_power_law(std::span<const double> rho, std::span<const double> magnitude);

/// Fit of log(magnitude) = log c + slope log(rho) with the slope held fixed.
struct FixedSlopeFit {
  double slope = 0.0;
  double c_least_squares = 0.0;  // exp of the mean log residual
  double c_lower = 0.0;          // largest c with magnitude >= c rho^slope at every sample
  double r_squared = 0.0;        // 1 - SS_res / SS_tot of the constrained model
  int n_points = 0;
};
FixedSlopeFit fit_fixed_slope(std::span<const double> rho, std::span<const double> magnitude, double slope);

/// Per-radius statistics of the remainder over an offset panel.
struct PanelStatistic {
  double rho = 0.0;
  double max_abs = 0.0;
  double max_signed = 0.0;  // largest R (signed)
  double min_signed = 0.0;
  int argmax_offset = 0;
};
std::vector<PanelStatistic> panel_statistics(std::span<const RemainderSample> samples, std::size_t n_offsets);

/// Offsets drawn uniformly from [0,1)^k by a seeded 64-bit Mersenne Twister;
/// the first offset is always 0.
std::vector<TorusOffset> random_offset_panel(int k, int count, std::uint64_t seed);

/// How to integrate over T^k.
struct QuadratureSpec {
  enum class Method {
    automatic,     // breakpoint rule for k <= 2, Monte Carlo above
    breakpoint,    // tanh-sinh between the remainder's singular lines (k <= 2)
    midpoint,      // tensor-product midpoint rule
    monte_carlo,
  };
  Method method = Method::automatic;
  int points_per_dim = 64;
  std::size_t samples = 100000;
  std::uint64_t seed = 0x5eed;
  double tolerance = 1e-11;  // per-level agreement for the breakpoint rule
  double point_budget = 1e11;  // total lattice points visited across all evaluations
};

/// \int_{T^k} R(rho; x) exp(-2 pi i x.gamma) dx.
std::complex<double> remainder_fourier_coeff(const SliceConfig& cfg, double rho, std::span<const std::int64_t> gamma,
                                             const QuadratureSpec& quad = {});

}  // namespace slicecount
