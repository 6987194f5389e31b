#pragma once

// The cutoff chi(x) = (1 - |x|^2)_+^(l/2) on R^k, its Fourier transform, the
// mollified cutoffs chi_eps and chi_eps^{+/-}, and truncated dual-lattice
// (Poisson) approximations of the lattice sums built from them.
//
// Fourier convention: f^(xi) = \int f(x) exp(-2 pi i x.xi) dx.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>

#include "slicecount/lattice_slice.hpp"

namespace slicecount {

enum class Sign { none, plus, minus };

const char* to_string(Sign s) noexcept;

inline constexpr double kMaxEpsilon = 0.49;

/// chi, chi_eps or chi_eps^{+/-} for one slice configuration.
class CutoffProfile {
 public:
  CutoffProfile(SliceConfig cfg, double epsilon, Sign sign);

  const SliceConfig& cfg() const noexcept { return cfg_; }
  double epsilon() const noexcept { return epsilon_; }
  Sign sign() const noexcept { return sign_; }

  /// Value at a point of R^k.
  double operator()(std::span<const double> x) const;
  /// Value at any point with |x| = r.
  double radial(double r) const;

 private:
  SliceConfig cfg_;
  double epsilon_;
  Sign sign_;
};

// --- unmollified cutoff ---------------------------------------------------

double chi(const SliceConfig& cfg, std::span<const double> x);
double chi_radial(const SliceConfig& cfg, double r);

/// Closed form Gamma(l/2 + 1) pi^(-l/2) |xi|^(-d/2) J_{d/2}(2 pi |xi|), with
/// the limit omega_d / omega_l at the origin.
double chi_hat(const SliceConfig& cfg, double xi_norm);

/// Radial derivative d/d|xi| of chi_hat: -2 pi c |xi|^(-d/2) J_{d/2+1}(2 pi |xi|).
double chi_hat_derivative(const SliceConfig& cfg, double xi_norm);

/// Amplitude C = Gamma(l/2 + 1) pi^(-l/2 - 1) of the leading oscillation.
double chi_hat_amplitude(const SliceConfig& cfg);

/// C |xi|^(-(d+1)/2) cos(2 pi |xi| - (d+1) pi / 4), for |xi| >= 1.
double chi_hat_asymptotic(const SliceConfig& cfg, double xi_norm);

/// Leading term of the derivative, -2 pi C |xi|^(-(d+1)/2) sin(2 pi |xi| - (d+1) pi / 4).
double chi_hat_derivative_asymptotic(const SliceConfig& cfg, double xi_norm);

// --- mollifier -------------------------------------------------------------

/// Radial profile psi_k(r) = c_k exp(-1 / (1 - r^2)) on (-1, 1), normalised
/// so that \int_0^inf psi_k(r) r^(k-1) dr = 1 / |S^(k-1)|.
double mollifier_psi(int k, double r);

/// Psi_eps(x) = eps^(-k) psi_k(|x| / eps); unit mass on R^k.
double mollifier_Psi(const SliceConfig& cfg, double eps, std::span<const double> x);

/// Fourier transform of Psi_1 on R^k at |xi| = s.
double mollifier_Psi_hat(int k, double s);

/// Nonincreasing upper envelope sup_{t >= s} |Psi_1^(t)|: tabulated by
/// quadrature, extended beyond the table by a fitted a exp(-b sqrt(s)) bound.
double mollifier_Psi_hat_envelope(int k, double s);

// --- mollified cutoffs -----------------------------------------------------

/// chi_eps = Psi_eps * chi, evaluated as a radial integral over |t| and the
/// angle between t and x. Throws NumericalError if the quadrature does not
/// reach 1e-8 absolute.
double chi_eps(const SliceConfig& cfg, double eps, std::span<const double> x);
double chi_eps_radial(const SliceConfig& cfg, double eps, double r);

/// chi_eps^{+/-}(x) = (1 -/+ eps)^(-l) chi_eps((1 -/+ eps) x); Sign::none
/// gives chi_eps.
double chi_eps_pm(const SliceConfig& cfg, double eps, Sign sign, std::span<const double> x);
double chi_eps_pm_radial(const SliceConfig& cfg, double eps, Sign sign, double r);

// --- Poisson approximation -------------------------------------------------

/// Dual-lattice truncation |m| <= max_freq_norm and a bound on what it drops.
struct PoissonTruncation {
  double max_freq_norm = 1.0;
  double tail_bound = 0.0;
};

struct PoissonEstimate {
  double value = 0.0;       // truncated sum
  double tail_bound = 0.0;  // |true lattice sum - value| <= tail_bound
  double max_freq_norm = 0.0;
  std::size_t terms = 0;
};

/// 4 / (eps rho), but never below 1.
double default_max_freq_norm(double rho, double eps);

/// Builds a truncation and certifies its tail from the Psi^ envelope and
/// sup_{t>=1} |chi^(t)| t^((d+1)/2).
PoissonTruncation make_poisson_truncation(const SliceConfig& cfg, double rho, double eps, Sign sign,
                                          std::optional<double> max_freq_norm = std::nullopt);

/// omega_l rho^d sum_{|m| <= M} FT[chi_eps^{sign}](rho m) cos(2 pi offset.m).
/// The m = 0 term is omega_d rho^d (1 -/+ eps)^(-d). Throws NumericalError if
/// the certified tail exceeds tail_tolerance.
PoissonEstimate poisson_sum_approx(const SliceConfig& cfg, const TorusOffset& offset, double rho, double eps,
                                   const PoissonTruncation& trunc, Sign sign,
                                   double tail_tolerance = std::numeric_limits<double>::infinity());

/// rho^(-j), j = 2k / (1 - d + 2k) when k > (d+1)/2, else j = (d+1)/2.
double default_epsilon(const SliceConfig& cfg, double rho);

/// sup_{t >= 1} |chi^(t)| t^((d+1)/2), cached per configuration.
double chi_hat_decay_constant(const SliceConfig& cfg);

}  // namespace slicecount
