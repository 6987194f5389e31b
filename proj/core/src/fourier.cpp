#include "slicecount/fourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "internal/powers.hpp"
#include "internal/quadrature.hpp"
#include "slicecount/specfun.hpp"

namespace slicecount {

namespace {

constexpr double kPi = std::numbers::pi;

double norm_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void check_epsilon(double eps) {
  if (!(eps > 0.0) || eps > kMaxEpsilon) throw DomainError("epsilon must lie in (0, 0.49]");
}

double scale_for(Sign sign, double eps) {
  switch (sign) {
    case Sign::plus:
      return 1.0 - eps;
    case Sign::minus:
      return 1.0 + eps;
    case Sign::none:
      break;
  }
  return 1.0;
}

// c(d, k) = Gamma(l/2 + 1) pi^(-l/2)
double transform_constant(const SliceConfig& cfg) {
  return gamma(HalfInteger::from_twice(cfg.l() + 2)) * std::pow(kPi, -0.5 * cfg.l());
}

// Gamma(k/2) (2/z)^(k/2-1) J_{k/2-1}(z): the radial Fourier kernel on R^k,
// normalised to 1 at z = 0.
double radial_kernel(int k, double z) {
  if (k == 1) return std::cos(z);
  if (k == 3) return z < 1e-4 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
  const double nu = 0.5 * k - 1.0;
  if (z < 1e-4) return 1.0 - z * z / (4.0 * (nu + 1.0));
  return gamma(HalfInteger::from_twice(k)) * std::pow(2.0 / z, nu) * bessel_j(HalfInteger::from_twice(k - 2), z);
}

double bump(double r) {
  const double a = std::abs(r);
  if (a >= 1.0) return 0.0;
  return std::exp(-1.0 / ((1.0 - a) * (1.0 + a)));
}

// c_k for k = 1..kMaxDimension
const std::array<double, kMaxDimension + 1>& mollifier_constants() {
  static const auto table = [] {
    std::array<double, kMaxDimension + 1> c{};
    for (int k = 1; k <= kMaxDimension; ++k) {
      auto moment = internal::tanh_sinh([k](double r) { return bump(r) * std::pow(r, k - 1); }, 0.0, 1.0, 1e-15, 12);
      c[k] = 1.0 / (unit_sphere_area(k) * moment.value);
    }
    return c;
  }();
  return table;
}

void check_k(int k) {
  if (k < 1 || k > kMaxDimension) throw DomainError("mollifier: k must lie in [1, 16]");
}

// Psi^ on a grid, its running sup from the right, and a fitted tail.
class PsiHatEnvelope {
 public:
  static constexpr double kStep = 1.0 / 32.0;
  static constexpr double kFloor = 1e-13;

  explicit PsiHatEnvelope(int k) {
    std::vector<double> values;
    int below = 0;
    for (int i = 0;; ++i) {
      const double s = i * kStep;
      const double v = std::abs(mollifier_Psi_hat(k, s));
      values.push_back(v);
      below = v < 0.01 * kFloor ? below + 1 : 0;
      if (below > 256 || s > 400.0) break;
    }
    env_.assign(values.size(), 0.0);
    double running = 0.0;
    for (std::size_t i = values.size(); i-- > 0;) {
      running = std::max(running, values[i]);
      env_[i] = 1.05 * running;  // sampled peaks can sit between grid points
    }
    std::size_t end = 0;
    while (end + 1 < env_.size() && env_[end + 1] > kFloor) ++end;
    table_end_ = end * kStep;

    // fit log env ~ log a - b sqrt(s) on [table_end/4, table_end]
    const std::size_t start = end / 4;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = 0;
    for (std::size_t i = start; i <= end; ++i) {
      const double x = std::sqrt(i * kStep);
      const double y = std::log(env_[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      n += 1;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    b_ = -0.9 * slope;
    a_ = 0.0;
    for (std::size_t i = start; i <= end; ++i) {
      a_ = std::max(a_, 1.5 * env_[i] * std::exp(b_ * std::sqrt(i * kStep)));
    }
    env_.resize(end + 1);
  }

  double operator()(double s) const {
    if (s <= 0.0) return env_.front();
    if (s <= table_end_) return env_[static_cast<std::size_t>(s / kStep)];
    return std::min(env_.back(), fitted(s));
  }
  double fitted(double s) const { return a_ * std::exp(-b_ * std::sqrt(s)); }
  double table_end() const { return table_end_; }
  double table_value(std::size_t i) const { return env_[i]; }

 private:
  std::vector<double> env_;
  double table_end_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
};

const PsiHatEnvelope& envelope_for(int k) {
  static std::array<std::once_flag, kMaxDimension + 1> flags;
  static std::array<std::unique_ptr<PsiHatEnvelope>, kMaxDimension + 1> tables;
  std::call_once(flags[k], [k] { tables[k] = std::make_unique<PsiHatEnvelope>(k); });
  return *tables[k];
}

}  // namespace

const char* to_string(Sign s) noexcept {
  switch (s) {
    case Sign::plus:
      return "plus";
    case Sign::minus:
      return "minus";
    case Sign::none:
      break;
  }
  return "none";
}

CutoffProfile::CutoffProfile(SliceConfig cfg, double epsilon, Sign sign) : cfg_(cfg), epsilon_(epsilon), sign_(sign) {
  if (!(epsilon >= 0.0) || epsilon > kMaxEpsilon) throw DomainError("CutoffProfile: epsilon must lie in [0, 0.49]");
  if (sign != Sign::none && epsilon == 0.0) throw DomainError("CutoffProfile: signed profiles need epsilon > 0");
  if (epsilon > 0.0 && cfg.k() < 1) throw DomainError("CutoffProfile: mollification needs k >= 1");
}

double CutoffProfile::radial(double r) const {
  if (epsilon_ == 0.0) return chi_radial(cfg_, r);
  return chi_eps_pm_radial(cfg_, epsilon_, sign_, r);
}

double CutoffProfile::operator()(std::span<const double> x) const { return radial(norm_of(x)); }

double chi_radial(const SliceConfig& cfg, double r) {
  const double a = std::abs(r);
  if (a >= 1.0) return 0.0;
  return internal::half_power((1.0 - a) * (1.0 + a), cfg.l());
}

double chi(const SliceConfig& cfg, std::span<const double> x) {
  if (static_cast<int>(x.size()) != cfg.k()) throw DomainError("chi: point dimension differs from k");
  double s = 0.0;
  for (double v : x) s += v * v;
  if (s >= 1.0) return 0.0;
  return internal::half_power(1.0 - s, cfg.l());
}

double chi_hat(const SliceConfig& cfg, double xi_norm) {
  if (!(xi_norm >= 0.0)) throw DomainError("chi_hat: negative frequency norm");
  const int d = cfg.d();
  const double nu = 0.5 * d;
  const double c = transform_constant(cfg);
  const double zero_value = c * std::pow(kPi, nu) / gamma(HalfInteger::from_twice(d + 2));
  if (xi_norm < 1e-4) {
    const double z = kPi * xi_norm;
    return zero_value * (1.0 - z * z / (nu + 1.0));
  }
  return c * std::pow(xi_norm, -nu) * bessel_j(HalfInteger::from_twice(d), 2.0 * kPi * xi_norm);
}

double chi_hat_derivative(const SliceConfig& cfg, double xi_norm) {
  if (!(xi_norm >= 0.0)) throw DomainError("chi_hat_derivative: negative frequency norm");
  if (xi_norm == 0.0) return 0.0;
  const int d = cfg.d();
  return -2.0 * kPi * transform_constant(cfg) * std::pow(xi_norm, -0.5 * d) *
         bessel_j(HalfInteger::from_twice(d + 2), 2.0 * kPi * xi_norm);
}

double chi_hat_amplitude(const SliceConfig& cfg) { return transform_constant(cfg) / kPi; }

double chi_hat_asymptotic(const SliceConfig& cfg, double xi_norm) {
  if (!(xi_norm >= 1.0)) throw DomainError("chi_hat_asymptotic: needs |xi| >= 1");
  const int d = cfg.d();
  return chi_hat_amplitude(cfg) * std::pow(xi_norm, -0.5 * (d + 1)) *
         std::cos(2.0 * kPi * xi_norm - (d + 1) * kPi / 4.0);
}

double chi_hat_derivative_asymptotic(const SliceConfig& cfg, double xi_norm) {
  if (!(xi_norm >= 1.0)) throw DomainError("chi_hat_derivative_asymptotic: needs |xi| >= 1");
  const int d = cfg.d();
  return -2.0 * kPi * chi_hat_amplitude(cfg) * std::pow(xi_norm, -0.5 * (d + 1)) *
         std::sin(2.0 * kPi * xi_norm - (d + 1) * kPi / 4.0);
}

double mollifier_psi(int k, double r) {
  check_k(k);
  return mollifier_constants()[k] * bump(r);
}

double mollifier_Psi(const SliceConfig& cfg, double eps, std::span<const double> x) {
  if (!(eps > 0.0)) throw DomainError("mollifier_Psi: eps must be positive");
  if (static_cast<int>(x.size()) != cfg.k()) throw DomainError("mollifier_Psi: point dimension differs from k");
  return std::pow(eps, -cfg.k()) * mollifier_psi(cfg.k(), norm_of(x) / eps);
}

double mollifier_Psi_hat(int k, double s) {
  check_k(k);
  s = std::abs(s);
  const double scale = unit_sphere_area(k) * mollifier_constants()[k];
  // about four oscillations per 30-point panel keeps the rule exact to rounding
  const int panels = 4 + static_cast<int>(std::ceil(s / 4.0));
  auto integrand = [k, s](double r) { return bump(r) * std::pow(r, k - 1) * radial_kernel(k, 2.0 * kPi * s * r); };
  return scale * internal::gauss_legendre<30>(integrand, 0.0, 1.0, panels);
}

double mollifier_Psi_hat_envelope(int k, double s) {
  check_k(k);
  return envelope_for(k)(std::abs(s));
}

double chi_eps_radial(const SliceConfig& cfg, double eps, double r) {
  check_epsilon(eps);
  const int k = cfg.k();
  const int l = cfg.l();
  if (k < 1) throw DomainError("chi_eps: mollification needs k >= 1");
  r = std::abs(r);
  if (r >= 1.0 + eps) return 0.0;
  if (l == 0 && r + eps <= 1.0) return 1.0;

  constexpr double kTol = 1e-11;
  double worst_error = 0.0;

  // Integral of chi(x - s u) over unit vectors u.
  auto sphere_integral = [&](double s) -> double {
    if (k == 1) return chi_radial(cfg, r - s) + chi_radial(cfg, r + s);
    if (r < 1e-14 || s < 1e-300) return unit_sphere_area(k) * chi_radial(cfg, s);
    const double cos_star = (r * r + s * s - 1.0) / (2.0 * r * s);
    if (cos_star >= 1.0) return 0.0;
    const double theta_star = cos_star <= -1.0 ? kPi : std::acos(cos_star);
    auto integrand = [&](double theta) {
      const double inside = (1.0 - r * r - s * s) + 2.0 * r * s * std::cos(theta);
      const double w = k == 2 ? 1.0 : std::pow(std::sin(theta), k - 2);
      return inside > 0.0 ? w * internal::half_power(inside, l) : 0.0;
    };
    auto res = internal::tanh_sinh(integrand, 0.0, theta_star, kTol, 10);
    worst_error = std::max(worst_error, res.error);
    return unit_sphere_area(k - 1) * res.value;
  };

  const double c_k = mollifier_constants()[k];
  auto outer = [&](double sigma) { return c_k * bump(sigma) * std::pow(sigma, k - 1) * sphere_integral(eps * sigma); };

  const double kink = std::abs(1.0 - r) / eps;
  double total = 0.0;
  double outer_error = 0.0;
  if (kink > 0.0 && kink < 1.0) {
    auto left = internal::tanh_sinh(outer, 0.0, kink, kTol, 10);
    auto right = internal::tanh_sinh(outer, kink, 1.0, kTol, 10);
    total = left.value + right.value;
    outer_error = left.error + right.error;
  } else {
    auto whole = internal::tanh_sinh(outer, 0.0, 1.0, kTol, 10);
    total = whole.value;
    outer_error = whole.error;
  }
  if (outer_error + worst_error > 1e-8) {
    throw NumericalError("chi_eps: radial quadrature did not converge to 1e-8");
  }
  return total;
}

double chi_eps(const SliceConfig& cfg, double eps, std::span<const double> x) {
  if (static_cast<int>(x.size()) != cfg.k()) throw DomainError("chi_eps: point dimension differs from k");
  return chi_eps_radial(cfg, eps, norm_of(x));
}

double chi_eps_pm_radial(const SliceConfig& cfg, double eps, Sign sign, double r) {
  check_epsilon(eps);
  const double scale = scale_for(sign, eps);
  return std::pow(scale, -cfg.l()) * chi_eps_radial(cfg, eps, scale * std::abs(r));
}

double chi_eps_pm(const SliceConfig& cfg, double eps, Sign sign, std::span<const double> x) {
  if (static_cast<int>(x.size()) != cfg.k()) throw DomainError("chi_eps_pm: point dimension differs from k");
  return chi_eps_pm_radial(cfg, eps, sign, norm_of(x));
}

double chi_hat_decay_constant(const SliceConfig& cfg) {
  static std::mutex mutex;
  static std::array<std::array<double, kMaxDimension + 1>, kMaxDimension + 1> cache{};
  std::lock_guard lock(mutex);
  double& slot = cache[cfg.d()][cfg.k()];
  if (slot > 0.0) return slot;
  const double p = 0.5 * (cfg.d() + 1);
  constexpr double kSampleEnd = 64.0;
  double sampled = 0.0;
  for (double t = 1.0; t <= kSampleEnd; t += 1.0 / 128.0) {
    sampled = std::max(sampled, std::abs(chi_hat(cfg, t)) * std::pow(t, p));
  }
  // beyond the sampled range: |sqrt(z) J_nu(z)| <= sqrt(2/pi) (1 + |4 nu^2 - 1| / (8 z) + ...)
  const double nu = 0.5 * cfg.d();
  const double far = chi_hat_amplitude(cfg) * (1.0 + (4.0 * nu * nu + 1.0) / (8.0 * 2.0 * kPi * kSampleEnd));
  slot = 1.01 * std::max(sampled, far);
  return slot;
}

double default_max_freq_norm(double rho, double eps) { return std::max(1.0, 4.0 / (eps * rho)); }

PoissonTruncation make_poisson_truncation(const SliceConfig& cfg, double rho, double eps, Sign sign,
                                          std::optional<double> max_freq_norm) {
  check_epsilon(eps);
  if (!(rho > 0.0)) throw DomainError("make_poisson_truncation: rho must be positive");
  PoissonTruncation trunc;
  trunc.max_freq_norm = max_freq_norm.value_or(default_max_freq_norm(rho, eps));
  if (!(trunc.max_freq_norm >= 0.0)) throw DomainError("PoissonTruncation: max_freq_norm must be >= 0");
  const int k = cfg.k();
  const int d = cfg.d();
  if (k == 0) return trunc;

  // Sum over |m| > M of f(|m|), f decreasing, is at most
  // |S^(k-1)| \int_{M - 2h}^inf (u + h)^(k-1) f(u) du with h = sqrt(k)/2.
  const double lambda = 1.0 / scale_for(sign, eps);
  const double h = 0.5 * std::sqrt(static_cast<double>(k));
  const double u0 = trunc.max_freq_norm - 2.0 * h;
  if (!(rho * lambda * u0 >= 1.0)) {
    trunc.tail_bound = std::numeric_limits<double>::infinity();
    return trunc;
  }
  const double prefactor = unit_sphere_area(k) * unit_ball_volume(cfg.l()) * std::pow(rho * lambda, d) *
                           chi_hat_decay_constant(cfg);
  const double p = 0.5 * (d + 1);
  const double s_per_u = eps * rho * lambda;
  auto power_part = [&](double u) { return std::pow(u + h, k - 1) * std::pow(rho * lambda * u, -p); };

  const PsiHatEnvelope& env = envelope_for(k);
  double total = 0.0;
  const double u_table_end = env.table_end() / s_per_u;
  if (u0 < u_table_end) {
    // piecewise constant envelope over grid cells
    auto cell = static_cast<std::size_t>(u0 * s_per_u / PsiHatEnvelope::kStep);
    double lo = u0;
    while (lo < u_table_end) {
      const double hi = std::min(u_table_end, (cell + 1) * PsiHatEnvelope::kStep / s_per_u);
      if (hi > lo) total += env.table_value(cell) * internal::gauss_legendre<10>(power_part, lo, hi, 1);
      lo = hi;
      ++cell;
    }
  }
  const double u_fit = std::max(u0, u_table_end);
  boost::math::quadrature::exp_sinh<double> integrator;
  auto fitted_part = [&](double u) { return power_part(u) * env.fitted(u * s_per_u); };
  total += integrator.integrate([&](double v) { return fitted_part(u_fit + v); }, 0.0,
                                std::numeric_limits<double>::infinity());
  trunc.tail_bound = prefactor * total;
  return trunc;
}

PoissonEstimate poisson_sum_approx(const SliceConfig& cfg, const TorusOffset& offset, double rho, double eps,
                                   const PoissonTruncation& trunc, Sign sign, double tail_tolerance) {
  check_epsilon(eps);
  if (!(rho > 0.0)) throw DomainError("poisson_sum_approx: rho must be positive");
  if (!(trunc.max_freq_norm >= 0.0) || !(trunc.tail_bound >= 0.0)) throw DomainError("poisson_sum_approx: invalid truncation");
  const int k = cfg.k();
  const int d = cfg.d();
  const double lambda = 1.0 / scale_for(sign, eps);
  PoissonEstimate out;
  out.max_freq_norm = trunc.max_freq_norm;
  out.tail_bound = trunc.tail_bound;
  if (k == 0) {
    out.value = unit_ball_volume(d) * std::pow(rho * lambda, d);
    out.terms = 1;
    return out;
  }
  if (offset.size() != k) throw DomainError("poisson_sum_approx: offset length differs from k");
  if (trunc.tail_bound > tail_tolerance) {
    throw NumericalError("poisson_sum_approx: certified tail " + std::to_string(trunc.tail_bound) +
                         " exceeds the requested tolerance " + std::to_string(tail_tolerance));
  }

  const double m_max = trunc.max_freq_norm;
  const auto n2_max = static_cast<std::size_t>(std::floor(m_max * m_max + 1e-9));
  std::vector<double> weight(n2_max + 1, std::numeric_limits<double>::quiet_NaN());
  auto weight_for = [&](std::size_t n2) {
    double& w = weight[n2];
    if (std::isnan(w) && n2 == 0) {
      w = chi_hat(cfg, 0.0);  // Psi^(0) = 1 exactly
    } else if (std::isnan(w)) {
      const double t = std::sqrt(static_cast<double>(n2));
      w = mollifier_Psi_hat(k, eps * rho * lambda * t) * chi_hat(cfg, rho * lambda * t);
    }
    return w;
  };

  std::vector<double> origin(static_cast<std::size_t>(k), 0.0);
  const auto coords = offset.coords();
  CompensatedSum acc;
  std::size_t terms = 0;
  enumerate_lattice_ball(
      origin, std::sqrt(static_cast<double>(n2_max) + 0.5),
      [&](std::span<const std::int64_t> m, double) {
        std::int64_t n2 = 0;
        double phase = 0.0;
        for (int i = 0; i < k; ++i) {
          n2 += m[i] * m[i];
          phase += coords[i] * static_cast<double>(m[i]);
        }
        if (static_cast<std::size_t>(n2) > n2_max) return;
        phase -= std::floor(phase);
        acc.add(weight_for(static_cast<std::size_t>(n2)) * std::cos(2.0 * kPi * phase));
        ++terms;
      },
      1e9);
  out.value = unit_ball_volume(cfg.l()) * std::pow(rho * lambda, d) * acc.value();
  out.terms = terms;
  return out;
}

double default_epsilon(const SliceConfig& cfg, double rho) {
  if (!(rho >= 2.0)) throw DomainError("default_epsilon: needs rho >= 2");
  const int d = cfg.d();
  const int k = cfg.k();
  if (2 * k > d + 1) return std::pow(rho, -2.0 * k / (1.0 - d + 2.0 * k));
  return std::pow(rho, -0.5 * (d + 1));
}

}  // namespace slicecount
