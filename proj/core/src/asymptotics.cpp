#include "slicecount/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "internal/quadrature.hpp"
#include "slicecount/errors.hpp"
#include "slicecount/specfun.hpp"

namespace slicecount {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dk(int d, int k) {
  if (d < 1 || d > kMaxDimension) throw DomainError("dimension d must lie in [1, 16]");
  if (k == 0) throw DomainError("k = 0: the remainder vanishes identically");
  if (k < 1 || k > d) throw DomainError("k must lie in [1, d]");
}

void check_fit_input(std::span<const double> rho, std::span<const double> magnitude) {
  if (rho.size() != magnitude.size()) throw DomainError("fit: rho and magnitude lengths differ");
  if (rho.size() < 3) throw DomainError("fit: at least three samples are required");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) throw DomainError("fit: radii must be positive");
    if (!(magnitude[i] > 0.0) || !std::isfinite(magnitude[i])) {
      throw DomainError("fit: degenerate input, magnitudes must be positive and finite");
    }
  }
  std::vector<double> sorted(rho.begin(), rho.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DomainError("fit: radii must be distinct");
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::complex<double> character(std::span<const std::int64_t> gamma, std::span<const double> x) {
  double phase = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) phase += static_cast<double>(gamma[i]) * x[i];
  phase -= std::floor(phase);
  return std::polar(1.0, -kTwoPi * phase);
}

std::vector<double> sorted_breaks(std::vector<double> pts) {
  for (double& p : pts) {
    p -= std::floor(p);
    if (p >= 1.0) p = 0.0;
  }
  pts.push_back(0.0);
  pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (out.empty() || p - out.back() > 1e-15) out.push_back(p);
  }
  if (out.back() < 1.0) out.back() = 1.0;
  return out;
}

class RemainderEvaluator {
 public:
  RemainderEvaluator(const SliceConfig& cfg, double rho, double budget)
      : cfg_(cfg), rho_(rho), per_eval_(enumeration_size_estimate(cfg.k(), rho)), budget_(budget) {}

  double operator()(std::vector<double> x) {
    spent_ += per_eval_;
    if (spent_ > budget_) throw BudgetExceeded("remainder_fourier_coeff: quadrature point budget exhausted");
    return remainder(cfg_, TorusOffset(std::move(x)), rho_);
  }

 private:
  SliceConfig cfg_;
  double rho_;
  double per_eval_;
  double budget_;
  double spent_ = 0.0;
};

std::complex<double> integrate_pieces(const std::vector<double>& breaks, double tol,
                                      const std::function<std::complex<double>(double)>& f) {
  std::complex<double> total{};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += internal::tanh_sinh(f, breaks[i], breaks[i + 1], tol, 9).value;
  }
  return total;
}

std::complex<double> breakpoint_coefficient(const SliceConfig& cfg, double rho, std::span<const std::int64_t> gamma,
                                            const QuadratureSpec& quad) {
  RemainderEvaluator eval(cfg, rho, quad.point_budget);
  const std::vector<double> outer_breaks = sorted_breaks({rho, -rho});
  if (cfg.k() == 1) {
    auto f = [&](double x) {
      const double xs[1] = {x};
      return eval({x}) * character(gamma, xs);
    };
    return integrate_pieces(outer_breaks, quad.tolerance, f);
  }
  // k == 2: inner lines y = g_y +/- sqrt(rho^2 - (g_x - x)^2) carry the singularities
  auto inner = [&](double x) {
    std::vector<double> cuts;
    const auto lo = static_cast<std::int64_t>(std::ceil(x - rho));
    const auto hi = static_cast<std::int64_t>(std::floor(x + rho));
    for (std::int64_t g = lo; g <= hi; ++g) {
      const double t = static_cast<double>(g) - x;
      const double r2 = rho * rho - t * t;
      if (r2 <= 0.0) continue;
      const double s = std::sqrt(r2);
      cuts.push_back(s);
      cuts.push_back(-s);
    }
    auto g = [&](double y) {
      const double xs[2] = {x, y};
      return eval({x, y}) * character(gamma, xs);
    };
    return integrate_pieces(sorted_breaks(std::move(cuts)), quad.tolerance, g);
  };
  return integrate_pieces(outer_breaks, quad.tolerance, inner);
}

std::complex<double> midpoint_coefficient(const SliceConfig& cfg, double rho, std::span<const std::int64_t> gamma,
                                          const QuadratureSpec& quad) {
  const int k = cfg.k();
  const int n = quad.points_per_dim;
  if (n < 1) throw DomainError("QuadratureSpec: points_per_dim must be >= 1");
  RemainderEvaluator eval(cfg, rho, quad.point_budget);
  const double total_points = std::pow(static_cast<double>(n), k);
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  std::vector<double> x(static_cast<std::size_t>(k));
  std::complex<double> sum{};
  for (double count = 0; count < total_points; count += 1.0) {
    for (int i = 0; i < k; ++i) x[i] = (idx[i] + 0.5) / n;
    sum += eval(x) * character(gamma, x);
    for (int i = k - 1; i >= 0; --i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
  }
  return sum / total_points;
}

std::complex<double> monte_carlo_coefficient(const SliceConfig& cfg, double rho, std::span<const std::int64_t> gamma,
                                             const QuadratureSpec& quad) {
  if (quad.samples == 0) throw DomainError("QuadratureSpec: samples must be positive");
  RemainderEvaluator eval(cfg, rho, quad.point_budget);
  std::mt19937_64 gen(quad.seed);
  std::vector<double> x(static_cast<std::size_t>(cfg.k()));
  std::complex<double> sum{};
  for (std::size_t s = 0; s < quad.samples; ++s) {
    for (double& xi : x) xi = uniform01(gen);
    sum += eval(x) * character(gamma, x);
  }
  return sum / static_cast<double>(quad.samples);
}

}  // namespace

ExponentPrediction upper_exponent(int d, int k) {
  check_dk(d, k);
  ExponentPrediction p;
  p.kind = BoundKind::upper;
  if (2 * k < d + 1) {
    p.exponent = 0.5 * (d - 1);
  } else if (2 * k == d + 1) {
    p.exponent = 0.5 * (d - 1);
    p.log_factor = true;
  } else {
    p.exponent = large_k_exponent(d, k);
  }
  return p;
}

double large_k_exponent(int d, double k) {
  const double denom = 1.0 - d + 2.0 * k;
  if (!(denom > 0.0)) throw DomainError("large_k_exponent: needs 1 - d + 2k > 0");
  return d - 2.0 * k / denom;
}

std::optional<ExponentPrediction> lower_exponent(int d, int k, double eps_slack) {
  check_dk(d, k);
  if (eps_slack < 0.0) throw DomainError("lower_exponent: eps_slack must be nonnegative");
  ExponentPrediction p;
  p.kind = BoundKind::lower;
  if (d % 4 == 1) {
    if (k == 1) return std::nullopt;
    if (!(eps_slack > 0.0)) throw DomainError("lower_exponent: d = 1 mod 4 needs eps_slack > 0");
    p.exponent = 0.5 * (d - 1 - eps_slack);
    p.epsilon_slack = eps_slack;
    return p;
  }
  p.exponent = 0.5 * (d - 1);
  return p;
}

PowerLawFit fit_power_law(std::span<const double> rho, std::span<const double> magnitude) {
  check_fit_input(rho, magnitude);
  const auto n = static_cast<double>(rho.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    mx += std::log(rho[i]);
    my += std::log(magnitude[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double dx = std::log(rho[i]) - mx;
    const double dy = std::log(magnitude[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.n_points = static_cast<int>(rho.size());
  return fit;
}

FixedSlopeFit fit_fixed_slope(std::span<const double> rho, std::span<const double> magnitude, double slope) {
  check_fit_input(rho, magnitude);
  const auto n = static_cast<double>(rho.size());
  std::vector<double> residual(rho.size());
  double mean_res = 0.0, mean_y = 0.0;
  double min_res = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double y = std::log(magnitude[i]);
    residual[i] = y - slope * std::log(rho[i]);
    mean_res += residual[i];
    mean_y += y;
    min_res = std::min(min_res, residual[i]);
  }
  mean_res /= n;
  mean_y /= n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double r = residual[i] - mean_res;
    const double t = std::log(magnitude[i]) - mean_y;
    ss_res += r * r;
    ss_tot += t * t;
  }
  FixedSlopeFit fit;
  fit.slope = slope;
  fit.c_least_squares = std::exp(mean_res);
  fit.c_lower = std::exp(min_res);
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : (ss_res == 0.0 ? 1.0 : 0.0);
  fit.n_points = static_cast<int>(rho.size());
  return fit;
}

std::vector<PanelStatistic> panel_statistics(std::span<const RemainderSample> samples, std::size_t n_offsets) {
  if (n_offsets == 0 || samples.size() % n_offsets != 0) throw DomainError("panel_statistics: ragged sample panel");
  std::vector<PanelStatistic> out;
  for (std::size_t base = 0; base < samples.size(); base += n_offsets) {
    PanelStatistic st;
    st.rho = samples[base].rho;
    st.max_signed = -std::numeric_limits<double>::infinity();
    st.min_signed = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_offsets; ++j) {
      const double r = samples[base + j].remainder;
      if (std::abs(r) > st.max_abs) {
        st.max_abs = std::abs(r);
        st.argmax_offset = static_cast<int>(j);
      }
      st.max_signed = std::max(st.max_signed, r);
      st.min_signed = std::min(st.min_signed, r);
    }
    out.push_back(st);
  }
  return out;
}

std::vector<TorusOffset> random_offset_panel(int k, int count, std::uint64_t seed) {
  if (k < 0 || count < 1) throw DomainError("random_offset_panel: need k >= 0 and count >= 1");
  std::mt19937_64 gen(seed);
  std::vector<TorusOffset> panel;
  panel.reserve(static_cast<std::size_t>(count));
  panel.push_back(TorusOffset::zero(k));
  for (int i = 1; i < count; ++i) {
    std::vector<double> c(static_cast<std::size_t>(k));
    for (double& x : c) x = uniform01(gen);
    panel.emplace_back(std::move(c));
  }
  return panel;
}

std::complex<double> remainder_fourier_coeff(const SliceConfig& cfg, double rho, std::span<const std::int64_t> gamma,
                                             const QuadratureSpec& quad) {
  if (!(rho > 0.0)) throw DomainError("remainder_fourier_coeff: rho must be positive");
  if (cfg.k() < 1) throw DomainError("remainder_fourier_coeff: needs k >= 1");
  if (static_cast<int>(gamma.size()) != cfg.k()) throw DomainError("remainder_fourier_coeff: gamma length differs from k");
  auto method = quad.method;
  if (method == QuadratureSpec::Method::automatic) {
    method = cfg.k() <= 2 ? QuadratureSpec::Method::breakpoint : QuadratureSpec::Method::monte_carlo;
  }
  switch (method) {
    case QuadratureSpec::Method::breakpoint:
      if (cfg.k() > 2) throw DomainError("remainder_fourier_coeff: breakpoint rule supports k <= 2");
      return breakpoint_coefficient(cfg, rho, gamma, quad);
    case QuadratureSpec::Method::midpoint:
      return midpoint_coefficient(cfg, rho, gamma, quad);
    case QuadratureSpec::Method::monte_carlo:
    case QuadratureSpec::Method::automatic:
      break;
  }
  return monte_carlo_coefficient(cfg, rho, gamma, quad);
}

}  // namespace slicecount
