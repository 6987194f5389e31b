#include "slicecount/fourier.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slicecount/errors.hpp"

namespace slicecount {
namespace {

constexpr double kPi = std::numbers::pi;

// \int_{R^k} chi(x) exp(-2 pi i x.xi) dx as a radial integral, k <= 3.
double chi_hat_oracle(int d, int k, double xi) {
  const int l = d - k;
  auto prof = [l](double r) { return l == 0 ? 1.0 : std::pow(std::max(0.0, 1.0 - r * r), 0.5 * l); };
  auto kernel = [&](double r) {
    const double z = 2.0 * kPi * xi * r;
    switch (k) {
      case 1: return 2.0 * std::cos(z);
      case 2: return 2.0 * kPi * r * boost::math::cyl_bessel_j(0, z);
      default: return 4.0 * kPi * r * r * (z == 0.0 ? 1.0 : std::sin(z) / z);
    }
  };
  boost::math::quadrature::tanh_sinh<double> ts(15);
  // split so each panel sees only a few oscillations
  const int panels = 4 + static_cast<int>(8 * xi);
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
    total += ts.integrate([&](double r) { return prof(r) * kernel(r); }, a, b, 1e-14);
  }
  return total;
}

TEST(Chi, Values) {
  const SliceConfig c31(3, 1);
  const double zero[] = {0.0}, half[] = {0.6}, one[] = {1.0};
  EXPECT_EQ(chi(c31, zero), 1.0);
  EXPECT_EQ(chi(c31, one), 0.0);
  EXPECT_NEAR(chi(c31, half), 0.64, 1e-15);
  EXPECT_EQ(chi_radial(SliceConfig(2, 2), 0.999), 1.0);
  EXPECT_EQ(chi_radial(SliceConfig(2, 2), 1.0), 0.0);
}

TEST(ChiHat, OriginNormalization) {
  EXPECT_NEAR(chi_hat(SliceConfig(2, 2), 0.0), kPi, 1e-15);
  EXPECT_NEAR(chi_hat(SliceConfig(3, 1), 0.0), 4.0 / 3.0, 1e-15);
  for (int d = 1; d <= 8; ++d)
    for (int k = 1; k <= d; ++k)
      EXPECT_NEAR(chi_hat(SliceConfig(d, k), 0.0) * unit_ball_volume(d - k), unit_ball_volume(d), 1e-10);
}

TEST(ChiHat, MatchesRadialQuadrature) {
  const double want = chi_hat_oracle(2, 1, 2.7);
  EXPECT_NEAR(chi_hat(SliceConfig(2, 1), 2.7), want, 1e-10);
  for (int k = 1; k <= 3; ++k) {
    for (int l = 0; l <= 3; ++l) {
      for (double xi : {0.0, 1e-5, 0.3, 1.0, 2.7, 6.25, 13.1, 20.0}) {
        EXPECT_NEAR(chi_hat(SliceConfig(k + l, k), xi), chi_hat_oracle(k + l, k, xi), 1e-7) << k << " " << l << " " << xi;
      }
    }
  }
}

TEST(ChiHat, IntervalIndicator) {
  const SliceConfig c(1, 1);
  for (double xi : {0.1, 0.77, 3.0, 41.3}) EXPECT_NEAR(chi_hat(c, xi), std::sin(2 * kPi * xi) / (kPi * xi), 1e-14);
  // phase (d+1) pi / 4 = pi / 2 turns the asymptotic form into the exact one
  for (double xi : {1.3, 7.9, 55.5}) EXPECT_NEAR(chi_hat_asymptotic(c, xi), chi_hat(c, xi), 1e-14);
}

TEST(ChiHat, DerivativeMatchesFiniteDifference) {
  const double h = 1e-6;
  for (auto [d, k] : {std::pair{2, 1}, {2, 2}, {3, 2}, {5, 3}}) {
    const SliceConfig c(d, k);
    for (double xi : {0.0, 0.4, 1.7, 9.3}) {
      const double lo = xi == 0.0 ? 0.0 : xi - h;
      const double fd = (chi_hat(c, xi + h) - chi_hat(c, lo)) / (xi + h - lo);
      EXPECT_NEAR(chi_hat_derivative(c, xi), fd, xi == 0.0 ? 1e-4 : 1e-6) << d << k << " " << xi;
    }
  }
}

TEST(ChiHat, AsymptoticErrorDecays) {
  for (auto [d, k] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}}) {
    const SliceConfig c(d, k);
    double prev = -1.0;
    for (int j = 2; j <= 8; ++j) {
      double worst = 0.0;
      for (int i = 0; i < 400; ++i) {
        const double xi = std::ldexp(1.0 + i / 400.0, j);
        worst = std::max(worst, std::fabs(chi_hat(c, xi) - chi_hat_asymptotic(c, xi)));
      }
      if (prev > 0.0) EXPECT_LE(worst / prev, std::pow(2.0, -0.9)) << d << k << " j=" << j;
      prev = worst;
      // constant K in |chi^ - asymptotic| <= K xi^(-(d+3)/2)
      EXPECT_LE(worst * std::pow(std::ldexp(1.0, j), 0.5 * (d + 3)), 1.0);
    }
  }
}

TEST(ChiHat, ZeroCrossingPhase) {
  const SliceConfig c(3, 1);
  // roots of cos(2 pi t - pi) near t = 50: t = 50.25, 50.75
  for (double root : {50.25, 50.75}) {
    double a = root - 0.1, b = root + 0.1;
    ASSERT_LT(chi_hat(c, a) * chi_hat(c, b), 0.0);
    for (int i = 0; i < 60; ++i) {
      const double m = 0.5 * (a + b);
      (chi_hat(c, a) * chi_hat(c, m) <= 0.0 ? b : a) = m;
    }
    EXPECT_NEAR(0.5 * (a + b), root, 0.05);
  }
}

TEST(ChiHat, DecayAndDerivativeBounds) {
  for (auto [d, k] : {std::pair{2, 1}, {2, 2}, {3, 2}, {4, 1}}) {
    const SliceConfig c(d, k);
    const double bound = chi_hat_decay_constant(c);
    double worst_d = 0.0, worst_dasym = 0.0;
    for (double xi = 1.0; xi <= 1000.0; xi *= 1.0031) {
      const double w = std::pow(xi, 0.5 * (d + 1));
      EXPECT_LE(std::fabs(chi_hat(c, xi)) * w, bound);
      worst_d = std::max(worst_d, std::fabs(chi_hat_derivative(c, xi)) * w);
      if (xi > 100.0) worst_dasym = std::max(worst_dasym, std::fabs(chi_hat_derivative(c, xi) - chi_hat_derivative_asymptotic(c, xi)) * w);
    }
    EXPECT_LT(worst_d, 2.0 * kPi * chi_hat_amplitude(c) * 1.5);
    // sin(2 pi t - (d+1) pi / 4) with a negative amplitude is the observed derivative phase
    EXPECT_LT(worst_dasym, 0.05 * 2.0 * kPi * chi_hat_amplitude(c));
  }
}

TEST(Mollifier, SupportSymmetryMass) {
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(mollifier_psi(k, 1.0), 0.0);
    EXPECT_EQ(mollifier_psi(k, -1.5), 0.0);
    EXPECT_EQ(mollifier_psi(k, 0.3), mollifier_psi(k, -0.3));
    EXPECT_GT(mollifier_psi(k, 0.99), 0.0);
    for (double eps : {0.1, 0.01}) {
      const SliceConfig cfg(k, k);
      auto radial = [&](double r) {
        std::vector<double> x(k, 0.0);
        x[0] = r;
        return mollifier_Psi(cfg, eps, x) * unit_sphere_area(k) * std::pow(r, k - 1);
      };
      boost::math::quadrature::tanh_sinh<double> ts;
      const double mass = ts.integrate(radial, 0.0, eps, 1e-14);
      EXPECT_NEAR(mass, 1.0, 1e-10) << k << " " << eps;
    }
  }
}

TEST(Mollifier, FourierTransform) {
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(mollifier_Psi_hat(k, 0.0), 1.0, 1e-12);
  for (double s : {0.5, 2.0, 7.0}) {
    auto f = [&](double r) { return 2.0 * mollifier_psi(1, r) * std::cos(2 * kPi * s * r); };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double want = ts.integrate(f, 0.0, 1.0, 1e-15);
    EXPECT_NEAR(mollifier_Psi_hat(1, s), want, 1e-12);
  }
  for (int k = 1; k <= 3; ++k) {
    // 1e-14 is the roundoff floor of the quadrature for Psi^
    for (double s = 0.0; s < 300.0; s += 0.173) EXPECT_GE(mollifier_Psi_hat_envelope(k, s) + 1e-14, std::fabs(mollifier_Psi_hat(k, s))) << k << " " << s;
    EXPECT_GE(mollifier_Psi_hat_envelope(k, 10.0), mollifier_Psi_hat_envelope(k, 20.0));
  }
}

TEST(ChiEps, AveragingBounds) {
  const SliceConfig c31(3, 1), c22(2, 2);
  for (double eps : {0.2, 0.05}) {
    EXPECT_LE(chi_eps_radial(c31, eps, 0.0), 1.0);
    EXPECT_NEAR(chi_eps_radial(c22, eps, 0.0), 1.0, 1e-12);
  }
  EXPECT_LE(std::fabs(chi_eps_radial(c31, 0.01, 0.5) - chi_radial(c31, 0.5)), 0.1);
  EXPECT_EQ(chi_eps_radial(c31, 0.1, 1.2), 0.0);
  EXPECT_THROW(chi_eps_radial(c31, 0.6, 0.1), DomainError);
}

TEST(ChiEps, OneDimensionalConvolutionOracle) {
  const SliceConfig c(3, 1);
  const double eps = 0.1;
  for (double x : {0.0, 0.35, 0.88, 0.95, 1.05}) {
    auto f = [&](double t) { return mollifier_psi(1, t / eps) / eps * chi_radial(c, std::fabs(x - t)); };
    const double want = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -eps, eps, 12, 1e-13);
    EXPECT_NEAR(chi_eps_radial(c, eps, x), want, 1e-9) << x;
  }
}

TEST(ChiEps, PointwiseSandwich) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  for (auto [d, k] : {std::pair{3, 2}, {2, 1}, {2, 2}}) {
    const SliceConfig cfg(d, k);
    for (double eps : {0.2, 0.05, 0.01}) {
      for (int i = 0; i < 1000; ++i) {
        std::vector<double> x(k);
        for (auto& c : x) c = u(gen);
        const double v = chi(cfg, x);
        EXPECT_LE(chi_eps_pm(cfg, eps, Sign::minus, x), v + 1e-8);
        EXPECT_GE(chi_eps_pm(cfg, eps, Sign::plus, x), v - 1e-8);
      }
    }
  }
}

TEST(Poisson, ZeroFrequencyOnly) {
  const SliceConfig cfg(2, 1);
  const double rho = 10.0, eps = 0.05;
  const auto t = make_poisson_truncation(cfg, rho, eps, Sign::none, 0.5);
  const auto p = poisson_sum_approx(cfg, TorusOffset({0.2}), rho, eps, t, Sign::none);
  EXPECT_EQ(p.terms, 1u);
  EXPECT_NEAR(p.value, kPi * rho * rho, 1e-10);
  EXPECT_GT(p.tail_bound, 0.0);
  EXPECT_THROW(poisson_sum_approx(cfg, TorusOffset({0.2}), rho, eps, t, Sign::none, 1e-3), NumericalError);
  const auto tp = make_poisson_truncation(cfg, rho, eps, Sign::plus, 0.5);
  EXPECT_NEAR(poisson_sum_approx(cfg, TorusOffset({0.2}), rho, eps, tp, Sign::plus).value,
              kPi * std::pow(rho / (1.0 - eps), 2), 1e-9);
}

// omega_l rho^l sum_gamma chi_eps^{sign}((gamma - x) / rho), summed directly.
TEST(Poisson, MatchesDirectLatticeSumOfMollifiedCutoff) {
  const SliceConfig cfg(3, 1);
  const double rho = 10.0, eps = 0.05, x = 0.37;
  for (Sign s : {Sign::none, Sign::plus, Sign::minus}) {
    double direct = 0.0;
    for (int g = -12; g <= 12; ++g) direct += chi_eps_pm_radial(cfg, eps, s, std::fabs(g - x) / rho);
    direct *= unit_ball_volume(2) * rho * rho;
    const auto t = make_poisson_truncation(cfg, rho, eps, s);
    const auto p = poisson_sum_approx(cfg, TorusOffset({x}), rho, eps, t, s);
    EXPECT_NEAR(p.value, direct, p.tail_bound + 1e-5) << to_string(s);
  }
}

TEST(Poisson, SandwichAndConvergence) {
  const SliceConfig cfg(3, 2);
  const TorusOffset off({0.3, 0.6});
  for (double rho : {10.0, 20.0, 40.0}) {
    const double eps = 1.0 / (rho * rho);
    const double s = slice_volume(cfg, off, rho);
    const auto up = poisson_sum_approx(cfg, off, rho, eps, make_poisson_truncation(cfg, rho, eps, Sign::plus), Sign::plus);
    const auto lo = poisson_sum_approx(cfg, off, rho, eps, make_poisson_truncation(cfg, rho, eps, Sign::minus), Sign::minus);
    const auto mid = poisson_sum_approx(cfg, off, rho, eps, make_poisson_truncation(cfg, rho, eps, Sign::none), Sign::none);
    EXPECT_LE(lo.value - lo.tail_bound, s);
    EXPECT_GE(up.value + up.tail_bound, s);
    EXPECT_LE(std::fabs(mid.value - s), 3.0 * (mid.tail_bound + std::fabs(up.value - lo.value)));
  }
}

TEST(DefaultEpsilon, Formula) {
  EXPECT_NEAR(default_epsilon(SliceConfig(2, 2), 8.0), std::pow(8.0, -4.0 / 3.0), 1e-15);
  EXPECT_NEAR(default_epsilon(SliceConfig(3, 1), 8.0), std::pow(8.0, -2.0), 1e-15);
  EXPECT_NEAR(default_epsilon(SliceConfig(5, 3), 10.0), 1e-3, 1e-15);
  EXPECT_THROW(default_epsilon(SliceConfig(2, 2), 1.5), DomainError);
  EXPECT_DOUBLE_EQ(default_max_freq_norm(10.0, 0.01), 40.0);
  EXPECT_EQ(default_max_freq_norm(10.0, 0.4), 1.0);
}

}  // namespace
}  // namespace slicecount
