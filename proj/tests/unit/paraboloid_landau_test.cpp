#include "slicecount/paraboloid_landau.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slicecount/errors.hpp"

namespace slicecount {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Paraboloid, HandSums) {
  const double want = 2.0 * (std::sqrt(3.5) + std::sqrt(2.5) + std::sqrt(1.5) + std::sqrt(0.5));
  EXPECT_NEAR(paraboloid_measure(ParaboloidQuery(2, 1, 3.5)), want, 1e-13);
  EXPECT_NEAR(want, 10.767640, 5e-6);
  EXPECT_EQ(paraboloid_measure(ParaboloidQuery(2, 2, 2.2)), 7.0);
  EXPECT_NEAR(paraboloid_measure(ParaboloidQuery(3, 1, 0.6)), kPi * 0.6, 1e-15);
  EXPECT_EQ(paraboloid_measure(ParaboloidQuery(3, 2, 0.0)), 0.0);
  EXPECT_THROW(ParaboloidQuery(3, 1, -0.1), DomainError);
  EXPECT_THROW(ParaboloidQuery(3, 4, 1.0), DomainError);
}

// Direct count of lattice planes: for k = d the measure counts integer
// points (x0, x) with x0 >= 0 and |x|^2 < rho - x0.
TEST(Paraboloid, FullLatticeCount) {
  for (double rho : {3.3, 7.9, 12.0}) {
    int count = 0;
    for (int j = 0; j <= 12; ++j)
      for (int a = -4; a <= 4; ++a)
        for (int b = -4; b <= 4; ++b)
          if (a * a + b * b < rho - j) ++count;
    EXPECT_EQ(paraboloid_measure(ParaboloidQuery(3, 3, rho)), count) << rho;
  }
}

TEST(Paraboloid, ThreadsDoNotChangeResult) {
  const ParaboloidQuery q(4, 1, 123456.7);
  SliceOptions one, many;
  many.threads = 6;
  EXPECT_EQ(paraboloid_measure(q, one), paraboloid_measure(q, many));
}

TEST(Expansion, Coefficients) {
  const auto e = expansion_spec(5, 1);
  ASSERT_EQ(e.coefficients.size(), 3u);
  EXPECT_EQ(e.coefficients[0].power, 3.0);
  EXPECT_NEAR(e.coefficients[0].coefficient, 1.0 / 3.0, 1e-16);
  EXPECT_EQ(e.coefficients[1].power, 2.0);
  EXPECT_EQ(e.coefficients[1].coefficient, 0.5);
  EXPECT_EQ(e.coefficients[2].power, 1.0);
  EXPECT_NEAR(e.coefficients[2].coefficient, 1.0 / 6.0, 1e-16);
  for (int d = 2; d <= 12; ++d)
    for (int n = 0; n <= 4; ++n) {
      const auto s = expansion_spec(d, n);
      for (std::size_t i = 1; i < s.coefficients.size(); ++i) EXPECT_LT(s.coefficients[i].power, s.coefficients[i - 1].power);
      EXPECT_NEAR(s.coefficients[0].coefficient, 2.0 / (d + 1), 1e-16);
    }
  // Gamma pole in the denominator: d = 5, n = 2 adds nothing
  EXPECT_EQ(expansion_spec(5, 2).coefficients.size(), 3u);
}

TEST(Expansion, FaulhaberOddDimensions) {
  for (std::int64_t a = 0; a <= 200; ++a) {
    const double x = static_cast<double>(a);
    if (a > 0) {
      EXPECT_EQ(euler_maclaurin_E(3, 0, x), static_cast<double>(a * (a + 1) / 2));
      EXPECT_NEAR(euler_maclaurin_E(5, 1, x), static_cast<double>(a * (a + 1) * (2 * a + 1) / 6), 1e-9 * x * x * x);
    }
  }
  for (int d : {3, 5, 7, 9, 11}) {
    const auto terms = exact_power_sum_expansion(d);
    for (std::int64_t a = 0; a <= 300; ++a) {
      Rational v = 0;
      for (const auto& t : terms) v += t.coefficient * Rational(boost::multiprecision::pow(BigInt(a), static_cast<unsigned>(t.power)));
      EXPECT_EQ(v, Rational(power_sum((d - 1) / 2, a))) << d << " " << a;
    }
  }
}

// For d = 3 mod 4 the expansion with index floor((d+1)/4) carries a constant
// B_{(d+1)/2} term that the two-sided exact sum does not have.
TEST(Expansion, ConstantTermForThreeModFour) {
  // the two sides agree except for the constant, so cancellation grows like a^((d+1)/2)
  for (double a : {5.0, 40.0, 300.0}) {
    EXPECT_NEAR(euler_maclaurin_E(3, 1, a) - euler_maclaurin_E(3, 0, a), 1.0 / 12.0, 1e-15 * a * a);
    EXPECT_NEAR(euler_maclaurin_E(7, 2, a) - euler_maclaurin_E(7, 1, a), -1.0 / 120.0, 1e-15 * std::pow(a, 4));
  }
}

TEST(Asymptotic, Cases) {
  const auto k1 = paraboloid_asymptotic(3, 1, 50.0);
  EXPECT_EQ(k1.expansion_index, 1);
  EXPECT_EQ(k1.error_exponent, 0.0);
  EXPECT_NEAR(k1.value, kPi * euler_maclaurin_E(3, 1, 50.0), 1e-9);
  const auto kd = paraboloid_asymptotic(3, 3, 50.0);
  EXPECT_EQ(kd.expansion_index, 0);
  EXPECT_NEAR(kd.error_exponent, 8.0 / 6.0, 1e-15);
  const auto mid = paraboloid_asymptotic(3, 2, 50.0);
  EXPECT_NEAR(mid.error_exponent, 7.0 / 4.0, 1e-15);
  EXPECT_FALSE(mid.log_factor);
  ASSERT_TRUE(mid.alternative_error_exponent.has_value());
  EXPECT_NEAR(*mid.alternative_error_exponent, 5.0 / 4.0, 1e-15);
  EXPECT_TRUE(paraboloid_asymptotic(4, 3, 50.0).log_factor);
  EXPECT_THROW(paraboloid_asymptotic(3, 1, 0.5), DomainError);
}

TEST(Asymptotic, KOneBounded) {
  for (int d : {3, 4, 5}) {
    double lo = 1e300, hi = -1e300;
    for (double rho = 10.0; rho < 1e4; rho *= 1.013) {
      const double diff = paraboloid_measure(ParaboloidQuery(d, 1, rho)) - paraboloid_asymptotic(d, 1, rho).value;
      lo = std::min(lo, diff);
      hi = std::max(hi, diff);
    }
    EXPECT_LT(hi - lo, 5.0) << d;
  }
}

TEST(Asymptotic, FullCodimensionSlope) {
  for (int d : {2, 3}) {
    const double w = unit_ball_volume(d - 1);
    std::vector<double> lr, lm;
    for (double rho = 64.0; rho < 4096.0; rho *= 1.09) {
      const double p = paraboloid_measure(ParaboloidQuery(d, d, rho));
      const double dev = std::fabs(p - 2.0 * w / (d + 1) * std::pow(rho, 0.5 * (d + 1)) - 0.5 * w * std::pow(rho, 0.5 * (d - 1)));
      if (dev > 0.0) {
        lr.push_back(std::log(rho));
        lm.push_back(std::log(dev));
      }
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) mx += lr[i], my += lm[i];
    mx /= lr.size(), my /= lr.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) sxy += (lr[i] - mx) * (lm[i] - my), sxx += (lr[i] - mx) * (lr[i] - mx);
    EXPECT_LE(sxy / sxx, (d * d - d + 2.0) / (2.0 * d) + 0.15) << d;
  }
}

TEST(Landau, Values) {
  EXPECT_NEAR(landau_ids_direct(LandauQuery(2, 5.0)), 1.0 / kPi, 1e-16);
  EXPECT_EQ(landau_ids_direct(LandauQuery(2, 0.5)), 0.0);
  const double h = 2.0 / (4.0 * kPi * kPi) * (std::sqrt(3.0) + 1.0);
  EXPECT_NEAR(landau_ids_direct(LandauQuery(3, 4.0)), h, 1e-16);
  EXPECT_NEAR(h, 0.138407, 5e-7);
  EXPECT_NEAR(landau_ids_via_paraboloid(LandauQuery(3, 4.0)), h, 1e-15);
  EXPECT_EQ(landau_ids_via_paraboloid(LandauQuery(3, 1.0 - 1e-9)), 0.0);
  EXPECT_NEAR(landau_ids_via_paraboloid(LandauQuery(4, 6.7)) / landau_ids_direct(LandauQuery(4, 6.7)), 1.0, 1e-9);
  EXPECT_NEAR(landau_leading_h3(1.0), 1.0 / (6.0 * kPi * kPi), 1e-17);
  EXPECT_NEAR(landau_leading_h3(100.0), 1000.0 / (6.0 * kPi * kPi), 1e-13);
  EXPECT_THROW(landau_ids_via_paraboloid(LandauQuery(2, 5.0)), DomainError);
}

TEST(Landau, MonotoneAndConsistent) {
  for (int d : {2, 3, 4, 5}) {
    double prev_direct = 0.0, prev_via = 0.0;
    for (double lambda = 0.5; lambda < 60.0; lambda += 0.0517) {
      const LandauQuery q(d, lambda);
      const double a = landau_ids_direct(q);
      EXPECT_GE(a, prev_direct);
      prev_direct = a;
      if (d >= 3) {
        const double b = landau_ids_via_paraboloid(q);
        EXPECT_GE(b, prev_via);
        prev_via = b;
      }
    }
  }
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(1.0, 1000.0);
  for (int d : {3, 4, 5})
    for (int i = 0; i < 500; ++i) {
      const LandauQuery q(d, u(gen));
      const double a = landau_ids_direct(q);
      EXPECT_NEAR(landau_ids_via_paraboloid(q) / a, 1.0, 1e-9);
    }
}

TEST(Landau, ThreeDimensionalCorollaryBounded) {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double lambda = 1.0 + 9999.0 * i / 999.0;
    worst = std::max(worst, std::fabs(landau_ids_direct(LandauQuery(3, lambda)) - landau_leading_h3(lambda)));
  }
  EXPECT_LT(worst, 0.05);
}

}  // namespace
}  // namespace slicecount
