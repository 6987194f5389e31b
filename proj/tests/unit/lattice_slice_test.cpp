#include "slicecount/lattice_slice.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace slicecount {
namespace {

constexpr double kPi = std::numbers::pi;

// Full box around the offset, no pruning.
double box_volume(int d, int k, const std::vector<double>& x, double rho) {
  const int reach = static_cast<int>(std::ceil(rho)) + 1;
  std::vector<long> g(k, 0);
  std::vector<long> lo(k);
  for (int i = 0; i < k; ++i) lo[i] = static_cast<long>(std::floor(x[i])) - reach;
  double total = 0.0;
  std::function<void(int, double)> rec = [&](int i, double r2) {
    if (i == k) {
      if (r2 < rho * rho) total += std::pow(rho * rho - r2, 0.5 * (d - k));
      return;
    }
    for (long v = lo[i]; v <= lo[i] + 2 * reach + 1; ++v) {
      const double t = v - x[i];
      rec(i + 1, r2 + t * t);
    }
  };
  rec(0, 0.0);
  return unit_ball_volume(d - k) * total;
}

TEST(UnitBall, Volumes) {
  EXPECT_EQ(unit_ball_volume(0), 1.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume(2), kPi);
  EXPECT_DOUBLE_EQ(unit_ball_volume(3), 4.0 * kPi / 3.0);
  EXPECT_DOUBLE_EQ(unit_sphere_area(3), 4.0 * kPi);
  EXPECT_DOUBLE_EQ(unit_sphere_area(1), 2.0);
}

TEST(Config, Validation) {
  EXPECT_THROW(SliceConfig(2, 3), DomainError);
  EXPECT_THROW(SliceConfig(0, 0), DomainError);
  EXPECT_THROW(SliceConfig(17, 1), DomainError);
  EXPECT_EQ(SliceConfig(5, 2).l(), 3);
  const TorusOffset o({1.25, -0.25, 3.0});
  EXPECT_EQ(o[0], 0.25);
  EXPECT_EQ(o[1], 0.75);
  EXPECT_EQ(o[2], 0.0);
}

TEST(Enumerate, SmallCases) {
  const double c1[] = {0.5};
  EXPECT_TRUE(lattice_ball_points(c1, 0.4).empty());
  const double c2[] = {0.0, 0.0};
  EXPECT_EQ(lattice_ball_points(c2, 1.5).size(), 9u);
  const auto one = lattice_ball_points(c2, 1.0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], (std::vector<std::int64_t>{0, 0}));
}

TEST(Enumerate, LexicographicAndStrict) {
  const double c[] = {0.3, 0.7, 0.1};
  const auto pts = lattice_ball_points(c, 3.2);
  EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
  std::size_t brute = 0;
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b)
      for (int e = -5; e <= 5; ++e) {
        const double r2 = (a - 0.3) * (a - 0.3) + (b - 0.7) * (b - 0.7) + (e - 0.1) * (e - 0.1);
        if (r2 < 3.2 * 3.2) ++brute;
      }
  EXPECT_EQ(pts.size(), brute);
}

TEST(Enumerate, BudgetIsEnforced) {
  const double c[] = {0, 0, 0};
  EXPECT_THROW(enumerate_lattice_ball(c, 1000.0, [](auto, double) {}, 1e6), BudgetExceeded);
  EXPECT_THROW(slice_volume(SliceConfig(3, 3), TorusOffset::zero(3), 1000.0, {1e6, 1}), BudgetExceeded);
}

TEST(SliceVolume, WorkedExamples) {
  EXPECT_EQ(slice_volume(SliceConfig(2, 2), TorusOffset::zero(2), 2.5), 21.0);
  EXPECT_NEAR(slice_volume(SliceConfig(2, 1), TorusOffset::zero(1), 1.2), 2.0 * (1.2 + 2.0 * std::sqrt(0.44)), 1e-14);
  EXPECT_NEAR(slice_volume(SliceConfig(2, 1), TorusOffset::zero(1), 1.2), 5.05330, 5e-6);
  EXPECT_NEAR(slice_volume(SliceConfig(3, 0), TorusOffset(), 2.0), 32.0 * kPi / 3.0, 1e-12);
  EXPECT_NEAR(remainder(SliceConfig(2, 2), TorusOffset::zero(2), 2.5), 21.0 - 6.25 * kPi, 1e-13);
  EXPECT_NEAR(remainder(SliceConfig(2, 1), TorusOffset({0.5}), 0.4), -kPi * 0.16, 1e-15);
}

TEST(SliceVolume, KZeroRemainderVanishes) {
  for (int d = 1; d <= 6; ++d) {
    for (double rho : {0.5, 3.0, 17.25}) {
      const double r = remainder(SliceConfig(d, 0), TorusOffset(), rho);
      EXPECT_LE(std::fabs(r), 1e-12 * unit_ball_volume(d) * std::pow(rho, d));
    }
  }
}

TEST(SliceVolume, BoxOracle) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0), ur(0.3, 30.0);
  for (int i = 0; i < 200; ++i) {
    const int d = 1 + static_cast<int>(gen() % 4);
    const int k = 1 + static_cast<int>(gen() % d);
    std::vector<double> x(k);
    for (auto& c : x) c = u01(gen);
    const double rho = k >= 3 ? ur(gen) / 3.0 : ur(gen);
    const double want = box_volume(d, k, x, rho);
    const double got = slice_volume(SliceConfig(d, k), TorusOffset(x), rho);
    if (want == 0.0) {
      EXPECT_EQ(got, 0.0);
    } else {
      EXPECT_NEAR(got / want, 1.0, 1e-10) << d << " " << k << " " << rho;
    }
  }
}

TEST(SliceVolume, MonotoneInRadius) {
  const SliceConfig cfg(3, 2);
  const TorusOffset off({0.2, 0.9});
  double prev = 0.0;
  for (double rho = 0.1; rho < 12.0; rho += 0.037) {
    const double s = slice_volume(cfg, off, rho);
    EXPECT_GE(s, prev);
    prev = s;
  }
}

TEST(SliceVolume, PeriodicAndReflectionSymmetric) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const SliceConfig cfg(3, 2);
    // dyadic offsets keep the shifted coordinates exactly representable
    const double a = std::ldexp(std::floor(std::ldexp(u(gen), 30)), -30);
    const double b = std::ldexp(std::floor(std::ldexp(u(gen), 30)), -30);
    const double rho = 1.0 + 10.0 * u(gen);
    const double s = slice_volume(cfg, TorusOffset({a, b}), rho);
    EXPECT_EQ(s, slice_volume(cfg, TorusOffset({a + 1.0, b - 3.0}), rho));
    EXPECT_NEAR(slice_volume(cfg, TorusOffset({1.0 - a, 1.0 - b}), rho) / s, 1.0, 1e-12);
  }
}

TEST(SliceVolume, LeadingOrder) {
  for (auto [d, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const double ratio = slice_volume(SliceConfig(d, k), TorusOffset::zero(k), 100.0) / (unit_ball_volume(d) * std::pow(100.0, d));
    EXPECT_NEAR(ratio, 1.0, 0.02);
  }
}

TEST(SliceVolume, ThreadCountDoesNotChangeResult) {
  const SliceConfig cfg(4, 3);
  const TorusOffset off({0.1, 0.45, 0.8});
  const double one = slice_volume(cfg, off, 25.0, {kDefaultPointBudget, 1});
  for (int t : {2, 3, 8}) EXPECT_EQ(slice_volume(cfg, off, 25.0, {kDefaultPointBudget, t}), one) << t;
}

TEST(RemainderScan, Examples) {
  const SliceConfig cfg(2, 2);
  const std::vector<TorusOffset> offs{TorusOffset::zero(2)};
  const std::vector<double> grid{1.0, 2.0};
  const auto s = remainder_scan(cfg, offs, grid);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].volume, 1.0);
  EXPECT_EQ(s[1].volume, 9.0);
  EXPECT_EQ(s[1].remainder, 9.0 - 4.0 * kPi);
  EXPECT_TRUE(remainder_scan(cfg, offs, std::vector<double>{}).empty());
}

TEST(RemainderScan, OrderingAndThreads) {
  const SliceConfig cfg(3, 1);
  const std::vector<TorusOffset> offs{TorusOffset({0.0}), TorusOffset({0.3}), TorusOffset({0.71})};
  const auto grid = dyadic_grid(4.0, 64.0, 4);
  const auto a = remainder_scan(cfg, offs, grid, {kDefaultPointBudget, 1});
  const auto b = remainder_scan(cfg, offs, grid, {kDefaultPointBudget, 4});
  ASSERT_EQ(a.size(), grid.size() * offs.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].rho, grid[i / offs.size()]);
    EXPECT_EQ(a[i].offset, offs[i % offs.size()]);
    EXPECT_EQ(a[i].volume, b[i].volume);
    EXPECT_EQ(a[i].remainder, a[i].volume - unit_ball_volume(3) * std::pow(a[i].rho, 3));
  }
}

TEST(DyadicGrid, Shape) {
  const auto g = dyadic_grid(16.0, 512.0, 8);
  ASSERT_EQ(g.size(), 41u);
  EXPECT_EQ(g.front(), 16.0);
  EXPECT_NEAR(g.back(), 512.0, 1e-12);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], std::pow(2.0, 1.0 / 8.0), 1e-12);
  const auto j = dyadic_grid(16.0, 512.0, 8, 0.01);
  for (std::size_t i = 1; i < j.size(); ++i) EXPECT_GT(j[i], j[i - 1]);
  EXPECT_THROW(dyadic_grid(16.0, 512.0, 8, 0.2), DomainError);
  EXPECT_THROW(dyadic_grid(0.0, 512.0, 8), DomainError);
}

}  // namespace
}  // namespace slicecount
