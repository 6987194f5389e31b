#pragma once

// Small quadrature kit: a tanh-sinh (double exponential) rule that refines
// until successive levels agree, and composite Gauss-Legendre.

#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>

#include <boost/math/quadrature/gauss.hpp>

namespace slicecount::internal {

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

// Integrates f over [a, b]. Endpoint singularities of algebraic type are
// handled; the integrand is never evaluated exactly at a or b.
template <class F>
auto tanh_sinh(F&& f, double a, double b, double tol = 1e-12, int max_level = 10)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> out;
  if (!(b > a)) return out;
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kTmax = 3.2;
  const double half = 0.5 * (b - a);

  auto node = [&](double t) -> T {
    const double u = kHalfPi * std::sinh(std::abs(t));
    const double ch = std::cosh(u);
    const double w = half * kHalfPi * std::cosh(t) / (ch * ch);
    // distance to the nearer endpoint, computed without cancellation
    const double delta = (b - a) / (1.0 + std::exp(2.0 * u));
    if (!(delta > 0.0) || w == 0.0) return T{};
    const double x = t >= 0.0 ? b - delta : a + delta;
    if (!(x > a && x < b)) return T{};
    ++out.evaluations;
    return f(x) * w;
  };

  double h = 0.5;
  T sum = node(0.0);
  for (double t = h; t <= kTmax; t += h) sum += node(t) + node(-t);
  T estimate = sum * h;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    T extra{};
    for (double t = h; t <= kTmax; t += 2.0 * h) extra += node(t) + node(-t);
    sum += extra;
    const T next = sum * h;
    out.error = magnitude(next - estimate);
    estimate = next;
    if (level >= 3 && out.error <= tol * std::max(1.0, magnitude(estimate))) break;
  }
  out.value = estimate;
  return out;
}

// Composite Gauss-Legendre with `panels` equal panels of N points each.
template <unsigned N, class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    total += boost::math::quadrature::gauss<double, N>::integrate(f, lo, lo + width);
  }
  return total;
}

}  // namespace slicecount::internal
