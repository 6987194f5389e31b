#pragma once

// Special functions used throughout the library: Gamma on reals and
// half-integers, Bessel J of half-integer order, exact Bernoulli numbers and
// compensated (Neumaier) summation. Everything here is pure.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "slicecount/errors.hpp"

namespace slicecount {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// An exact element of (1/2)Z, stored as twice its value.
class HalfInteger {
 public:
  static constexpr int kMaxTwice = 2000;

  constexpr HalfInteger() = default;

  static HalfInteger from_twice(int twice) {
    if (twice < -kMaxTwice || twice > kMaxTwice) {
      throw DomainError("HalfInteger out of range");
    }
    HalfInteger h;
    h.twice_ = twice;
    return h;
  }
  static HalfInteger from_int(int n) { return from_twice(2 * n); }

  constexpr int twice() const noexcept { return twice_; }
  constexpr double value() const noexcept { return 0.5 * twice_; }
  constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }

  HalfInteger operator+(int n) const { return from_twice(twice_ + 2 * n); }
  HalfInteger operator-(int n) const { return from_twice(twice_ - 2 * n); }

  friend constexpr bool operator==(HalfInteger, HalfInteger) = default;

 private:
  int twice_ = 0;
};

/// Gamma function. Throws DomainError at nonpositive integers; overflows to
/// +inf above x ~ 171.6.
double gamma(double x);

/// Gamma at a half-integer, by exact recursion from Gamma(1) = 1 and
/// Gamma(1/2) = sqrt(pi).
double gamma(HalfInteger x);

/// 1/Gamma(x); exactly 0 at the poles.
double recip_gamma(double x);

/// Bessel function of the first kind J_nu(z), nu a nonnegative half-integer,
/// z >= 0.
///
/// z < 12: ascending series in extended precision.
/// 12 <= z < 2 nu: normalised backward recurrence.
/// z >= max(12, 2 nu): Hankel expansion for integer nu, closed spherical form
/// (upward recurrence from sin/cos) for half-odd nu.
double bessel_j(HalfInteger nu, double z);

/// dJ_nu/dz via J_nu' = (J_{nu-1} - J_{nu+1}) / 2; also defined for nu = 0
/// and nu = 1/2, where the lower neighbour has negative order.
double bessel_j_derivative(HalfInteger nu, double z);

/// Exact Bernoulli number B_n (B_1 = -1/2). n must be 1 or even, n <= 60.
Rational bernoulli(int n);

/// B_0..B_60 as exact rationals, built once on first use.
class BernoulliTable {
 public:
  static constexpr int kMaxIndex = 60;
  static const BernoulliTable& instance();

  const Rational& operator[](int n) const { return values_.at(static_cast<std::size_t>(n)); }
  std::span<const Rational> values() const noexcept { return values_; }

 private:
  BernoulliTable();
  std::vector<Rational> values_;
};

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

}  // namespace slicecount
