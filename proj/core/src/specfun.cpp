#include "slicecount/specfun.hpp"

#include <array>
#include <limits>
#include <numbers>

namespace slicecount {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;

// Lanczos approximation, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

double lanczos_gamma(double x) {
  if (x < 0.5) {
    return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  // split the power so t^(x+0.5) does not overflow before e^-t is applied
  const double half_pow = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * kPi) * half_pow * (half_pow * std::exp(-t)) * a;
}

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at nonpositive integer");
  if (std::abs(x) <= 1000.0 && std::floor(2.0 * x) == 2.0 * x) {
    return gamma(HalfInteger::from_twice(static_cast<int>(2.0 * x)));
  }
  if (x > 171.7) return std::numeric_limits<double>::infinity();
  return lanczos_gamma(x);
}

double gamma(HalfInteger x) {
  const int t = x.twice();
  if (x.is_integer()) {
    const int n = t / 2;
    if (n <= 0) throw DomainError("gamma: pole at nonpositive integer");
    double g = 1.0;
    for (int i = 2; i < n; ++i) g *= i;
    return g;
  }
  // half-odd: walk from Gamma(1/2) in unit steps
  double g = kSqrtPi;
  if (t > 0) {
    for (int twice_v = 1; twice_v < t; twice_v += 2) g *= 0.5 * twice_v;
  } else {
    for (int twice_v = -1; twice_v >= t; twice_v -= 2) g /= 0.5 * twice_v;
  }
  return g;
}

double recip_gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.7) return 0.0;
  return 1.0 / gamma(x);
}

// ---------------------------------------------------------------------------
// Bessel J

namespace detail {

// Below this the Hankel series cannot reach 1e-15 (its smallest term is
// about exp(-2z)).
constexpr double kHankelMinArgument = 40.0;

double bessel_j_series(double nu, double z) {
  const long double half = 0.5L * z;
  const long double q = -half * half;
  long double term = std::pow(half, static_cast<long double>(nu)) *
                     static_cast<long double>(recip_gamma(nu + 1.0));
  long double sum = term;
  for (int m = 1; m < 500; ++m) {
    term *= q / (static_cast<long double>(m) * (m + nu));
    sum += term;
    if (m > half && std::abs(term) <= 1e-21L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

double bessel_j_hankel(int nu, double z) {
  const double mu = 4.0 * nu * nu;
  const double eight_z = 8.0 * z;
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (k * eight_z);
    const double mag = std::abs(a);
    // past the growth phase, stop once the terms start increasing again
    if (odd * odd > mu && mag > prev) break;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * a;
    } else {
      q += ((((k - 1) / 2) % 2 == 0) ? 1.0 : -1.0) * a;
    }
    if (mag < 1e-17) break;
    prev = mag;
  }
  // phase (2 nu + 1) pi / 4 reduced exactly to a multiple of pi/4
  constexpr double r = std::numbers::sqrt2 / 2.0;
  constexpr std::array<double, 8> cos_tab = {1.0, r, 0.0, -r, -1.0, -r, 0.0, r};
  constexpr std::array<double, 8> sin_tab = {0.0, r, 1.0, r, 0.0, -r, -1.0, -r};
  const int octant = (2 * nu + 1) % 8;
  const double cc = cos_tab[octant];
  const double sc = sin_tab[octant];
  const double cz = std::cos(z);
  const double sz = std::sin(z);
  const double cos_chi = cz * cc + sz * sc;
  const double sin_chi = sz * cc - cz * sc;
  return std::sqrt(2.0 / (kPi * z)) * (p * cos_chi - q * sin_chi);
}

double bessel_j_miller(int n, double z) {
  int top = n + static_cast<int>(z) + 48;
  if (top % 2 != 0) ++top;
  long double above = 0.0L;
  long double cur = 1e-30L;
  long double norm = 0.0L;
  long double result = 0.0L;
  for (int k = top; k >= 1; --k) {
    const long double below = (2.0L * k / z) * cur - above;
    above = cur;
    cur = below;  // J_{k-1}
    const int idx = k - 1;
    if (idx == n) result = cur;
    if (idx == 0) {
      norm += cur;
    } else if (idx % 2 == 0) {
      norm += 2.0L * cur;
    }
  }
  return static_cast<double>(result / norm);
}

// Spherical j_n by upward recurrence; stable for z >= n.
double spherical_j_upward(int n, double z) {
  const double s = std::sin(z);
  const double c = std::cos(z);
  double j0 = s / z;
  if (n == 0) return j0;
  double j1 = s / (z * z) - c / z;
  for (int k = 1; k < n; ++k) {
    const double j2 = (2.0 * k + 1.0) / z * j1 - j0;
    j0 = j1;
    j1 = j2;
  }
  return j1;
}

// Spherical j_n by backward recurrence normalised against the closed forms.
double spherical_j_backward(int n, double z) {
  const int top = n + static_cast<int>(z) + 48;
  long double above = 0.0L;
  long double cur = 1e-30L;
  long double jn = 0.0L;
  long double j1 = 0.0L;
  for (int k = top; k >= 1; --k) {
    const long double below = ((2.0L * k + 1.0L) / z) * cur - above;
    above = cur;
    cur = below;  // j_{k-1}
    if (k - 1 == n) jn = cur;
    if (k - 1 == 1) j1 = cur;
  }
  const long double j0 = cur;
  const double true_j0 = std::sin(z) / z;
  const double true_j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  if (std::abs(true_j0) >= std::abs(true_j1)) return static_cast<double>(jn * true_j0 / j0);
  return static_cast<double>(jn * true_j1 / j1);
}

}  // namespace detail

double bessel_j(HalfInteger nu, double z) {
  using detail::kHankelMinArgument;
  if (!(z >= 0.0)) throw DomainError("bessel_j: negative or NaN argument");
  if (nu.twice() < 0) throw DomainError("bessel_j: negative order");
  const double v = nu.value();
  if (z == 0.0) return nu.twice() == 0 ? 1.0 : 0.0;
  if (z < 12.0) return detail::bessel_j_series(v, z);
  if (nu.is_integer()) {
    const int n = nu.twice() / 2;
    if (z < std::max(2.0 * v, kHankelMinArgument)) return detail::bessel_j_miller(n, z);
    return detail::bessel_j_hankel(n, z);
  }
  const int n = (nu.twice() - 1) / 2;
  const double scale = std::sqrt(2.0 * z / kPi);
  if (z >= n) return scale * detail::spherical_j_upward(n, z);
  return scale * detail::spherical_j_backward(n, z);
}

double bessel_j_derivative(HalfInteger nu, double z) {
  if (!(z >= 0.0)) throw DomainError("bessel_j_derivative: negative argument");
  const int t = nu.twice();
  if (t < 0) throw DomainError("bessel_j_derivative: negative order");
  const double upper = bessel_j(HalfInteger::from_twice(t + 2), z);
  double lower = 0.0;
  if (t == 0) {
    lower = -bessel_j(HalfInteger::from_int(1), z);  // J_{-1} = -J_1
  } else if (t == 1) {
    if (z == 0.0) return std::numeric_limits<double>::infinity();
    lower = std::sqrt(2.0 / (kPi * z)) * std::cos(z);  // J_{-1/2}
  } else {
    lower = bessel_j(HalfInteger::from_twice(t - 2), z);
  }
  return 0.5 * (lower - upper);
}

// ---------------------------------------------------------------------------
// Bernoulli numbers

BernoulliTable::BernoulliTable() : values_(kMaxIndex + 1) {
  // sum_{j=0}^{n} C(n+1, j) B_j = 0
  values_[0] = 1;
  for (int n = 1; n <= kMaxIndex; ++n) {
    if (n > 1 && n % 2 == 1) {
      values_[n] = 0;
      continue;
    }
    Rational acc = 0;
    BigInt binom = 1;  // C(n+1, 0)
    for (int j = 0; j < n; ++j) {
      acc += Rational(binom) * values_[j];
      binom = binom * (n + 1 - j) / (j + 1);
    }
    values_[n] = -acc / (n + 1);
  }
}

const BernoulliTable& BernoulliTable::instance() {
  static const BernoulliTable table;
  return table;
}

Rational bernoulli(int n) {
  if (n < 0 || n > BernoulliTable::kMaxIndex) throw DomainError("bernoulli: index out of range [0, 60]");
  if (n > 1 && n % 2 == 1) throw DomainError("bernoulli: odd index > 1 is unsupported");
  return BernoulliTable::instance()[n];
}

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

}  // namespace slicecount
