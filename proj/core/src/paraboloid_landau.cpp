#include "slicecount/paraboloid_landau.hpp"

#include <cmath>
#include <numbers>

#include "internal/parallel.hpp"
#include "internal/powers.hpp"
#include "internal/slice_squared.hpp"

namespace slicecount {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kChunk = 4096;

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

ParaboloidQuery::ParaboloidQuery(int d_, int k_, double rho_) : d(d_), k(k_), rho(rho_) {
  if (d < 2 || d > kMaxDimension + 1) throw DomainError("ParaboloidQuery: d must lie in [2, 17]");
  if (k < 1 || k > d) throw DomainError("ParaboloidQuery: k must lie in [1, d]");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("ParaboloidQuery: rho must be nonnegative");
}

LandauQuery::LandauQuery(int d_, double lambda_) : d(d_), lambda(lambda_) {
  if (d < 2 || d > kMaxDimension + 2) throw DomainError("LandauQuery: d must lie in [2, 18]");
  if (!std::isfinite(lambda)) throw DomainError("LandauQuery: lambda must be finite");
}

double ExpansionSpec::evaluate(double rho) const {
  CompensatedSum acc;
  for (const auto& t : coefficients) acc.add(t.coefficient * std::pow(rho, t.power));
  return acc.value();
}

ExpansionSpec expansion_spec(int d, int n) {
  if (d < 1) throw DomainError("expansion_spec: d must be >= 1");
  if (n < 0 || 2 * n > BernoulliTable::kMaxIndex) throw DomainError("expansion_spec: n must lie in [0, 30]");
  ExpansionSpec spec;
  spec.d = d;
  spec.n_terms = n;
  spec.coefficients.push_back({0.5 * (d + 1), 2.0 / (d + 1)});
  spec.coefficients.push_back({0.5 * (d - 1), 0.5});
  const double gamma_top = gamma(HalfInteger::from_twice(d + 1));
  for (int j = 1; j <= n; ++j) {
    const double inv_denominator = recip_gamma(0.5 * (d + 3 - 4 * j));
    if (inv_denominator == 0.0) continue;
    const Rational b = BernoulliTable::instance()[2 * j] / Rational(factorial(2 * j));
    const double coef = static_cast<double>(b) * gamma_top * inv_denominator;
    spec.coefficients.push_back({0.5 * (d + 1 - 4 * j), coef});
  }
  return spec;
}

double euler_maclaurin_E(int d, int n, double rho) {
  if (!(rho > 0.0)) throw DomainError("euler_maclaurin_E: rho must be positive");
  return expansion_spec(d, n).evaluate(rho);
}

std::vector<ExactPowerSumTerm> exact_power_sum_expansion(int d) {
  if (d < 3 || d % 2 == 0 || d > 2 * BernoulliTable::kMaxIndex) throw DomainError("exact_power_sum_expansion: d must be odd and >= 3");
  const int p = (d - 1) / 2;
  std::vector<ExactPowerSumTerm> terms;
  terms.push_back({p + 1, Rational(1, p + 1)});
  terms.push_back({p, Rational(1, 2)});
  // the constant (power 0) term is cancelled by the lower endpoint
  for (int j = 1; 2 * j <= p; ++j) {
    const Rational falling = Rational(factorial(p)) / Rational(factorial(p + 1 - 2 * j));
    terms.push_back({p + 1 - 2 * j, BernoulliTable::instance()[2 * j] / Rational(factorial(2 * j)) * falling});
  }
  return terms;
}

BigInt power_sum(int p, std::int64_t a) {
  if (p < 0 || a < 0) throw DomainError("power_sum: need p >= 0 and a >= 0");
  BigInt total = 0;
  for (std::int64_t j = (p == 0 ? 0 : 1); j <= a; ++j) total += boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(p));
  return total;
}

double paraboloid_measure(const ParaboloidQuery& q, const SliceOptions& options) {
  const auto top = static_cast<std::size_t>(std::floor(q.rho));
  const std::size_t n_terms = top + 1;
  const std::size_t n_chunks = (n_terms + kChunk - 1) / kChunk;
  std::vector<CompensatedSum> partial(n_chunks);
  const double omega = unit_ball_volume(q.d - 1);
  SliceOptions inner = options;
  inner.threads = 1;
  internal::parallel_for(n_chunks, options.threads, [&](std::size_t c) {
    const std::size_t end = std::min(n_terms, (c + 1) * kChunk);
    for (std::size_t j = c * kChunk; j < end; ++j) {
      const double h = q.rho - static_cast<double>(j);
      if (!(h > 0.0)) continue;
      if (q.k == 1) {
        partial[c].add(omega * internal::half_power(h, q.d - 1));
      } else {
        partial[c].add(internal::slice_volume_squared(SliceConfig(q.d - 1, q.k - 1), TorusOffset::zero(q.k - 1), h, inner));
      }
    }
  });
  CompensatedSum total;
  for (const auto& p : partial) total.merge(p);
  return total.value();
}

ParaboloidAsymptotic paraboloid_asymptotic(int d, int k, double rho) {
  ParaboloidQuery q(d, k, rho);
  if (!(rho > 1.0)) throw DomainError("paraboloid_asymptotic: needs rho > 1");
  ParaboloidAsymptotic out;
  if (k == 1) {
    out.expansion_index = (d + 1) / 4;
    out.error_exponent = 0.0;
  } else if (k == d) {
    out.expansion_index = 0;
    out.error_exponent = static_cast<double>(d * d - d + 2) / (2.0 * d);
  } else if (2 * k > d + 2) {
    out.expansion_index = (k - 1) / (4 * k - 2);
    out.error_exponent = 0.5 * (d - 1 - (2.0 * k - 2.0) / (2.0 * k - d));
  } else {
    out.expansion_index = d >= 4 ? (d - 4) / 8 : 0;
    out.error_exponent = (d + 4) / 4.0;
    out.log_factor = 2 * k == d + 2;
    out.alternative_error_exponent = (d + 2) / 4.0;
  }
  out.value = unit_ball_volume(d - 1) * euler_maclaurin_E(d, out.expansion_index, rho);
  out.error_profile = std::pow(rho, out.error_exponent) * (out.log_factor ? std::log(rho) : 1.0);
  return out;
}

double landau_ids_direct(const LandauQuery& q) {
  if (q.lambda < 1.0) return 0.0;
  const double levels = std::floor((q.lambda - 1.0) / 2.0);
  if (q.d == 2) return levels / (2.0 * kPi);
  CompensatedSum acc;
  const auto top = static_cast<std::int64_t>(levels);
  for (std::int64_t n = 0; n <= top; ++n) {
    acc.add(internal::half_power(q.lambda - 2.0 * static_cast<double>(n) - 1.0, q.d - 2));
  }
  return unit_ball_volume(q.d - 2) / std::pow(2.0 * kPi, q.d - 1) * acc.value();
}

double landau_ids_via_paraboloid(const LandauQuery& q) {
  if (q.d < 3) throw DomainError("landau_ids_via_paraboloid: needs d >= 3");
  if (q.lambda < 1.0) return 0.0;
  const double p = paraboloid_measure(ParaboloidQuery(q.d - 1, 1, 0.5 * (q.lambda - 1.0)));
  return std::pow(2.0, -0.5 * q.d) * std::pow(kPi, 1.0 - q.d) * p;
}

double landau_leading_h3(double lambda) {
  if (!(lambda >= 1.0)) throw DomainError("landau_leading_h3: needs lambda >= 1");
  return std::pow(lambda, 1.5) / (6.0 * kPi * kPi);
}

}  // namespace slicecount
