#pragma once

// Lattice-of-planes measure inside the solid paraboloid
// {(x0, x) : 0 <= x0 <= rho - |x|^2}, its Euler-Maclaurin expansion, and
// the integrated density of states of the Landau Hamiltonian built on it.

#include <cstdint>
#include <optional>
#include <vector>

#include "slicecount/lattice_slice.hpp"
#include "slicecount/specfun.hpp"

namespace slicecount {

struct ParaboloidQuery {
  ParaboloidQuery(int d, int k, double rho);
  int d;
  int k;
  double rho;
};

struct ExpansionTerm {
  double power = 0.0;
  double coefficient = 0.0;
};

/// E_n(rho, d) = 2/(d+1) rho^((d+1)/2) + 1/2 rho^((d-1)/2)
///   + sum_{j=1}^{n} B_{2j}/(2j)! Gamma((d+1)/2)/Gamma((d+3-4j)/2) rho^((d+1-4j)/2).
/// Terms whose Gamma denominator sits at a pole vanish and are omitted.
struct ExpansionSpec {
  int d = 0;
  int n_terms = 0;
  std::vector<ExpansionTerm> coefficients;  // powers strictly decreasing

  double evaluate(double rho) const;
};

ExpansionSpec expansion_spec(int d, int n);
double euler_maclaurin_E(int d, int n, double rho);

/// Exact polynomial for sum_{j=0}^{a} j^((d-1)/2), d odd >= 3: the
/// expansion above with both endpoint corrections, i.e. without the constant
/// term that appears when d = 3 mod 4.
struct ExactPowerSumTerm {
  int power = 0;
  Rational coefficient;
};
std::vector<ExactPowerSumTerm> exact_power_sum_expansion(int d);

/// sum_{j=0}^{a} j^p in exact integer arithmetic.
BigInt power_sum(int p, std::int64_t a);

/// P(rho; d, k) = sum_{j=0}^{floor(rho)} S(sqrt(rho - j); 0; d-1, k-1).
/// k = 1 uses the closed form omega_{d-1} (rho - j)^((d-1)/2).
double paraboloid_measure(const ParaboloidQuery& q, const SliceOptions& options = {});

struct ParaboloidAsymptotic {
  double value = 0.0;
  int expansion_index = 0;       // n in omega_{d-1} E_n
  double error_exponent = 0.0;   // stated error O(rho^e (log rho)^delta)
  bool log_factor = false;
  double error_profile = 0.0;    // rho^e (log rho)^delta at the query point
  std::optional<double> alternative_error_exponent;  // rho * X(rho) exponent where it differs
};

ParaboloidAsymptotic paraboloid_asymptotic(int d, int k, double rho);

struct LandauQuery {
  LandauQuery(int d, double lambda);
  int d;
  double lambda;
};

/// N(lambda; H_d) from the Landau level sum; 0 below lambda = 1.
double landau_ids_direct(const LandauQuery& q);

/// N(lambda; H_d) = 2^(-d/2) pi^(1-d) P((lambda - 1)/2; d - 1, 1), d >= 3.
double landau_ids_via_paraboloid(const LandauQuery& q);

/// lambda^(3/2) / (6 pi^2).
double landau_leading_h3(double lambda);

}  // namespace slicecount
