#include "slicecount/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

#include "slicecount/asymptotics.hpp"
#include "slicecount/errors.hpp"
#include "slicecount/fourier.hpp"
#include "slicecount/lattice_slice.hpp"
#include "slicecount/paraboloid_landau.hpp"
#include "slicecount/specfun.hpp"

namespace slicecount {

namespace {

constexpr double kPi = std::numbers::pi;

std::string printf_string(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

#define FMT(...) printf_string(__VA_ARGS__)

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

// Full-box evaluation of S with no pruning, for comparison with the
// enumerator.
double box_slice_volume(int d, int k, std::span<const double> x, double rho) {
  const int l = d - k;
  const auto reach = static_cast<std::int64_t>(std::ceil(rho)) + 1;
  std::vector<std::int64_t> lo(static_cast<std::size_t>(k)), g(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) lo[i] = static_cast<std::int64_t>(std::floor(x[i])) - reach;
  g = lo;
  const std::int64_t side = 2 * reach + 2;
  double total = 0.0;
  for (;;) {
    double r2 = 0.0;
    for (int i = 0; i < k; ++i) {
      const double t = static_cast<double>(g[i]) - x[i];
      r2 += t * t;
    }
    const double h = rho * rho - r2;
    if (r2 < rho * rho) total += l == 0 ? 1.0 : std::pow(h, 0.5 * l);
    int i = k - 1;
    while (i >= 0 && ++g[i] == lo[i] + side) {
      g[i] = lo[i];
      --i;
    }
    if (i < 0) break;
  }
  return unit_ball_volume(l) * total;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
};

CheckResult finish(std::string name, bool passed, std::string detail, const Timer& t) {
  return {std::move(name), passed, std::move(detail), t.seconds()};
}

// --- acceptance ------------------------------------------------------------

CheckResult acc_oracle(const VerifyOptions& o) {
  Timer t;
  std::mt19937_64 gen(o.seed);
  double worst = 0.0;
  int instances = 0;
  for (; instances < 200; ++instances) {
    const int d = 1 + static_cast<int>(gen() % 4);
    const int k = 1 + static_cast<int>(gen() % static_cast<unsigned>(d));
    std::vector<double> x(static_cast<std::size_t>(k));
    for (double& c : x) c = uniform(gen, 0.0, 1.0);
    const double rho = uniform(gen, 0.5, 30.0);
    const double got = slice_volume(SliceConfig(d, k), TorusOffset(x), rho);
    const double want = box_slice_volume(d, k, x, rho);
    worst = std::max(worst, want == 0.0 ? std::fabs(got) : rel_err(got, want));
  }
  return finish("oracle_equivalence", worst <= 1e-10 && t.seconds() <= 60.0,
                FMT("%d instances, max rel err %.3g (tol 1e-10), %.1fs (limit 60s)", instances, worst, t.seconds()), t);
}

CheckResult acc_normalization(const VerifyOptions&) {
  Timer t;
  double worst = 0.0;
  int n = 0;
  for (int d = 1; d <= 8; ++d) {
    for (int k = 1; k <= d; ++k, ++n) {
      const SliceConfig cfg(d, k);
      worst = std::max(worst, std::fabs(chi_hat(cfg, 0.0) * unit_ball_volume(d - k) - unit_ball_volume(d)));
    }
  }
  return finish("normalization", worst <= 1e-10, FMT("%d (d,k) pairs, max |chi_hat(0) w_l - w_d| = %.3g (tol 1e-10)", n, worst), t);
}

CheckResult acc_sandwich(const VerifyOptions& o) {
  Timer t;
  const int cases[3][2] = {{2, 1}, {2, 2}, {3, 2}};
  int checked = 0, violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& c : cases) {
    const SliceConfig cfg(c[0], c[1]);
    const auto panel = random_offset_panel(c[1], 4, o.seed);
    for (double rho : {10.0, 20.0, 40.0}) {
      const double eps = default_epsilon(cfg, rho);
      const auto tp = make_poisson_truncation(cfg, rho, eps, Sign::plus);
      const auto tm = make_poisson_truncation(cfg, rho, eps, Sign::minus);
      for (const auto& off : panel) {
        const double s = slice_volume(cfg, off, rho);
        const auto up = poisson_sum_approx(cfg, off, rho, eps, tp, Sign::plus);
        const auto lo = poisson_sum_approx(cfg, off, rho, eps, tm, Sign::minus);
        const double margin = std::min(s - (lo.value - lo.tail_bound), (up.value + up.tail_bound) - s);
        min_margin = std::min(min_margin, margin);
        if (margin < 0.0) ++violations;
        ++checked;
      }
    }
  }
  return finish("sandwich", violations == 0 && t.seconds() <= 300.0,
                FMT("%d (case, rho, offset) triples, %d violations, smallest margin %.4g, %.1fs", checked, violations,
                    min_margin, t.seconds()),
                t);
}

struct ScanCase {
  int d, k, top_octave;
};
constexpr ScanCase kScanCases[] = {{2, 1, 13}, {2, 2, 9}, {3, 1, 13}, {3, 2, 9}, {4, 1, 13}};

std::vector<PanelStatistic> panel_scan(const ScanCase& c, const VerifyOptions& o) {
  const SliceConfig cfg(c.d, c.k);
  const auto panel = random_offset_panel(c.k, 32, o.seed);
  const auto grid = dyadic_grid(16.0, std::ldexp(1.0, c.top_octave), 8);
  SliceOptions so;
  so.threads = o.threads;
  return panel_statistics(remainder_scan(cfg, panel, grid, so), panel.size());
}

CheckResult acc_upper(const VerifyOptions& o) {
  Timer t;
  bool ok = true;
  std::string detail;
  for (const auto& c : kScanCases) {
    const auto stats = panel_scan(c, o);
    std::vector<double> r, m;
    for (const auto& s : stats) {
      r.push_back(s.rho);
      m.push_back(s.max_abs);
    }
    const auto fit = fit_power_law(r, m);
    const auto pred = upper_exponent(c.d, c.k);
    const bool pass = fit.slope <= pred.exponent + 0.1;
    ok = ok && pass;
    detail += FMT("(%d,%d) slope %.3f <= %.3f+0.1%s %s; ", c.d, c.k, fit.slope, pred.exponent, pred.log_factor ? " (log)" : "",
                  pass ? "ok" : "FAIL");
  }
  detail += FMT("%.1fs", t.seconds());
  return finish("upper_exponents", ok && t.seconds() <= 1800.0, detail, t);
}

CheckResult acc_lower(const VerifyOptions& o) {
  Timer t;
  bool ok = true;
  std::string detail;
  for (const auto& c : kScanCases) {
    if (c.d % 4 == 1 || c.d > 3) continue;
    const auto stats = panel_scan(c, o);
    const double top = stats.back().rho;
    std::vector<double> r, m;
    for (const auto& s : stats) {
      if (s.rho >= top / 10.0) {
        r.push_back(s.rho);
        m.push_back(s.max_abs);
      }
    }
    const auto pred = lower_exponent(c.d, c.k);
    const auto fit = fit_fixed_slope(r, m, pred->exponent);
    const bool pass = fit.c_lower > 0.0 && fit.r_squared >= 0.5;
    ok = ok && pass;
    detail += FMT("(%d,%d) c=%.3g r2=%.3f %s; ", c.d, c.k, fit.c_lower, fit.r_squared, pass ? "ok" : "FAIL");
  }
  detail += FMT("%.1fs", t.seconds());
  return finish("lower_bound", ok, detail, t);
}

CheckResult acc_fourier(const VerifyOptions& o) {
  Timer t;
  std::mt19937_64 gen(o.seed ^ 0xf0u);
  const int cfgs[4][2] = {{2, 1}, {3, 1}, {2, 2}, {3, 2}};
  const double zero_tol = 1e-6;
  double worst_zero = 0.0, worst_rel = 0.0;
  for (int i = 0; i < 10; ++i) {
    const SliceConfig cfg(cfgs[i % 4][0], cfgs[i % 4][1]);
    const double rho = uniform(gen, 3.0, 12.0);
    std::vector<std::int64_t> zero(static_cast<std::size_t>(cfg.k()), 0), g(static_cast<std::size_t>(cfg.k()), 0);
    g[0] = 1 + static_cast<std::int64_t>(gen() % 2);
    if (cfg.k() == 2 && i % 3 == 0) g[1] = 1;
    double gn = 0.0;
    for (auto v : g) gn += static_cast<double>(v * v);
    gn = std::sqrt(gn);
    worst_zero = std::max(worst_zero, std::abs(remainder_fourier_coeff(cfg, rho, zero)));
    const auto coef = remainder_fourier_coeff(cfg, rho, g);
    const double want = unit_ball_volume(cfg.l()) * std::pow(rho, cfg.d()) * chi_hat(cfg, rho * gn);
    worst_rel = std::max(worst_rel, std::abs(coef - want) / std::fabs(want));
  }
  return finish("fourier_coefficients", worst_zero <= zero_tol && worst_rel <= 1e-4,
                FMT("10 cases, max |c_0| %.3g (tol %.0e), max rel err vs w_l rho^d chi_hat(rho|g|) %.3g (tol 1e-4), %.1fs",
                    worst_zero, zero_tol, worst_rel, t.seconds()),
                t);
}

CheckResult acc_euler_maclaurin(const VerifyOptions&) {
  Timer t;
  bool ok = true;
  std::string detail;
  for (int d : {3, 5, 7}) {
    const auto terms = exact_power_sum_expansion(d);
    BigInt denom = 1;
    for (const auto& term : terms) denom = boost::multiprecision::lcm(denom, BigInt(boost::multiprecision::denominator(term.coefficient)));
    std::vector<std::pair<int, BigInt>> scaled;
    for (const auto& term : terms) {
      scaled.emplace_back(term.power,
                          BigInt(boost::multiprecision::numerator(term.coefficient) * (denom / boost::multiprecision::denominator(term.coefficient))));
    }
    const unsigned p = static_cast<unsigned>((d - 1) / 2);
    BigInt running = 0;
    std::int64_t mismatches = 0;
    for (std::int64_t a = 0; a <= 10000; ++a) {
      if (a > 0) running += boost::multiprecision::pow(BigInt(a), p);
      BigInt poly = 0;
      for (const auto& [power, c] : scaled) poly += c * boost::multiprecision::pow(BigInt(a), static_cast<unsigned>(power));
      if (poly != running * denom) ++mismatches;
    }
    ok = ok && mismatches == 0;
    detail += FMT("d=%d %lld mismatches over a<=10^4; ", d, static_cast<long long>(mismatches));
  }
  detail += FMT("%.1fs", t.seconds());
  return finish("euler_maclaurin_exact", ok, detail, t);
}

CheckResult acc_landau_consistency(const VerifyOptions& o) {
  Timer t;
  std::mt19937_64 gen(o.seed ^ 0x1a4du);
  double worst = 0.0;
  int n = 0;
  for (int d : {3, 4, 5}) {
    int taken = 0;
    while (taken < 500) {
      const double lambda = uniform(gen, 1.0, 1000.0);
      const double h = 0.5 * (lambda - 1.0);
      if (std::fabs(h - std::round(h)) < 1e-6) continue;
      const LandauQuery q(d, lambda);
      worst = std::max(worst, rel_err(landau_ids_via_paraboloid(q), landau_ids_direct(q)));
      ++taken;
      ++n;
    }
  }
  return finish("landau_consistency", worst <= 1e-9, FMT("%d lambdas over d=3,4,5, max rel err %.3g (tol 1e-9)", n, worst), t);
}

// Log-uniform samples; the log-log slope of |diff| is fitted with the
// exact zeros of diff (if any) dropped.
PowerLawFit slope_of_abs(std::span<const double> x, std::span<const double> diff, double& sup) {
  std::vector<double> xs, ys;
  sup = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sup = std::max(sup, std::fabs(diff[i]));
    if (diff[i] != 0.0) {
      xs.push_back(x[i]);
      ys.push_back(std::fabs(diff[i]));
    }
  }
  return fit_power_law(xs, ys);
}

std::vector<double> log_uniform_samples(std::mt19937_64& gen, double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = std::exp(uniform(gen, std::log(lo), std::log(hi)));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

CheckResult acc_h3(const VerifyOptions& o) {
  Timer t;
  std::mt19937_64 gen(o.seed ^ 0x3bu);
  const auto lambdas = log_uniform_samples(gen, 1.0, 1e4, 1000);
  std::vector<double> diff;
  for (double lam : lambdas) diff.push_back(landau_ids_direct(LandauQuery(3, lam)) - landau_leading_h3(lam));
  double sup = 0.0;
  const auto fit = slope_of_abs(lambdas, diff, sup);
  const bool pass = std::isfinite(sup) && fit.slope <= 0.05 && t.seconds() <= 60.0;
  return finish("landau_h3_corollary", pass,
                FMT("%zu lambdas in [1,1e4], sup |diff| %.4g, slope %.4f (limit 0.05), %.1fs", lambdas.size(), sup, fit.slope,
                    t.seconds()),
                t);
}

CheckResult acc_paraboloid(const VerifyOptions& o) {
  Timer t;
  std::mt19937_64 gen(o.seed ^ 0x9au);
  const auto rhos = log_uniform_samples(gen, 10.0, 1e6, 400);
  std::vector<double> diff;
  const double w = unit_ball_volume(2);
  const int n = (3 + 1) / 4;
  SliceOptions so;
  so.threads = o.threads;
  for (double rho : rhos) diff.push_back(paraboloid_measure(ParaboloidQuery(3, 1, rho), so) - w * euler_maclaurin_E(3, n, rho));
  double sup = 0.0;
  const auto fit = slope_of_abs(rhos, diff, sup);
  return finish("paraboloid_bounded", fit.slope <= 0.05,
                FMT("%zu rhos in [10,1e6], d=3, E_%d, sup |diff| %.4g, slope %.4f (limit 0.05), %.1fs", rhos.size(), n, sup,
                    fit.slope, t.seconds()),
                t);
}

// --- identities ------------------------------------------------------------

CheckResult id_specfun(const VerifyOptions&) {
  Timer t;
  const double g = std::fabs(gamma(HalfInteger::from_twice(1)) - std::sqrt(kPi));
  const double j = std::fabs(bessel_j(HalfInteger::from_int(1), 1.0) - 0.44005058574493352);
  const bool b = bernoulli(2) == Rational(1, 6) && bernoulli(12) == Rational(-691, 2730);
  CompensatedSum s;
  for (double v : {1e16, 1.0, -1e16}) s.add(v);
  const bool pass = g < 1e-15 && j < 1e-15 && b && s.value() == 1.0;
  return finish("specfun", pass, FMT("|G(1/2)-sqrt(pi)| %.2g, |J_1(1)-ref| %.2g, Bernoulli %s, compensated %g", g, j, b ? "ok" : "bad", s.value()), t);
}

CheckResult id_lattice(const VerifyOptions&) {
  Timer t;
  const double s = slice_volume(SliceConfig(2, 2), TorusOffset::zero(2), 2.5);
  const SliceConfig cfg(3, 2);
  const double a = slice_volume(cfg, TorusOffset({0.25, 0.75}), 6.1);
  const double b = slice_volume(cfg, TorusOffset({1.25, -0.25}), 6.1);
  const double c = slice_volume(cfg, TorusOffset({0.75, 0.25}), 6.1);
  const bool pass = s == 21.0 && a == b && rel_err(a, c) < 1e-13;
  return finish("lattice_slice", pass, FMT("S(2,2,2.5)=%g, periodicity %s, reflection rel %.2g", s, a == b ? "exact" : "broken", rel_err(a, c)), t);
}

CheckResult id_fourier(const VerifyOptions&) {
  Timer t;
  double worst = 0.0;
  for (int d = 1; d <= 8; ++d) {
    for (int k = 1; k <= d; ++k) {
      worst = std::max(worst, std::fabs(chi_hat(SliceConfig(d, k), 0.0) * unit_ball_volume(d - k) - unit_ball_volume(d)));
    }
  }
  double mass = 0.0;
  for (int k = 1; k <= 3; ++k) mass = std::max(mass, std::fabs(mollifier_Psi_hat(k, 0.0) - 1.0));
  const SliceConfig cfg(2, 1);
  const double rho = 10.0, eps = default_epsilon(cfg, rho);
  const TorusOffset off({0.3});
  const double s = slice_volume(cfg, off, rho);
  const auto up = poisson_sum_approx(cfg, off, rho, eps, make_poisson_truncation(cfg, rho, eps, Sign::plus), Sign::plus);
  const auto lo = poisson_sum_approx(cfg, off, rho, eps, make_poisson_truncation(cfg, rho, eps, Sign::minus), Sign::minus);
  const bool sand = lo.value - lo.tail_bound <= s && s <= up.value + up.tail_bound;
  return finish("fourier", worst < 1e-10 && mass < 1e-10 && sand,
                FMT("normalization %.2g, |Psi^(0)-1| %.2g, sandwich at rho=10 %s", worst, mass, sand ? "holds" : "fails"), t);
}

CheckResult id_asymptotics(const VerifyOptions&) {
  Timer t;
  const auto a = upper_exponent(2, 2), b = upper_exponent(3, 2), c = upper_exponent(5, 1);
  const bool ex = std::fabs(a.exponent - 2.0 / 3.0) < 1e-15 && !a.log_factor && b.exponent == 1.0 && b.log_factor &&
                  c.exponent == 2.0 && !lower_exponent(5, 1).has_value();
  bool boundary = true;
  for (int d = 3; d <= 15; d += 2) {
    const int k = (d + 1) / 2;
    boundary = boundary && upper_exponent(d, k).exponent == 0.5 * (d - 1) &&
               std::fabs(large_k_exponent(d, k) - 0.5 * (d - 1)) < 1e-12;
  }
  const std::int64_t g0[1] = {0};
  const double z = std::abs(remainder_fourier_coeff(SliceConfig(2, 1), 7.3, g0));
  return finish("asymptotics", ex && boundary && z <= 1e-6,
                FMT("exponent table %s, k=(d+1)/2 continuity %s, |c_0(2,1,7.3)| %.2g", ex ? "ok" : "bad", boundary ? "ok" : "bad", z), t);
}

CheckResult id_paraboloid(const VerifyOptions&) {
  Timer t;
  const double l2 = landau_ids_direct(LandauQuery(2, 5.0));
  const double l3 = landau_leading_h3(100.0);
  const double cons = rel_err(landau_ids_via_paraboloid(LandauQuery(4, 77.7)), landau_ids_direct(LandauQuery(4, 77.7)));
  const auto terms = exact_power_sum_expansion(5);
  bool faulhaber = true;
  for (std::int64_t a = 0; a <= 50; ++a) {
    Rational v = 0;
    for (const auto& term : terms) v += term.coefficient * Rational(boost::multiprecision::pow(BigInt(a), static_cast<unsigned>(term.power)));
    faulhaber = faulhaber && v == Rational(power_sum(2, a));
  }
  const bool pass = std::fabs(l2 - 1.0 / kPi) < 1e-15 && rel_err(l3, 1000.0 / (6.0 * kPi * kPi)) < 1e-15 && cons < 1e-9 && faulhaber;
  return finish("paraboloid_landau", pass,
                FMT("N(5;H_2)=%.17g, N~(100)=%.10g, consistency rel %.2g, Faulhaber d=5 %s", l2, l3, cons, faulhaber ? "exact" : "bad"), t);
}

#undef FMT

}  // namespace

std::vector<NamedCheck> identity_checks() {
  return {{"specfun", id_specfun},
          {"lattice_slice", id_lattice},
          {"fourier", id_fourier},
          {"asymptotics", id_asymptotics},
          {"paraboloid_landau", id_paraboloid}};
}

std::vector<NamedCheck> acceptance_checks() {
  return {{"oracle_equivalence", acc_oracle},   {"normalization", acc_normalization},
          {"sandwich", acc_sandwich},           {"upper_exponents", acc_upper},
          {"lower_bound", acc_lower},           {"fourier_coefficients", acc_fourier},
          {"euler_maclaurin_exact", acc_euler_maclaurin}, {"landau_consistency", acc_landau_consistency},
          {"landau_h3_corollary", acc_h3},      {"paraboloid_bounded", acc_paraboloid}};
}

std::vector<std::string> suite_names() { return {"identities", "acceptance"}; }

std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& options) {
  std::vector<NamedCheck> checks;
  if (suite == "identities") {
    checks = identity_checks();
  } else if (suite == "acceptance") {
    checks = acceptance_checks();
  } else {
    throw DomainError("unknown verify suite: " + std::string(suite));
  }
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    try {
      out.push_back(c.run(options));
    } catch (const std::exception& e) {
      out.push_back({c.name, false, std::string("exception: ") + e.what(), 0.0});
    }
  }
  return out;
}

}  // namespace slicecount
