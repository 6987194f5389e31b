#include "cli.hpp"

#include <cmath>
#include <sstream>

#include <CLI11.hpp>

#include "slicecount/asymptotics.hpp"
#include "slicecount/errors.hpp"
#include "slicecount/fourier.hpp"
#include "slicecount/lattice_slice.hpp"
#include "slicecount/paraboloid_landau.hpp"
#include "slicecount/verify.hpp"

#ifndef SLICECOUNT_VERSION
#define SLICECOUNT_VERSION "unknown"
#endif

namespace slicecount::cli {

namespace {

using json = nlohmann::ordered_json;

struct CommandInfo {
  Command command;
  const char* name;
  const char* help;
  std::vector<const char*> flags;
};

const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> table = {
      {Command::slice, "slice", "S and R at one radius for one or more offsets", {"d", "k", "rho", "offsets"}},
      {Command::remainder_scan, "remainder-scan", "R over a dyadic radius grid and an offset panel",
       {"d", "k", "rho-min", "rho-max", "per-octave", "offsets"}},
      {Command::exponent_fit, "exponent-fit", "log-log fit of the panel maximum of |R| against the predicted exponents",
       {"d", "k", "rho-min", "rho-max", "per-octave", "offsets"}},
      {Command::poisson_check, "poisson-check", "mollified upper and lower Poisson sums around S",
       {"d", "k", "rho", "eps", "offsets"}},
      {Command::fourier_coeff, "fourier-coeff", "Fourier coefficient of R over the torus", {"d", "k", "rho", "gamma"}},
      {Command::paraboloid, "paraboloid", "paraboloid measure P and its expansion",
       {"d", "k", "rho", "rho-min", "rho-max", "per-octave"}},
      {Command::landau, "landau", "integrated density of states of the Landau Hamiltonian", {"d", "lambda"}},
      {Command::verify, "verify", "run a self-check suite (identities or acceptance)", {"suite"}},
  };
  return table;
}

const CommandInfo& info(Command c) {
  for (const auto& i : command_table()) {
    if (i.command == c) return i;
  }
  throw std::logic_error("unknown command");
}

// --- parameter access -------------------------------------------------------

const std::string* find(const RunConfig& cfg, const std::string& key) {
  auto it = cfg.params.find(key);
  return it == cfg.params.end() ? nullptr : &it->second;
}

const std::string& require(const RunConfig& cfg, const std::string& key) {
  if (const auto* v = find(cfg, key)) return *v;
  throw DomainError(std::string(to_string(cfg.command)) + ": missing required --" + key);
}

double parse_double(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || !std::isfinite(v)) throw DomainError("--" + key + ": not a finite number: '" + s + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& s) {
  const double v = parse_double(key, s);
  if (v != std::floor(v) || std::fabs(v) > 1e9) throw DomainError("--" + key + ": not an integer: '" + s + "'");
  return static_cast<int>(v);
}

double get_double(const RunConfig& cfg, const std::string& key) { return parse_double(key, require(cfg, key)); }
int get_int(const RunConfig& cfg, const std::string& key) { return parse_int(key, require(cfg, key)); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

// "random:N" draws a seeded panel (offset 0 first); otherwise vectors are
// separated by ';' and coordinates by ','.
std::vector<TorusOffset> parse_offsets(const RunConfig& cfg, int k, const std::string& fallback) {
  const auto* given = find(cfg, "offsets");
  const std::string spec = trim(given ? *given : fallback);
  if (spec.rfind("random:", 0) == 0) {
    const int n = parse_int("offsets", spec.substr(7));
    if (n < 1 || n > 100000) throw DomainError("--offsets: random:N needs 1 <= N <= 100000");
    return random_offset_panel(k, n, cfg.seed);
  }
  if (spec == "zero") return {TorusOffset::zero(k)};
  std::vector<TorusOffset> out;
  for (const auto& vec : split(spec, ';')) {
    std::vector<double> coords;
    for (const auto& c : split(vec, ',')) coords.push_back(parse_double("offsets", trim(c)));
    if (static_cast<int>(coords.size()) != k) {
      throw DomainError("--offsets: vector '" + vec + "' has " + std::to_string(coords.size()) + " coordinates, expected k = " +
                        std::to_string(k));
    }
    out.emplace_back(std::move(coords));
  }
  if (out.empty()) throw DomainError("--offsets: empty list");
  return out;
}

std::string offset_text(const TorusOffset& o) {
  std::string s;
  for (int i = 0; i < o.size(); ++i) s += (i ? " " : "") + format_double(o[i]);
  return s;
}

SliceOptions slice_options(const RunConfig& cfg) {
  SliceOptions o;
  o.threads = cfg.threads;
  if (const auto* b = find(cfg, "budget")) {
    o.point_budget = parse_double("budget", *b);
    if (!(o.point_budget > 0.0)) throw DomainError("--budget must be positive");
  }
  return o;
}

std::vector<double> rho_grid(const RunConfig& cfg) {
  const int per_octave = find(cfg, "per-octave") ? get_int(cfg, "per-octave") : 8;
  return dyadic_grid(get_double(cfg, "rho-min"), get_double(cfg, "rho-max"), per_octave);
}

json offsets_json(const std::vector<TorusOffset>& offs) {
  json arr = json::array();
  for (const auto& o : offs) arr.push_back(std::vector<double>(o.coords().begin(), o.coords().end()));
  return arr;
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

// --- commands --------------------------------------------------------------

void cmd_slice(const RunConfig& cfg, RunResult& r) {
  const SliceConfig sc(get_int(cfg, "d"), get_int(cfg, "k"));
  const double rho = get_double(cfg, "rho");
  const auto offs = parse_offsets(cfg, sc.k(), "zero");
  r.header["offsets"] = offsets_json(offs);
  r.table.columns = {"d", "k", "rho", "offset_index", "offset", "volume", "remainder"};
  const auto opts = slice_options(cfg);
  for (std::size_t i = 0; i < offs.size(); ++i) {
    const double v = slice_volume(sc, offs[i], rho, opts);
    r.table.add_row({std::int64_t{sc.d()}, std::int64_t{sc.k()}, rho, static_cast<std::int64_t>(i), offset_text(offs[i]), v,
                     v - unit_ball_volume(sc.d()) * std::pow(rho, sc.d())});
  }
}

std::vector<PanelStatistic> scan_panel(const RunConfig& cfg, const SliceConfig& sc, RunResult& r,
                                       std::vector<RemainderSample>* samples_out) {
  const auto grid = rho_grid(cfg);
  const auto offs = parse_offsets(cfg, sc.k(), "random:32");
  r.header["offsets"] = offsets_json(offs);
  auto samples = remainder_scan(sc, offs, grid, slice_options(cfg));
  auto stats = panel_statistics(samples, offs.size());
  if (samples_out) *samples_out = std::move(samples);
  Series s{"max |R| over offsets", {}, {}, true};
  for (const auto& p : stats) {
    s.x.push_back(p.rho);
    s.y.push_back(p.max_abs);
  }
  r.plot_series.push_back(std::move(s));
  r.plot_x = "rho";
  r.plot_y = "|R|";
  return stats;
}

void cmd_remainder_scan(const RunConfig& cfg, RunResult& r) {
  const SliceConfig sc(get_int(cfg, "d"), get_int(cfg, "k"));
  std::vector<RemainderSample> samples;
  scan_panel(cfg, sc, r, &samples);
  const std::size_t n_off = r.header["offsets"].size();
  r.table.columns = {"rho", "offset_index", "volume", "remainder"};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    r.table.add_row({samples[i].rho, static_cast<std::int64_t>(i % n_off), samples[i].volume, samples[i].remainder});
  }
  r.plot_title = "remainder scan d=" + std::to_string(sc.d()) + " k=" + std::to_string(sc.k());
}

void cmd_exponent_fit(const RunConfig& cfg, RunResult& r) {
  const SliceConfig sc(get_int(cfg, "d"), get_int(cfg, "k"));
  const auto stats = scan_panel(cfg, sc, r, nullptr);
  std::vector<double> rho, mag, rho_top, mag_top;
  for (const auto& p : stats) {
    rho.push_back(p.rho);
    mag.push_back(p.max_abs);
    if (p.rho >= stats.back().rho / 10.0) {
      rho_top.push_back(p.rho);
      mag_top.push_back(p.max_abs);
    }
  }
  const auto fit = fit_power_law(rho, mag);
  const auto up = upper_exponent(sc.d(), sc.k());
  const auto lo = sc.d() % 4 == 1 ? lower_exponent(sc.d(), sc.k(), 0.1) : lower_exponent(sc.d(), sc.k());
  std::optional<FixedSlopeFit> lfit;
  if (lo && rho_top.size() >= 3) lfit = fit_fixed_slope(rho_top, mag_top, lo->exponent);
  r.table.columns = {"d", "k", "n_rho", "n_offsets", "slope", "intercept", "r_squared", "upper_exponent", "upper_log_factor",
                     "upper_ok", "lower_exponent", "lower_c", "lower_c_least_squares", "lower_r_squared"};
  r.table.add_row({std::int64_t{sc.d()}, std::int64_t{sc.k()}, static_cast<std::int64_t>(stats.size()),
                   static_cast<std::int64_t>(r.header["offsets"].size()), fit.slope, fit.intercept, fit.r_squared, up.exponent,
                   up.log_factor, fit.slope <= up.exponent + 0.1, lo ? Cell(lo->exponent) : Cell(std::monostate{}),
                   lfit ? Cell(lfit->c_lower) : Cell(std::monostate{}), lfit ? Cell(lfit->c_least_squares) : Cell(std::monostate{}),
                   lfit ? Cell(lfit->r_squared) : Cell(std::monostate{})});
  Series line{"fit slope " + format_double(fit.slope).substr(0, 6), {rho.front(), rho.back()}, {}, false};
  for (double x : line.x) line.y.push_back(std::exp(fit.intercept) * std::pow(x, fit.slope));
  r.plot_series.push_back(std::move(line));
  r.plot_title = "exponent fit d=" + std::to_string(sc.d()) + " k=" + std::to_string(sc.k());
}

void cmd_poisson_check(const RunConfig& cfg, RunResult& r) {
  const SliceConfig sc(get_int(cfg, "d"), get_int(cfg, "k"));
  const double rho = get_double(cfg, "rho");
  const std::string eps_text = find(cfg, "eps") ? *find(cfg, "eps") : "auto";
  const double eps = eps_text == "auto" ? default_epsilon(sc, rho) : parse_double("eps", eps_text);
  const auto offs = parse_offsets(cfg, sc.k(), "zero");
  r.header["offsets"] = offsets_json(offs);
  r.header["eps"] = eps;
  const auto tp = make_poisson_truncation(sc, rho, eps, Sign::plus);
  const auto tm = make_poisson_truncation(sc, rho, eps, Sign::minus);
  r.table.columns = {"offset_index", "offset", "rho", "eps", "volume", "lower", "lower_tail", "upper", "upper_tail",
                     "max_freq_norm", "terms", "sandwich_ok"};
  const auto opts = slice_options(cfg);
  for (std::size_t i = 0; i < offs.size(); ++i) {
    const double s = slice_volume(sc, offs[i], rho, opts);
    const auto up = poisson_sum_approx(sc, offs[i], rho, eps, tp, Sign::plus);
    const auto lo = poisson_sum_approx(sc, offs[i], rho, eps, tm, Sign::minus);
    r.table.add_row({static_cast<std::int64_t>(i), offset_text(offs[i]), rho, eps, s, lo.value, lo.tail_bound, up.value,
                     up.tail_bound, up.max_freq_norm, static_cast<std::int64_t>(up.terms),
                     lo.value - lo.tail_bound <= s && s <= up.value + up.tail_bound});
  }
}

void cmd_fourier_coeff(const RunConfig& cfg, RunResult& r) {
  const SliceConfig sc(get_int(cfg, "d"), get_int(cfg, "k"));
  const double rho = get_double(cfg, "rho");
  std::vector<std::int64_t> gamma;
  for (const auto& g : split(require(cfg, "gamma"), ',')) gamma.push_back(parse_int("gamma", trim(g)));
  if (static_cast<int>(gamma.size()) != sc.k()) throw DomainError("--gamma: expected k = " + std::to_string(sc.k()) + " entries");
  QuadratureSpec quad;
  quad.seed = cfg.seed;
  if (const auto* b = find(cfg, "budget")) quad.point_budget = parse_double("budget", *b);
  const auto c = remainder_fourier_coeff(sc, rho, gamma, quad);
  double norm2 = 0.0;
  std::string gtext;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    norm2 += static_cast<double>(gamma[i] * gamma[i]);
    gtext += (i ? " " : "") + std::to_string(gamma[i]);
  }
  const double predicted = norm2 == 0.0 ? 0.0 : unit_ball_volume(sc.l()) * std::pow(rho, sc.d()) * chi_hat(sc, rho * std::sqrt(norm2));
  r.table.columns = {"d", "k", "rho", "gamma", "real", "imag", "predicted", "abs_error"};
  r.table.add_row({std::int64_t{sc.d()}, std::int64_t{sc.k()}, rho, gtext, c.real(), c.imag(), predicted, std::abs(c - predicted)});
}

void cmd_paraboloid(const RunConfig& cfg, RunResult& r) {
  const int d = get_int(cfg, "d");
  const int k = get_int(cfg, "k");
  std::vector<double> rhos;
  if (find(cfg, "rho")) {
    rhos.push_back(get_double(cfg, "rho"));
  } else {
    rhos = rho_grid(cfg);
  }
  r.table.columns = {"d", "k", "rho", "measure", "expansion_index", "asymptotic", "difference", "error_exponent",
                     "error_log_factor", "alt_error_exponent"};
  Series diff{"|P - asymptotic|", {}, {}, true};
  const auto opts = slice_options(cfg);
  for (double rho : rhos) {
    const double p = paraboloid_measure(ParaboloidQuery(d, k, rho), opts);
    if (rho > 1.0) {
      const auto a = paraboloid_asymptotic(d, k, rho);
      r.table.add_row({std::int64_t{d}, std::int64_t{k}, rho, p, std::int64_t{a.expansion_index}, a.value, p - a.value,
                       a.error_exponent, a.log_factor, opt_cell(a.alternative_error_exponent)});
      diff.x.push_back(rho);
      diff.y.push_back(std::fabs(p - a.value));
    } else {
      r.table.add_row({std::int64_t{d}, std::int64_t{k}, rho, p, std::monostate{}, std::monostate{}, std::monostate{},
                       std::monostate{}, std::monostate{}, std::monostate{}});
    }
  }
  r.plot_series.push_back(std::move(diff));
  r.plot_title = "paraboloid d=" + std::to_string(d) + " k=" + std::to_string(k);
  r.plot_x = "rho";
  r.plot_y = "|P - w E_n|";
}

void cmd_landau(const RunConfig& cfg, RunResult& r) {
  const LandauQuery q(get_int(cfg, "d"), get_double(cfg, "lambda"));
  r.table.columns = {"d", "lambda", "value", "via_paraboloid", "leading_h3"};
  const Cell via = q.d >= 3 ? Cell(landau_ids_via_paraboloid(q)) : Cell(std::monostate{});
  const Cell lead = q.d == 3 && q.lambda >= 1.0 ? Cell(landau_leading_h3(q.lambda)) : Cell(std::monostate{});
  r.table.add_row({std::int64_t{q.d}, q.lambda, landau_ids_direct(q), via, lead});
}

void cmd_verify(const RunConfig& cfg, RunResult& r) {
  const std::string suite = find(cfg, "suite") ? *find(cfg, "suite") : "identities";
  VerifyOptions vo;
  vo.threads = cfg.threads;
  vo.seed = cfg.seed;
  r.table.columns = {"suite", "check", "passed", "seconds", "detail"};
  for (const auto& c : run_suite(suite, vo)) {
    r.all_passed = r.all_passed && c.passed;
    r.table.add_row({suite, c.name, c.passed, c.seconds, c.detail});
  }
}

json config_echo(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.params) j[k] = v;
  return j;
}

}  // namespace

const char* to_string(Command c) noexcept {
  for (const auto& i : command_table()) {
    if (i.command == c) return i.name;
  }
  return "?";
}

RunResult execute(const RunConfig& cfg) {
  if (cfg.threads < 1) throw DomainError("--threads must be >= 1");
  const auto& allowed = info(cfg.command).flags;
  for (const auto& [key, value] : cfg.params) {
    if (key == "budget") continue;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* f) { return key == f; }) == allowed.end()) {
      throw DomainError(std::string(to_string(cfg.command)) + ": flag --" + key + " does not apply");
    }
  }
  RunResult r;
  r.header["tool"] = "slicecount";
  r.header["version"] = SLICECOUNT_VERSION;
  r.header["command"] = to_string(cfg.command);
  r.header["config"] = config_echo(cfg);
  r.header["seed"] = cfg.seed;
  r.header["threads"] = cfg.threads;
  switch (cfg.command) {
    case Command::slice: cmd_slice(cfg, r); break;
    case Command::remainder_scan: cmd_remainder_scan(cfg, r); break;
    case Command::exponent_fit: cmd_exponent_fit(cfg, r); break;
    case Command::poisson_check: cmd_poisson_check(cfg, r); break;
    case Command::fourier_coeff: cmd_fourier_coeff(cfg, r); break;
    case Command::paraboloid: cmd_paraboloid(cfg, r); break;
    case Command::landau: cmd_landau(cfg, r); break;
    case Command::verify: cmd_verify(cfg, r); break;
  }
  return r;
}

void write_result(std::ostream& out, const RunConfig& cfg, const RunResult& result) {
  if (cfg.output_format == OutputFormat::json) {
    out << to_json(result.header, result.table).dump(2) << '\n';
  } else {
    write_csv(out, result.header, result.table);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattices of affine planes in balls and paraboloids: remainders, Poisson bounds, Landau levels.", "slicecount"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SLICECOUNT_VERSION);

  RunConfig cfg;
  std::string format = "csv", plot, seed_text;
  std::map<std::string, std::string> raw;
  std::vector<std::pair<CLI::App*, Command>> subs;
  std::vector<CLI::Option*> param_opts;

  for (const auto& ci : command_table()) {
    auto* sub = app.add_subcommand(ci.name, ci.help);
    subs.emplace_back(sub, ci.command);
    for (const char* f : ci.flags) param_opts.push_back(sub->add_option(std::string("--") + f, raw[f]));
    param_opts.push_back(sub->add_option("--budget", raw["budget"], "lattice point budget"));
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--plot", plot, "write an SVG log-log chart to this path");
    sub->add_option("--seed", seed_text, "64-bit seed for generated offsets and samples");
    sub->add_option("--threads", cfg.threads, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (auto& [sub, cmd] : subs) {
    if (sub->parsed()) cfg.command = cmd;
  }
  for (auto* opt : param_opts) {
    if (opt->count() > 0) {
      const std::string key = opt->get_name().substr(2);
      cfg.params[key] = raw[key];
    }
  }
  cfg.output_format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (!plot.empty()) cfg.plot = plot;

  try {
    if (!seed_text.empty()) {
      std::size_t pos = 0;
      try {
        cfg.seed = std::stoull(seed_text, &pos, 0);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != seed_text.size() || seed_text[0] == '-') throw DomainError("--seed: not a 64-bit unsigned integer");
    }
    const RunResult result = execute(cfg);
    write_result(out, cfg, result);
    if (cfg.plot) {
      if (result.plot_series.empty()) {
        err << "note: " << to_string(cfg.command) << " has no series to plot; --plot ignored\n";
      } else if (!write_loglog_svg(*cfg.plot, result.plot_title, result.plot_x, result.plot_y, result.plot_series)) {
        err << "warning: could not write plot to " << *cfg.plot << '\n';
      }
    }
    if (!result.all_passed) {
      err << "verify: some checks failed\n";
      return 1;
    }
    return 0;
  } catch (const DomainError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: resource budget exhausted: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace slicecount::cli
