#pragma once

// Command-line front end. Every command produces a Table plus a provenance
// header; the same record is rendered as CSV or JSON.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "svg.hpp"
#include "table.hpp"

namespace slicecount::cli {

enum class Command { slice, remainder_scan, exponent_fit, poisson_check, fourier_coeff, paraboloid, landau, verify };
enum class OutputFormat { csv, json };

const char* to_string(Command c) noexcept;

inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct RunConfig {
  Command command = Command::slice;
  std::map<std::string, std::string> params;  // flag name without dashes -> raw value
  OutputFormat output_format = OutputFormat::csv;
  std::optional<std::string> plot;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
};

struct RunResult {
  nlohmann::ordered_json header;
  Table table;
  bool all_passed = true;  // verify only
  std::vector<Series> plot_series;
  std::string plot_title, plot_x, plot_y;
};

// Throws DomainError for invalid or missing parameters, BudgetExceeded and
// NumericalError from the library.
RunResult execute(const RunConfig& cfg);

void write_result(std::ostream& out, const RunConfig& cfg, const RunResult& result);

// Exit status: 0 ok, 1 numerical failure (or failed verify checks),
// 2 invalid configuration, 3 resource budget exhausted.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slicecount::cli
