#pragma once

// Self-checks shared by the command-line `verify` command and the
// acceptance test binary.
//
//   identities  fast invariants of every module (seconds)
//   acceptance  the ten pinned acceptance criteria (about a minute)

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace slicecount {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  int threads = 1;
  std::uint64_t seed = 0x5eed;
};

struct NamedCheck {
  std::string name;
  std::function<CheckResult(const VerifyOptions&)> run;
};

std::vector<NamedCheck> identity_checks();
std::vector<NamedCheck> acceptance_checks();

std::vector<std::string> suite_names();

/// Runs every check of a suite; exceptions inside a check turn into a
/// failed result. Throws DomainError for an unknown suite name.
std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& options = {});

}  // namespace slicecount
