#include "slicecount/verify.hpp"

#include <gtest/gtest.h>

#include "slicecount/errors.hpp"

namespace slicecount {
namespace {

TEST(Verify, IdentitiesSuitePasses) {
  const auto results = run_suite("identities");
  EXPECT_EQ(results.size(), identity_checks().size());
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

TEST(Verify, AcceptanceSuiteListsEveryCriterion) {
  const auto checks = acceptance_checks();
  EXPECT_EQ(checks.size(), 10u);
}

TEST(Verify, UnknownSuite) { EXPECT_THROW(run_suite("nope"), DomainError); }

}  // namespace
}  // namespace slicecount
