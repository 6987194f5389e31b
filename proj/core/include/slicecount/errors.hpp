#pragma once

#include <stdexcept>
#include <string>

namespace slicecount {

// Argument outside an operation's domain (pole, negative radius, bad shape).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Lattice enumeration or quadrature would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure failed to reach its stated accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slicecount
