#pragma once

#include <stdexcept>
#include <string>

namespace padicsum {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial text/JSON, or a coefficient outside Z[1/p].
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, unsigned long long required,
                 unsigned long long budget)
      : Error(what + ": requires " + std::to_string(required) +
              " evaluations, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  unsigned long long required() const noexcept { return required_; }
  unsigned long long budget() const noexcept { return budget_; }

 private:
  unsigned long long required_;
  unsigned long long budget_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A runtime-asserted mathematical claim failed. Should be unreachable.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace padicsum
