#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsvft {

// Malformed input files, bad CLI arguments, schema violations.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated by the caller.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An edge cost exponent exceeded the configured cap, or a cost sum would
// leave the 64-bit budget. Never silently saturated.
class CostOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A combinatorial enumeration would exceed its configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invariant broken inside an engine; indicates a bug, not bad input.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Planning cannot reach the target yield. Carries the best yield achieved
// and the ids of the groups that limit it.
class PlanInfeasibleError : public std::runtime_error {
 public:
  PlanInfeasibleError(const std::string& msg, double best_yield,
                      std::vector<std::string> limiting_groups)
      : std::runtime_error(msg),
        best_yield(best_yield),
        limiting_groups(std::move(limiting_groups)) {}

  double best_yield = 0.0;
  std::vector<std::string> limiting_groups;
};

}  // namespace tsvft
