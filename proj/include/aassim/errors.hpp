#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aassim {

/// Thrown when an exhaustive computation would exceed its configured work
/// budget. Carries the figure that tripped the guard so callers can report
/// how far over budget the request was.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(double required, double limit, const std::string& what_arg)
      : std::runtime_error("BudgetExceeded: " + what_arg + " (required " +
                           std::to_string(required) + ", limit " +
                           std::to_string(limit) + ")"),
        required_(required),
        limit_(limit) {}

  double required() const { return required_; }
  double limit() const { return limit_; }

 private:
  double required_;
  double limit_;
};

struct ValidationIssue {
  std::string code;     // stable machine-readable tag, e.g. "NotMonotone"
  std::string message;  // human-readable diagnostic
};

/// Outcome of a validation pass: empty `errors` means the value is valid.
/// `notices` carry non-fatal observations.
struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> notices;

  bool ok() const { return errors.empty(); }

  const ValidationIssue& first_error() const { return errors.front(); }

  void fail(std::string code, std::string message) {
    errors.push_back({std::move(code), std::move(message)});
  }
  void notice(std::string code, std::string message) {
    notices.push_back({std::move(code), std::move(message)});
  }
};

}  // namespace aassim
