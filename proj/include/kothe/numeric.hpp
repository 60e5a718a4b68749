#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace kothe {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerances shared by every module. Pass a modified copy to override per call.
struct NumericPolicy {
  double linear = 1e-12;        // linear identities, probability sums
  double optimization = 1e-8;   // results of iterative solvers
  double bisection_rel = 1e-12; // relative bracket width for gauge bisection
  double golden_rel = 1e-10;    // relative bracket width for golden-section
};

inline const NumericPolicy& default_policy() {
  static const NumericPolicy policy{};
  return policy;
}

/// Input violates a documented precondition (shape, range, domain).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value, double gap)
      : std::runtime_error(what), best_value_(best_value), gap_(gap) {}
  double best_value() const { return best_value_; }
  double gap() const { return gap_; }

 private:
  double best_value_;
  double gap_;
};

}  // namespace kothe
