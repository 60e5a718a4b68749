#pragma once

#include <vector>

#include "kothe/space.hpp"

namespace kothe {

/// Right-continuous step function on [0,1): value `values[k]` on [breakpoints[k], breakpoints[k+1]).
///
/// Quantile functions produced by `quantile` additionally have nonincreasing,
/// nonnegative plateau values.
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t plateaus() const { return values_.size(); }

  /// Value at t in [0,1); t = 1 returns the last plateau.
  double operator()(double t) const;

  bool is_nonincreasing() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// P(|u| > tau).
double distribution_fn(const FiniteProbSpace& space, const Rv& u, double tau);

/// Decreasing rearrangement q_u(t) = inf{tau : P(|u| > tau) <= t}, exact.
/// Equal values of |u| merge into one plateau.
StepFunction quantile(const FiniteProbSpace& space, const Rv& u);

/// F(t) = integral of q over [0,t], closed form.
double quantile_integral(const StepFunction& q, double t);

/// inf over s >= 0 of t*s + E[|u| - s]^+, evaluated on the kinks {0} U {|u_i|}.
/// The objective is convex and piecewise linear in s, so the candidate set is exhaustive.
double cvar_infimum(const FiniteProbSpace& space, const Rv& u, double t);

/// Integral of q_u * q_y over [0,1]. Only defined on equal-weight spaces, where it is the
/// supremum of E[(u o pi) y] over atom permutations pi.
double hardy_littlewood_sup(const FiniteProbSpace& space, const Rv& u, const Rv& y);

}  // namespace kothe
