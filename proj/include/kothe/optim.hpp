#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kothe/numeric.hpp"

/// One-dimensional and small-dimensional convex solvers shared by the norm, risk and
/// duality modules.
namespace kothe::optim {

/// inf{beta > 0 : g(beta) <= 1} for nonincreasing g. Brackets geometrically from `start`,
/// then bisects to relative width `rel_tol`. Returns the feasible end of the final bracket,
/// +inf if no beta up to 2^300 * start is feasible, and 0 if every beta down to 2^-300 * start is.
double gauge_bisection(const std::function<double(double)>& g, double start, double rel_tol);

struct ScalarMinimum {
  double argmin;
  double value;
};

/// Golden-section search for a convex extended-valued f on [lo, hi].
ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double rel_tol);

/// Minimizes a convex extended-valued f over (0, inf). A finite point is located by doubling
/// from `start`, the bracket is grown until f increases on both ends, then refined by
/// golden-section. Returns value +inf if f is never finite.
ScalarMinimum minimize_on_positive_axis(const std::function<double(double)>& f, double start,
                                        double rel_tol);

/// Answer of a cutting-plane oracle at a query point x.
///
/// Feasibility cut: x is infeasible and every feasible point satisfies normal . z <= rhs.
/// Objective cut: x is feasible with objective `value`; `normal` is a subgradient.
/// Either kind may report an additional feasible `candidate` found by the oracle.
struct Cut {
  bool feasible = false;
  double value = kInf;
  std::vector<double> normal;
  double rhs = 0.0;
  std::optional<double> candidate_value;
  std::vector<double> candidate;
};

struct EllipsoidOptions {
  int max_iterations = 20000;
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  /// When the objective is linear (c . x), the minimum over the current ellipsoid gives a
  /// lower bound at every iteration, not only at feasible points.
  std::optional<std::vector<double>> linear_objective;
  /// Optional externally known lower bound; the search stops once the incumbent reaches it.
  std::optional<double> known_lower_bound;
};

struct EllipsoidResult {
  std::vector<double> argmin;
  double value = kInf;        // best feasible objective found
  double lower_bound = -kInf; // certified lower bound on the minimum over the start ellipsoid
  int iterations = 0;
  bool converged = false;
};

/// Deep-cut ellipsoid method for min f over a convex set, starting from the axis-aligned
/// ellipsoid {x : sum ((x_i - c_i)/r_i)^2 <= 1}, which must contain a minimizer.
EllipsoidResult ellipsoid_minimize(const std::function<Cut(std::span<const double>)>& oracle,
                                   std::vector<double> center, std::span<const double> radii,
                                   const EllipsoidOptions& options);

/// Central-difference gradient of f at x.
std::vector<double> finite_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                               std::span<const double> x);

}  // namespace kothe::optim
