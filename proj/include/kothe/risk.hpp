#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "kothe/report.hpp"
#include "kothe/space.hpp"

namespace kothe {

namespace riskm {

/// Average value-at-risk at level t in (0,1]: inf_s { s + E[u - s]^+ / t }.
struct AVaR {
  double level;
  bool operator==(const AVaR&) const = default;
};

/// (1/theta) log E exp(theta u).
struct Entropic {
  double theta;
  bool operator==(const Entropic&) const = default;
};

struct Custom {
  std::string name;
  std::function<double(const FiniteProbSpace&, const Rv&)> evaluate;
  /// Optional density d with rho(v) >= rho(u) + E[d (v - u)]; finite differences otherwise.
  std::function<Rv(const FiniteProbSpace&, const Rv&)> subgradient;
  bool law_invariant = false;
  bool operator==(const Custom& other) const { return name == other.name; }
};

}  // namespace riskm

/// A convex risk measure: convex, nondecreasing, rho(0) = 0, rho(u + c) = rho(u) + c.
class RiskMeasureSpec {
 public:
  using Kind = std::variant<riskm::AVaR, riskm::Entropic, riskm::Custom>;

  RiskMeasureSpec(Kind kind);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, RiskMeasureSpec> &&
             !std::is_same_v<std::remove_cvref_t<T>, Kind> && std::is_constructible_v<Kind, T &&>)
  RiskMeasureSpec(T&& alternative)  // NOLINT(google-explicit-constructor)
      : RiskMeasureSpec(Kind(std::forward<T>(alternative))) {}

  static RiskMeasureSpec avar(double level) { return riskm::AVaR{level}; }
  static RiskMeasureSpec entropic(double theta) { return riskm::Entropic{theta}; }

  const Kind& kind() const { return kind_; }
  std::string name() const;
  bool law_invariant() const;

  bool operator==(const RiskMeasureSpec&) const = default;

 private:
  Kind kind_;
};

double evaluate_risk(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& u);

/// A density d in the subdifferential of rho at u.
Rv risk_subgradient(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& u);

/// inf{beta > 0 : rho(|u|/beta) <= 1}.
double risk_norm(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& u);

struct PenaltyResult {
  double value = 0.0;  // +inf when unbounded
  bool bounded = true;
  Rv maximizer;        // best xi found (bounded case)
  Rv ray;              // direction along which the supremand grows linearly (unbounded case)
};

/// alpha(y) = sup over xi >= 0 of E[xi y] - rho(xi), for y >= 0.
///
/// The supremum is taken over boxes [0,c]^N with c doubled until the optimal value stalls
/// (finite) or grows at least linearly over two successive doublings along the maximizer's
/// ray (+inf).
PenaltyResult penalty(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& y);

struct RiskDualNorm {
  double inf_form = 0.0;      // inf_beta { beta alpha(|y|/beta) + beta }
  double polar = 0.0;         // sup { E[u y] : ||u||_rho <= 1 } by direct optimization
  double penalty_norm = 0.0;  // ||y||_alpha = inf{beta : alpha(|y|/beta) <= 1}
};

/// Dual norm of the risk-measure norm. Throws ConvergenceError when the inf-form and the
/// direct polar disagree by more than `agreement_tol` (relative to max(1, value)).
RiskDualNorm risk_dual_norm(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& y,
                            double agreement_tol = 1e-6);

/// ||y||_alpha alone.
double penalty_norm(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& y);

/// Randomized verification of rho(0)=0, convexity, monotonicity, translation invariance and
/// decay along shrinking supports.
CheckReport check_risk_axioms(const FiniteProbSpace& space, const RiskMeasureSpec& rho, int trials,
                              std::uint64_t seed = 1, double tol = 1e-9);

}  // namespace kothe
