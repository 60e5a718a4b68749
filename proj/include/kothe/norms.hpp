#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "kothe/report.hpp"
#include "kothe/risk.hpp"
#include "kothe/space.hpp"
#include "kothe/young.hpp"

namespace kothe {

namespace concave {

/// t^a with a in (0,1].
struct PowerRoot {
  double a;
  bool operator==(const PowerRoot&) const = default;
};

/// Piecewise-linear interpolation of nodes (t, phi) from (0,0) to t = 1.
struct Tabulated {
  std::vector<double> t;
  std::vector<double> phi;
  bool operator==(const Tabulated&) const = default;
};

}  // namespace concave

/// Nonnegative, nondecreasing, concave phi on [0,1] with phi(0) = 0.
class PhiConcave {
 public:
  using Kind = std::variant<concave::PowerRoot, concave::Tabulated>;

  PhiConcave(Kind kind);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, PhiConcave> &&
             !std::is_same_v<std::remove_cvref_t<T>, Kind> && std::is_constructible_v<Kind, T &&>)
  PhiConcave(T&& alternative)  // NOLINT(google-explicit-constructor)
      : PhiConcave(Kind(std::forward<T>(alternative))) {}
  static PhiConcave power_root(double a) { return concave::PowerRoot{a}; }
  static PhiConcave tabulated(std::vector<double> t, std::vector<double> phi) {
    return concave::Tabulated{std::move(t), std::move(phi)};
  }

  double operator()(double t) const;
  const Kind& kind() const { return kind_; }
  std::string name() const;

  bool operator==(const PhiConcave&) const = default;

 private:
  Kind kind_;
};

class SeminormSpec;

namespace seminorm {

/// (E|u|^p)^(1/p); p = +inf gives max |u|.
struct Lp {
  double p;
  bool operator==(const Lp&) const = default;
};

/// inf{beta : E Phi(|u|/beta) <= 1} with one Young function per atom.
struct Luxemburg {
  MusielakFamily family;
  bool operator==(const Luxemburg&) const = default;
};

/// sup_t F_u(t) / phi(t), F_u the running integral of the decreasing rearrangement.
struct Marcinkiewicz {
  PhiConcave phi;
  bool operator==(const Marcinkiewicz&) const = default;
};

/// Stieltjes integral of q_u against phi.
struct Lorentz {
  PhiConcave phi;
  bool operator==(const Lorentz&) const = default;
};

/// inf{beta : rho(|u|/beta) <= 1}.
struct RiskNorm {
  RiskMeasureSpec rho;
  bool operator==(const RiskNorm&) const = default;
};

/// inf{beta : r(Phi(|u|/beta)) <= 1} for a finite-valued Young function and inner seminorm r.
struct GenOrlicz {
  YoungFunction phi;
  std::shared_ptr<const SeminormSpec> r;
  bool operator==(const GenOrlicz& other) const;
};

struct Custom {
  std::string name;
  std::function<double(const FiniteProbSpace&, const Rv&)> evaluate;
  /// Optional density d with E[d u] = p(u) and E[d v] <= p(v); finite differences otherwise.
  std::function<Rv(const FiniteProbSpace&, const Rv&)> subgradient;
  bool rearrangement_invariant = false;
  bool operator==(const Custom& other) const { return name == other.name; }
};

}  // namespace seminorm

/// A sublinear symmetric functional on random variables, described by family and parameters.
class SeminormSpec {
 public:
  using Kind = std::variant<seminorm::Lp, seminorm::Luxemburg, seminorm::Marcinkiewicz,
                            seminorm::Lorentz, seminorm::RiskNorm, seminorm::GenOrlicz,
                            seminorm::Custom>;

  SeminormSpec(Kind kind);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, SeminormSpec> &&
             !std::is_same_v<std::remove_cvref_t<T>, Kind> && std::is_constructible_v<Kind, T &&>)
  SeminormSpec(T&& alternative)  // NOLINT(google-explicit-constructor)
      : SeminormSpec(Kind(std::forward<T>(alternative))) {}

  static SeminormSpec lp(double p) { return seminorm::Lp{p}; }
  static SeminormSpec luxemburg(MusielakFamily family) { return seminorm::Luxemburg{std::move(family)}; }
  static SeminormSpec marcinkiewicz(PhiConcave phi) { return seminorm::Marcinkiewicz{std::move(phi)}; }
  static SeminormSpec lorentz(PhiConcave phi) { return seminorm::Lorentz{std::move(phi)}; }
  static SeminormSpec risk(RiskMeasureSpec rho) { return seminorm::RiskNorm{std::move(rho)}; }
  static SeminormSpec gen_orlicz(YoungFunction phi, SeminormSpec r);

  const Kind& kind() const { return kind_; }
  std::string name() const;

  /// Depends only on the distribution of |u|.
  bool rearrangement_invariant() const;

  bool operator==(const SeminormSpec&) const = default;

 private:
  Kind kind_;
};

/// A nonempty collection of seminorms generating a locally convex topology.
class NormFamily {
 public:
  explicit NormFamily(std::vector<SeminormSpec> members);
  const std::vector<SeminormSpec>& members() const { return members_; }

 private:
  std::vector<SeminormSpec> members_;
};

/// Evaluates any seminorm spec.
double seminorm_value(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& u);

/// A density d with E[d u] = p(u) and E[d v] <= p(v) for all v.
Rv seminorm_subgradient(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& u);

double lp_norm(const FiniteProbSpace& space, const Rv& u, double p);

double luxemburg_norm(const FiniteProbSpace& space, const Rv& u, const MusielakFamily& family);

/// inf_beta { beta E Phi*(|y|/beta) + beta }.
double amemiya_dual_norm(const FiniteProbSpace& space, const Rv& y, const MusielakFamily& family);

/// Supremum over t in (0,1] of F_u(t)/phi(t).
///
/// Between consecutive breakpoints of q_u, F_u is affine and phi concave, so F_u/phi is
/// quasiconvex there and peaks at an endpoint; the t -> 0 limit is dominated by the first
/// breakpoint because phi(t) >= (t/t_1) phi(t_1). Evaluating at breakpoints is exact.
double marcinkiewicz_norm(const FiniteProbSpace& space, const Rv& u, const PhiConcave& phi);

double lorentz_norm(const FiniteProbSpace& space, const Rv& y, const PhiConcave& phi);

/// Spot-checks r against the axioms before evaluating.
double gen_orlicz_norm(const FiniteProbSpace& space, const Rv& u, const YoungFunction& phi,
                       const SeminormSpec& r);

struct GenOrliczDual {
  double sum_form = 0.0;  // inf_v { E[v Phi*(|y|/v)] + r°(v) }
  double max_form = 0.0;  // inf_v max{ r°(v), E[v Phi*(|y|/v)] }
  double sum_gap = 0.0;   // certified optimality gaps
  double max_gap = 0.0;
  Rv sum_minimizer;
  Rv max_minimizer;
  bool converged = true;
};

/// Minimizes both dual objectives over v >= 0 with the perspective convention
/// v Phi*(y/v) = 0 at v = y = 0 and +inf at v = 0 < |y|.
GenOrliczDual gen_orlicz_dual_norm(const FiniteProbSpace& space, const Rv& y, const YoungFunction& phi,
                                   const SeminormSpec& r, int max_iterations = 100000);

/// Randomized axiom report: nonnegativity, symmetry, homogeneity, subadditivity, (A1) empirical
/// lower constant, (A2) empirical upper constant, (A3) monotonicity under domination, (A4)/(A5)
/// decay along nested shrinking supports, and finiteness on indicators (solid/decomposable).
CheckReport check_axioms(const FiniteProbSpace& space, const SeminormSpec& spec, int trials,
                         std::uint64_t seed = 1, double tol = 1e-9);

struct FundamentalFunctions {
  std::vector<double> t;      // achievable P(A), increasing
  std::vector<double> upper;  // sup{p(1_A) : P(A) <= t}
  std::vector<double> lower;  // inf{p(1_A) : P(A) >= t}
};

/// Exact subset enumeration for at most 20 atoms; otherwise requires an equal-weight space and
/// a rearrangement-invariant spec, where only |A| matters.
FundamentalFunctions fundamental_functions(const FiniteProbSpace& space, const SeminormSpec& spec);

std::vector<double> family_membership(const FiniteProbSpace& space, const Rv& u, const NormFamily& family);

/// max{E|u|, E[1_A |u|]/P(A)}: satisfies the conditional Jensen inequality on a two-atom space
/// without being rearrangement invariant.
SeminormSpec conditional_max_seminorm(const FiniteProbSpace& space, std::vector<std::size_t> atoms);

}  // namespace kothe
