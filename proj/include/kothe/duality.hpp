#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "kothe/norms.hpp"

namespace kothe {

enum class PolarMethod { Comonotone, Ellipsoid, Enumeration };

std::string to_string(PolarMethod method);

/// Polar seminorm value sup{E[u y] : p(u) <= 1} together with the maximizer that attains it.
struct PolarResult {
  double value = 0.0;
  Rv maximizer;
  PolarMethod method = PolarMethod::Ellipsoid;
  double upper_bound = 0.0;  // smallest certified upper bound available
  double gap = 0.0;          // upper_bound - value, clamped at 0
  bool converged = true;
};

struct PolarOptions {
  bool comonotone = true;    // equal-weight spaces with rearrangement-invariant specs only
  bool general = true;
  bool enumeration = false;  // per-ordering search, at most 6 active atoms
  int max_iterations = 60000;
  double rel_tol = 1e-10;
};

/// Numerical polar by cutting planes. The search runs over |u| aligned with sign(y) (optimal by
/// solidity) inside the box |u_i| <= 1/p(e_i):
///  - comonotone: adds the ordering constraints u nonincreasing along decreasing |y|
///    (exact for rearrangement-invariant p on equal-weight spaces);
///  - ellipsoid: the unrestricted problem;
///  - enumeration: one ordered cone per permutation of the active atoms.
/// The best value is returned; the certificate combines the solvers' bounds and, when known, the
/// closed form.
PolarResult polar(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& y,
                  const PolarOptions& options = {});

/// Closed-form polar where one is known: L^p -> L^q, Marcinkiewicz <-> Lorentz (equal-weight
/// spaces), Luxemburg -> Amemiya formula, AVaR norm -> max(t max|y|, E|y|).
std::optional<double> polar_closed_form(const FiniteProbSpace& space, const SeminormSpec& spec,
                                        const Rv& y);

/// p° as a gauge with value and subgradient, closed form when available and numerical otherwise.
struct Gauge {
  std::function<double(const Rv&)> value;
  std::function<Rv(const Rv&)> subgradient;  // density
};
Gauge polar_gauge(const FiniteProbSpace& space, const SeminormSpec& spec);

struct HolderCheck {
  double pairing = 0.0;
  double norm = 0.0;
  double polar = 0.0;
  double slack = 0.0;  // pairing - norm * polar
  bool holds = true;
};

HolderCheck verify_holder(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& u,
                          const Rv& y, double tol = 1e-8);

struct BipolarReport {
  double norm = 0.0;
  double bipolar = 0.0;
  double rel_gap = 0.0;  // |p(u) - p°°(u)| / max(1, p(u))
  bool converged = true;
};

/// p°°(u) = sup{E[u y] : p°(y) <= 1}, with p° itself computed by `polar`, compared to p(u).
BipolarReport verify_bipolar(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& u,
                             const PolarOptions& inner = {});

/// Musielak-Orlicz family, risk measure, or (Phi, r) for a generalized Orlicz space.
struct GenOrliczPair {
  YoungFunction phi;
  SeminormSpec r;
};
using ModularSpec = std::variant<MusielakFamily, RiskMeasureSpec, GenOrliczPair>;

struct SandwichReport {
  double conjugate_norm = 0.0;  // ||y||_{H*}
  double polar = 0.0;           // p°(y)
  double ratio = 0.0;           // polar / conjugate_norm (1 when both vanish)
  bool lower_holds = true;      // conjugate_norm <= polar + slack
  bool upper_holds = true;      // polar <= 2 conjugate_norm + slack
};

SandwichReport verify_sandwich(const FiniteProbSpace& space, const ModularSpec& h, const Rv& y,
                               double slack = 1e-6);

/// The seminorm generated by the Luxemburg construction on the given modular.
SeminormSpec modular_seminorm(const ModularSpec& h);

/// E[|u| |y|].
double rho_m(const FiniteProbSpace& space, const Rv& u, const Rv& y);

/// Density d with f(u) = E[d u] for a linear functional f, by d_i = f(e_i) / P_i.
Rv functional_density(const FiniteProbSpace& space, const std::function<double(const Rv&)>& f);

struct SingularPartReport {
  std::string statement;
  std::size_t dual_dimension = 0;     // dimension of the dual of R^N
  std::size_t density_dimension = 0;  // dimension spanned by densities
  std::size_t singular_dimension = 0; // always 0
  int trials = 0;
  double max_reconstruction_error = 0.0;
};

/// Every linear functional on a finite space is integration against a density, so the purely
/// finitely additive and (L^inf)-orthogonal parts of the dual vanish. Checks this on random
/// functionals.
SingularPartReport singular_part_report(const FiniteProbSpace& space, int trials = 100,
                                        std::uint64_t seed = 1);

}  // namespace kothe
