#include "kothe/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "kothe/optim.hpp"
#include "kothe/rearrange.hpp"
#include "internal.hpp"

namespace kothe {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

using GaugeValue = std::function<double(const Rv&)>;
using GaugeSubgradient = std::function<Rv(const Rv&)>;

struct SupOutcome {
  double value = 0.0;
  double upper_bound = kInf;
  Rv maximizer;
  bool converged = false;
};

/// sup{E[u target] : gauge(u) <= 1} restricted to u_i = sign(target_i) x_i with x in the box
/// [0, bound] and, when `order` is given, x nonincreasing along it (indices into `active`).
SupOutcome solve_sup(const FiniteProbSpace& space, const Rv& target,
                     const std::vector<std::size_t>& active, const std::vector<double>& bound,
                     const GaugeValue& gauge, const GaugeSubgradient& gauge_sub,
                     const std::vector<std::size_t>* order, int max_iterations, double rel_tol,
                     std::optional<double> known_upper = std::nullopt) {
  const std::size_t n = active.size();
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = space.prob(active[k]) * std::abs(target[active[k]]);
  auto embed = [&](std::span<const double> x) {
    Rv u = Rv::zeros(space.size());
    for (std::size_t k = 0; k < n; ++k) u[active[k]] = sign(target[active[k]]) * x[k];
    return u;
  };
  auto objective = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += w[k] * x[k];
    return s;
  };

  auto oracle = [&](std::span<const double> x) {
    optim::Cut cut;
    cut.normal.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (x[k] < 0.0) {
        cut.normal[k] = -1.0;
        return cut;
      }
      if (x[k] > bound[k]) {
        cut.normal[k] = 1.0;
        cut.rhs = bound[k];
        return cut;
      }
    }
    if (order) {
      for (std::size_t j = 0; j + 1 < order->size(); ++j) {
        const std::size_t a = (*order)[j], b = (*order)[j + 1];
        if (x[b] > x[a]) {
          cut.normal[b] = 1.0;
          cut.normal[a] = -1.0;
          return cut;
        }
      }
    }
    const Rv u = embed(x);
    const double g = gauge(u);
    if (g > 0.0 && std::isfinite(g)) {
      cut.candidate_value = -objective(x) / g;
      cut.candidate.resize(n);
      for (std::size_t k = 0; k < n; ++k) cut.candidate[k] = x[k] / g;
    }
    if (g > 1.0) {
      const Rv d = gauge_sub(u);
      for (std::size_t k = 0; k < n; ++k)
        cut.normal[k] = space.prob(active[k]) * d[active[k]] * sign(target[active[k]]);
      cut.rhs = 1.0;
      return cut;
    }
    cut.feasible = true;
    cut.value = -objective(x);
    for (std::size_t k = 0; k < n; ++k) cut.normal[k] = -w[k];
    return cut;
  };

  optim::EllipsoidOptions opts;
  opts.max_iterations = max_iterations;
  opts.rel_tol = rel_tol;
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) scale += w[k] * bound[k];
  opts.abs_tol = 1e-15 * scale;
  opts.linear_objective = std::vector<double>(n);
  for (std::size_t k = 0; k < n; ++k) (*opts.linear_objective)[k] = -w[k];
  if (known_upper) opts.known_lower_bound = -*known_upper;

  std::vector<double> center(n), radii(n);
  const double spread = std::sqrt(static_cast<double>(n)) * (1.0 + 1e-9);
  for (std::size_t k = 0; k < n; ++k) {
    center[k] = 0.5 * bound[k];
    radii[k] = 0.5 * bound[k] * spread;
  }
  auto res = optim::ellipsoid_minimize(oracle, center, radii, opts);

  SupOutcome out;
  out.value = std::isfinite(res.value) ? -res.value : 0.0;
  out.upper_bound = -res.lower_bound;
  out.maximizer = std::isfinite(res.value) ? embed(res.argmin) : Rv::zeros(space.size());
  out.converged = res.converged;
  return out;
}

/// Sorts active-index positions by decreasing |target|.
std::vector<std::size_t> comonotone_order(const Rv& target, const std::vector<std::size_t>& active) {
  std::vector<std::size_t> order(active.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(target[active[a]]) > std::abs(target[active[b]]);
  });
  return order;
}

struct Problem {
  std::vector<std::size_t> active;
  std::vector<double> bound;
};

/// Active atoms and box bounds 1/gauge(e_i). A zero gauge on an active atom means +inf.
std::optional<Problem> setup(const FiniteProbSpace& space, const Rv& target, const GaugeValue& gauge) {
  Problem pb;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == 0.0) continue;
    Rv e = Rv::zeros(space.size());
    e[i] = 1.0;
    const double g = gauge(e);
    if (!(g > 0.0)) return std::nullopt;
    pb.active.push_back(i);
    pb.bound.push_back(1.0 / g);
  }
  return pb;
}

PolarResult run_polar(const FiniteProbSpace& space, const Rv& y, const GaugeValue& gauge,
                      const GaugeSubgradient& gauge_sub, bool comonotone_valid,
                      const PolarOptions& options, std::optional<double> closed,
                      std::optional<double> known_upper = std::nullopt) {
  PolarResult out;
  out.maximizer = Rv::zeros(space.size());
  auto pb = setup(space, y, gauge);
  if (!pb) {
    out.value = out.upper_bound = kInf;
    return out;
  }
  if (pb->active.empty()) {
    out.method = comonotone_valid ? PolarMethod::Comonotone : PolarMethod::Ellipsoid;
    return out;
  }
  if (pb->active.size() == 1) {
    const std::size_t i = pb->active[0];
    out.value = out.upper_bound = space.prob(i) * std::abs(y[i]) * pb->bound[0];
    out.maximizer[i] = sign(y[i]) * pb->bound[0];
    out.method = comonotone_valid ? PolarMethod::Comonotone : PolarMethod::Ellipsoid;
    return out;
  }

  double best = -kInf, upper = kInf;
  bool any_converged = false;
  auto consider = [&](const SupOutcome& r, PolarMethod m, bool certifies) {
    if (r.value > best) {
      best = r.value;
      out.maximizer = r.maximizer;
      out.method = m;
    }
    if (certifies) upper = std::min(upper, r.upper_bound);
    any_converged = any_converged || r.converged;
  };

  const std::size_t n = pb->active.size();
  if (options.comonotone && comonotone_valid) {
    const auto order = comonotone_order(y, pb->active);
    consider(solve_sup(space, y, pb->active, pb->bound, gauge, gauge_sub, &order,
                       options.max_iterations, options.rel_tol, known_upper),
             PolarMethod::Comonotone, true);
  }
  if (options.general) {
    consider(solve_sup(space, y, pb->active, pb->bound, gauge, gauge_sub, nullptr,
                       options.max_iterations, options.rel_tol, known_upper),
             PolarMethod::Ellipsoid, true);
  }
  if (options.enumeration) {
    if (n > 6) throw DomainError("enumeration is limited to 6 active atoms");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double cone_upper = -kInf;
    bool all_converged = true;
    do {
      const SupOutcome r = solve_sup(space, y, pb->active, pb->bound, gauge, gauge_sub, &perm,
                                     options.max_iterations, options.rel_tol, known_upper);
      consider(r, PolarMethod::Enumeration, false);
      cone_upper = std::max(cone_upper, r.upper_bound);
      all_converged = all_converged && r.converged;
    } while (std::next_permutation(perm.begin(), perm.end()));
    upper = std::min(upper, cone_upper);
    any_converged = any_converged || all_converged;
  }
  if (closed) upper = std::min(upper, *closed);
  out.value = best;
  out.upper_bound = std::max(upper, best);
  out.gap = out.upper_bound - best;
  const double tol = std::max(1e-12, 1e-8 * std::abs(best));
  out.converged = any_converged || out.gap <= tol;
  return out;
}

/// The AVaR norm is max over the densities 0 <= d <= 1/t with E d = 1 of E[d |u|], so its polar is
/// the smallest lambda with |y| <= lambda d for such a d.
double avar_norm_polar(const FiniteProbSpace& space, const Rv& y, double t) {
  return std::max(t * y.max_abs(), lp_norm(space, y, 1.0));
}

Rv avar_norm_polar_subgradient(const FiniteProbSpace& space, const Rv& y, double t) {
  Rv g = Rv::zeros(y.size());
  if (t * y.max_abs() >= lp_norm(space, y, 1.0)) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
      if (std::abs(y[i]) > std::abs(y[best])) best = i;
    g[best] = sign(y[best]) * t / space.prob(best);
  } else {
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = sign(y[i]);
  }
  return g;
}

bool comonotone_ok(const FiniteProbSpace& space, const SeminormSpec& spec) {
  return space.is_uniform() && spec.rearrangement_invariant();
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string to_string(PolarMethod method) {
  switch (method) {
    case PolarMethod::Comonotone:
      return "comonotone";
    case PolarMethod::Ellipsoid:
      return "ellipsoid";
    case PolarMethod::Enumeration:
      return "enumeration";
  }
  return "unknown";
}

std::optional<double> polar_closed_form(const FiniteProbSpace& space, const SeminormSpec& spec,
                                        const Rv& y) {
  require_on(space, y);
  if (const auto* s = std::get_if<seminorm::Lp>(&spec.kind())) {
    const double q = s->p == 1.0 ? kInf : (std::isinf(s->p) ? 1.0 : s->p / (s->p - 1.0));
    return lp_norm(space, y, q);
  }
  if (const auto* s = std::get_if<seminorm::Marcinkiewicz>(&spec.kind()))
    if (space.is_uniform()) return lorentz_norm(space, y, s->phi);
  if (const auto* s = std::get_if<seminorm::Lorentz>(&spec.kind()))
    if (space.is_uniform()) return marcinkiewicz_norm(space, y, s->phi);
  if (const auto* s = std::get_if<seminorm::Luxemburg>(&spec.kind()))
    return amemiya_dual_norm(space, y, s->family);
  if (const auto* s = std::get_if<seminorm::RiskNorm>(&spec.kind()))
    if (const auto* a = std::get_if<riskm::AVaR>(&s->rho.kind()))
      return avar_norm_polar(space, y, a->level);
  return std::nullopt;
}

PolarResult polar(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& y,
                  const PolarOptions& options) {
  require_on(space, y);
  return run_polar(
      space, y, [&](const Rv& u) { return seminorm_value(space, spec, u); },
      [&](const Rv& u) { return seminorm_subgradient(space, spec, u); }, comonotone_ok(space, spec),
      options, polar_closed_form(space, spec, y));
}

Gauge polar_gauge(const FiniteProbSpace& space, const SeminormSpec& spec) {
  return detail::polar_gauge_with(space, spec, PolarOptions{});
}

Gauge detail::polar_gauge_with(const FiniteProbSpace& space, const SeminormSpec& spec,
                               const PolarOptions& options) {
  if (const auto* s = std::get_if<seminorm::Lp>(&spec.kind())) {
    const double q = s->p == 1.0 ? kInf : (std::isinf(s->p) ? 1.0 : s->p / (s->p - 1.0));
    return {[space, q](const Rv& y) { return lp_norm(space, y, q); },
            [space, q](const Rv& y) { return seminorm_subgradient(space, SeminormSpec::lp(q), y); }};
  }
  if (space.is_uniform()) {
    if (const auto* s = std::get_if<seminorm::Marcinkiewicz>(&spec.kind())) {
      const SeminormSpec dual = SeminormSpec::lorentz(s->phi);
      return {[space, dual](const Rv& y) { return seminorm_value(space, dual, y); },
              [space, dual](const Rv& y) { return seminorm_subgradient(space, dual, y); }};
    }
    if (const auto* s = std::get_if<seminorm::Lorentz>(&spec.kind())) {
      const SeminormSpec dual = SeminormSpec::marcinkiewicz(s->phi);
      return {[space, dual](const Rv& y) { return seminorm_value(space, dual, y); },
              [space, dual](const Rv& y) { return seminorm_subgradient(space, dual, y); }};
    }
  }
  if (const auto* s = std::get_if<seminorm::RiskNorm>(&spec.kind())) {
    if (const auto* a = std::get_if<riskm::AVaR>(&s->rho.kind())) {
      const double t = a->level;
      return {[space, t](const Rv& y) { return avar_norm_polar(space, y, t); },
              [space, t](const Rv& y) { return avar_norm_polar_subgradient(space, y, t); }};
    }
  }
  if (const auto* s = std::get_if<seminorm::Luxemburg>(&spec.kind())) {
    const MusielakFamily family = s->family;
    const MusielakFamily conj = family.conjugate();
    bool smooth = true;
    for (const auto& f : conj.functions()) smooth = smooth && !std::isfinite(f.domain_bound());
    if (smooth) {
      // At the optimal beta, u = Phi*'(|y|/beta) sign(y) attains the Amemiya value with E Phi(|u|) = 1.
      return {[space, family](const Rv& y) { return amemiya_dual_norm(space, y, family); },
              [space, family, conj](const Rv& y) {
                const auto m = detail::amemiya(space, y, family);
                Rv g = Rv::zeros(y.size());
                if (m.beta == 0.0) return g;
                for (std::size_t i = 0; i < y.size(); ++i)
                  g[i] = sign(y[i]) * derivative(conj[i], std::abs(y[i]) / m.beta);
                return g;
              }};
    }
  }
  return {[space, spec, options](const Rv& y) { return polar(space, spec, y, options).value; },
          [space, spec, options](const Rv& y) { return polar(space, spec, y, options).maximizer; }};
}

HolderCheck verify_holder(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& u,
                          const Rv& y, double tol) {
  HolderCheck out;
  out.pairing = pairing(space, u, y);
  out.norm = seminorm_value(space, spec, u);
  out.polar = polar(space, spec, y).value;
  out.slack = out.pairing - out.norm * out.polar;
  out.holds = out.slack <= tol;
  return out;
}

BipolarReport verify_bipolar(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& u,
                             const PolarOptions& inner) {
  require_on(space, u);
  BipolarReport out;
  out.norm = seminorm_value(space, spec, u);
  if (u.max_abs() == 0.0) return out;
  const Gauge dual = detail::polar_gauge_with(space, spec, inner);
  // p°° <= p holds by Hölder; a normalized subgradient of p at u witnesses the reverse.
  const Rv d = seminorm_subgradient(space, spec, u);
  const double gd = dual.value(d);
  if (gd > 0.0 && std::isfinite(gd)) {
    const double witness = pairing(space, u, d) / gd;
    if (std::abs(witness - out.norm) <= 1e-9 * std::max(1.0, out.norm)) {
      out.bipolar = witness;
      out.rel_gap = std::abs(out.norm - witness) / std::max(1.0, out.norm);
      return out;
    }
  }
  PolarOptions outer;
  const PolarResult r = run_polar(space, u, dual.value, dual.subgradient, comonotone_ok(space, spec),
                                  outer, std::nullopt, out.norm);
  out.bipolar = r.value;
  out.rel_gap = std::abs(out.norm - out.bipolar) / std::max(1.0, out.norm);
  out.converged = r.converged || out.rel_gap <= 1e-8;
  return out;
}

SeminormSpec modular_seminorm(const ModularSpec& h) {
  return std::visit(overloaded{
                        [](const MusielakFamily& f) { return SeminormSpec::luxemburg(f); },
                        [](const RiskMeasureSpec& rho) { return SeminormSpec::risk(rho); },
                        [](const GenOrliczPair& g) { return SeminormSpec::gen_orlicz(g.phi, g.r); },
                    },
                    h);
}

SandwichReport verify_sandwich(const FiniteProbSpace& space, const ModularSpec& h, const Rv& y,
                               double slack) {
  require_on(space, y);
  SandwichReport out;
  out.conjugate_norm = std::visit(
      overloaded{
          [&](const MusielakFamily& f) { return luxemburg_norm(space, y, f.conjugate()); },
          [&](const RiskMeasureSpec& rho) { return penalty_norm(space, rho, y); },
          [&](const GenOrliczPair& g) { return gen_orlicz_dual_norm(space, y, g.phi, g.r).max_form; },
      },
      h);
  out.polar = polar(space, modular_seminorm(h), y).value;
  out.ratio = out.conjugate_norm == 0.0 && out.polar == 0.0 ? 1.0 : out.polar / out.conjugate_norm;
  out.lower_holds = out.conjugate_norm <= out.polar + slack;
  out.upper_holds = out.polar <= 2.0 * out.conjugate_norm + slack;
  return out;
}

double rho_m(const FiniteProbSpace& space, const Rv& u, const Rv& y) {
  require_on(space, u);
  require_on(space, y);
  return pairing(space, u.abs(), y.abs());
}

Rv functional_density(const FiniteProbSpace& space, const std::function<double(const Rv&)>& f) {
  std::vector<double> d(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    Rv e = Rv::zeros(space.size());
    e[i] = 1.0;
    d[i] = f(e) / space.prob(i);
  }
  return Rv(std::move(d));
}

SingularPartReport singular_part_report(const FiniteProbSpace& space, int trials, std::uint64_t seed) {
  SingularPartReport out;
  const std::size_t n = space.size();
  out.statement =
      "On a finite probability space every linear functional f satisfies f(u) = E[d u] with "
      "d_i = f(e_i) / P_i; the dual of R^" +
      std::to_string(n) +
      " is spanned by densities, so the purely finitely additive part and the part vanishing on "
      "bounded variables are both zero.";
  out.dual_dimension = n;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (space.prob(i) > 0.0) ++rank;
  out.density_dimension = rank;
  out.singular_dimension = n - rank;
  out.trials = trials;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> a(n);
    for (double& x : a) x = normal(rng);
    auto f = [&](const Rv& u) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += a[i] * u[i];
      return s;
    };
    const Rv d = functional_density(space, f);
    std::vector<double> uv(n);
    for (double& x : uv) x = normal(rng);
    const Rv u(uv);
    const double err = std::abs(f(u) - pairing(space, d, u)) / std::max(1.0, std::abs(f(u)));
    out.max_reconstruction_error = std::max(out.max_reconstruction_error, err);
  }
  return out;
}

}  // namespace kothe
