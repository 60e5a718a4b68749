#include "kothe/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

#include "kothe/duality.hpp"
#include "kothe/optim.hpp"
#include "kothe/rearrange.hpp"
#include "internal.hpp"

namespace kothe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::string fmt_num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

void validate_concave(const PhiConcave::Kind& kind) {
  if (const auto* p = std::get_if<concave::PowerRoot>(&kind)) {
    if (!(p->a > 0.0 && p->a <= 1.0)) throw DomainError("power-root exponent must lie in (0,1]");
    return;
  }
  const auto& tab = std::get<concave::Tabulated>(kind);
  if (tab.t.empty() || tab.t.size() != tab.phi.size())
    throw DomainError("tabulated phi needs matching, nonempty t and phi columns");
  double prev_t = 0.0, prev_phi = 0.0, prev_slope = kInf;
  for (std::size_t k = 0; k < tab.t.size(); ++k) {
    if (k == 0 && tab.t[0] == 0.0) {
      if (tab.phi[0] != 0.0) throw DomainError("tabulated phi must vanish at 0");
      continue;
    }
    if (!(tab.t[k] > prev_t)) throw DomainError("tabulated phi nodes must increase");
    if (!(tab.phi[k] > 0.0) || tab.phi[k] < prev_phi)
      throw DomainError("tabulated phi must be positive and nondecreasing on (0,1]");
    const double slope = (tab.phi[k] - prev_phi) / (tab.t[k] - prev_t);
    if (slope > prev_slope * (1.0 + 1e-12)) throw DomainError("tabulated phi must be concave");
    prev_slope = slope;
    prev_t = tab.t[k];
    prev_phi = tab.phi[k];
  }
  if (std::abs(prev_t - 1.0) > 1e-12) throw DomainError("tabulated phi must end at t = 1");
}

double eval_gauge(const std::function<double(double)>& h, double start) {
  return optim::gauge_bisection(h, start, default_policy().bisection_rel);
}

/// s / E[s |u| / beta] with signs from u: the gauge subgradient from a modular subgradient.
Rv gauge_density(const FiniteProbSpace& space, const Rv& u, double beta, const std::vector<double>& s) {
  double scale = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) scale += space.prob(i) * s[i] * std::abs(u[i]);
  std::vector<double> g(u.size(), 0.0);
  if (!(scale > 0.0) || !std::isfinite(scale)) return Rv(std::move(g));
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = sign(u[i]) * beta * s[i] / scale;
  return Rv(std::move(g));
}

/// Density concentrated on one atom: sign(u_i) w / P_i at i.
Rv point_density(const FiniteProbSpace& space, const Rv& u, std::size_t i, double w) {
  Rv g = Rv::zeros(u.size());
  g[i] = sign(u[i]) * w / space.prob(i);
  return g;
}

double gen_orlicz_unchecked(const FiniteProbSpace& space, const Rv& u, const YoungFunction& phi,
                            const SeminormSpec& r) {
  const Rv a = u.abs();
  if (a.max_abs() == 0.0) return 0.0;
  std::vector<double> w(u.size());
  return eval_gauge(
      [&](double beta) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = evaluate(phi, a[i] / beta);
        return seminorm_value(space, r, Rv(w));
      },
      a.max_abs());
}

struct PlateauIndex {
  StepFunction q;
  std::vector<std::size_t> plateau_of;  // plateau index per atom (atoms with |u| = 0 may map past the end)
};

PlateauIndex plateaus(const FiniteProbSpace& space, const Rv& u) {
  PlateauIndex out{quantile(space, u), {}};
  const auto& vals = out.q.values();
  out.plateau_of.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    std::size_t k = 0;
    while (k + 1 < vals.size() && vals[k] != a) ++k;
    out.plateau_of[i] = k;
  }
  return out;
}

std::vector<std::size_t> top_atoms(const Rv& u, double threshold) {
  std::vector<std::size_t> atoms;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) >= threshold) atoms.push_back(i);
  return atoms;
}

}  // namespace

PhiConcave::PhiConcave(Kind kind) : kind_(std::move(kind)) { validate_concave(kind_); }

double PhiConcave::operator()(double t) const {
  if (t < 0.0 || t > 1.0 + 1e-12) throw DomainError("phi is defined on [0,1]");
  t = std::min(t, 1.0);
  if (const auto* p = std::get_if<concave::PowerRoot>(&kind_)) {
    if (p->a == 0.5) return std::sqrt(t);
    return std::pow(t, p->a);
  }
  const auto& tab = std::get<concave::Tabulated>(kind_);
  double prev_t = 0.0, prev_phi = 0.0;
  for (std::size_t k = 0; k < tab.t.size(); ++k) {
    if (t <= tab.t[k]) {
      if (tab.t[k] == prev_t) return tab.phi[k];
      return prev_phi + (tab.phi[k] - prev_phi) * (t - prev_t) / (tab.t[k] - prev_t);
    }
    prev_t = tab.t[k];
    prev_phi = tab.phi[k];
  }
  return tab.phi.back();
}

std::string PhiConcave::name() const {
  if (const auto* p = std::get_if<concave::PowerRoot>(&kind_)) {
    if (p->a == 0.5) return "sqrt";
    return "t^" + fmt_num(p->a);
  }
  return "tabulated(" + std::to_string(std::get<concave::Tabulated>(kind_).t.size()) + " nodes)";
}

bool seminorm::GenOrlicz::operator==(const GenOrlicz& other) const {
  if (!(phi == other.phi)) return false;
  if (r == other.r) return true;
  return r && other.r && *r == *other.r;
}

SeminormSpec::SeminormSpec(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const seminorm::Lp& s) {
                   if (!(s.p >= 1.0)) throw DomainError("L^p needs p >= 1");
                 },
                 [](const seminorm::Luxemburg& s) {
                   if (s.family.size() == 0) throw DomainError("Luxemburg norm needs a nonempty family");
                 },
                 [](const seminorm::Marcinkiewicz&) {},
                 [](const seminorm::Lorentz&) {},
                 [](const seminorm::RiskNorm&) {},
                 [](const seminorm::GenOrlicz& s) {
                   if (!s.r) throw DomainError("generalized Orlicz norm needs an inner seminorm");
                   if (std::isfinite(s.phi.domain_bound()) || std::isinf(evaluate(s.phi, 1.0)))
                     throw DomainError("generalized Orlicz norm needs a finite-valued Young function");
                 },
                 [](const seminorm::Custom& s) {
                   if (!s.evaluate) throw DomainError("custom seminorm needs an evaluator");
                 },
             },
             kind_);
}

SeminormSpec SeminormSpec::gen_orlicz(YoungFunction phi, SeminormSpec r) {
  return seminorm::GenOrlicz{std::move(phi), std::make_shared<const SeminormSpec>(std::move(r))};
}

std::string SeminormSpec::name() const {
  return std::visit(
      overloaded{
          [](const seminorm::Lp& s) {
            return std::isinf(s.p) ? std::string("lp(p=inf)") : "lp(p=" + fmt_num(s.p) + ")";
          },
          [](const seminorm::Luxemburg& s) {
            if (s.family.atom_independent()) return "luxemburg(" + s.family[0].name() + ")";
            return std::string("luxemburg(per-atom)");
          },
          [](const seminorm::Marcinkiewicz& s) { return "marcinkiewicz(" + s.phi.name() + ")"; },
          [](const seminorm::Lorentz& s) { return "lorentz(" + s.phi.name() + ")"; },
          [](const seminorm::RiskNorm& s) { return "risk(" + s.rho.name() + ")"; },
          [](const seminorm::GenOrlicz& s) {
            return "gen_orlicz(" + s.phi.name() + ", " + s.r->name() + ")";
          },
          [](const seminorm::Custom& s) { return "custom(" + s.name + ")"; },
      },
      kind_);
}

bool SeminormSpec::rearrangement_invariant() const {
  return std::visit(overloaded{
                        [](const seminorm::Lp&) { return true; },
                        [](const seminorm::Luxemburg& s) { return s.family.atom_independent(); },
                        [](const seminorm::Marcinkiewicz&) { return true; },
                        [](const seminorm::Lorentz&) { return true; },
                        [](const seminorm::RiskNorm& s) { return s.rho.law_invariant(); },
                        [](const seminorm::GenOrlicz& s) { return s.r->rearrangement_invariant(); },
                        [](const seminorm::Custom& s) { return s.rearrangement_invariant; },
                    },
                    kind_);
}

NormFamily::NormFamily(std::vector<SeminormSpec> members) : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("a norm family needs at least one seminorm");
}

double lp_norm(const FiniteProbSpace& space, const Rv& u, double p) {
  require_on(space, u);
  if (!(p >= 1.0)) throw DomainError("L^p needs p >= 1");
  const double top = u.max_abs();
  if (std::isinf(p) || top == 0.0) return top;
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < u.size(); ++i) acc += space.prob(i) * std::abs(u[i]);
    return acc;
  }
  for (std::size_t i = 0; i < u.size(); ++i) acc += space.prob(i) * std::pow(std::abs(u[i]) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

double luxemburg_norm(const FiniteProbSpace& space, const Rv& u, const MusielakFamily& family) {
  require_on(space, u);
  if (family.size() != space.size()) throw DomainError("family size differs from the number of atoms");
  const double top = u.max_abs();
  if (top == 0.0) return 0.0;
  return eval_gauge(
      [&](double beta) {
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
          const double v = evaluate(family[i], std::abs(u[i]) / beta);
          if (std::isinf(v)) return kInf;
          acc += space.prob(i) * v;
        }
        return acc;
      },
      top);
}

namespace detail {

AmemiyaMin amemiya(const FiniteProbSpace& space, const Rv& y, const MusielakFamily& family) {
  require_on(space, y);
  if (family.size() != space.size()) throw DomainError("family size differs from the number of atoms");
  const double top = y.max_abs();
  if (top == 0.0) return {0.0, 0.0};
  const MusielakFamily conj = family.conjugate();
  auto objective = [&](double beta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == 0.0) continue;
      const double v = evaluate(conj[i], std::abs(y[i]) / beta);
      if (std::isinf(v)) return kInf;
      acc += space.prob(i) * v;
    }
    return beta * acc + beta;
  };
  auto best = optim::minimize_on_positive_axis(objective, top, 1e-12);
  return {best.value, best.argmin};
}

}  // namespace detail

double amemiya_dual_norm(const FiniteProbSpace& space, const Rv& y, const MusielakFamily& family) {
  return detail::amemiya(space, y, family).value;
}

double marcinkiewicz_norm(const FiniteProbSpace& space, const Rv& u, const PhiConcave& phi) {
  require_on(space, u);
  if (u.max_abs() == 0.0) return 0.0;
  const StepFunction q = quantile(space, u);
  const auto& bp = q.breakpoints();
  double best = 0.0, running = 0.0;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    running += q.values()[k] * (bp[k + 1] - bp[k]);
    const double denom = phi(bp[k + 1]);
    if (!(denom > 0.0)) throw DomainError("phi vanishes at a positive t");
    // F(t) <= q(0) t with equality on the first plateau, which keeps phi(t) = t exact.
    const double cap = q.values()[0] * (bp[k + 1] / denom);
    best = std::max(best, k == 0 ? cap : std::min(running / denom, cap));
  }
  return best;
}

double lorentz_norm(const FiniteProbSpace& space, const Rv& y, const PhiConcave& phi) {
  require_on(space, y);
  if (y.max_abs() == 0.0) return 0.0;
  const StepFunction q = quantile(space, y);
  const auto& bp = q.breakpoints();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) acc += q.values()[k] * (phi(bp[k + 1]) - phi(bp[k]));
  return acc;
}

double gen_orlicz_norm(const FiniteProbSpace& space, const Rv& u, const YoungFunction& phi,
                       const SeminormSpec& r) {
  require_on(space, u);
  const SeminormSpec spec = SeminormSpec::gen_orlicz(phi, r);  // validates phi
  const CheckReport report = check_axioms(space, r, 20, 1, 1e-9);
  for (const char* name : {"nonnegativity", "symmetry", "homogeneity", "subadditivity", "A1", "A2",
                           "A3", "A4"}) {
    const PropertyCheck* c = report.find(name);
    if (c && !c->passed)
      throw DomainError("inner seminorm " + r.name() + " fails the " + name + " check");
  }
  return gen_orlicz_unchecked(space, u, phi, r);
}

double seminorm_value(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& u) {
  require_on(space, u);
  return std::visit(overloaded{
                        [&](const seminorm::Lp& s) { return lp_norm(space, u, s.p); },
                        [&](const seminorm::Luxemburg& s) { return luxemburg_norm(space, u, s.family); },
                        [&](const seminorm::Marcinkiewicz& s) { return marcinkiewicz_norm(space, u, s.phi); },
                        [&](const seminorm::Lorentz& s) { return lorentz_norm(space, u, s.phi); },
                        [&](const seminorm::RiskNorm& s) { return risk_norm(space, s.rho, u); },
                        [&](const seminorm::GenOrlicz& s) { return gen_orlicz_unchecked(space, u, s.phi, *s.r); },
                        [&](const seminorm::Custom& s) { return s.evaluate(space, u); },
                    },
                    spec.kind());
}

Rv seminorm_subgradient(const FiniteProbSpace& space, const SeminormSpec& spec, const Rv& u) {
  require_on(space, u);
  const std::size_t n = u.size();
  if (u.max_abs() == 0.0) return Rv::zeros(n);
  auto argmax_abs = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(u[i]) > std::abs(u[best])) best = i;
    return best;
  };

  return std::visit(
      overloaded{
          [&](const seminorm::Lp& s) {
            if (std::isinf(s.p)) return point_density(space, u, argmax_abs(), 1.0);
            std::vector<double> g(n);
            if (s.p == 1.0) {
              for (std::size_t i = 0; i < n; ++i) g[i] = sign(u[i]);
              return Rv(std::move(g));
            }
            const double norm = lp_norm(space, u, s.p);
            for (std::size_t i = 0; i < n; ++i)
              g[i] = sign(u[i]) * std::pow(std::abs(u[i]) / norm, s.p - 1.0);
            return Rv(std::move(g));
          },
          [&](const seminorm::Luxemburg& s) {
            const double beta = luxemburg_norm(space, u, s.family);
            std::vector<double> deriv(n, 0.0);
            bool finite = true;
            for (std::size_t i = 0; i < n; ++i) {
              deriv[i] = derivative(s.family[i], std::abs(u[i]) / beta);
              finite = finite && std::isfinite(deriv[i]);
            }
            if (finite) {
              Rv g = gauge_density(space, u, beta, deriv);
              if (g.max_abs() > 0.0) return g;
            }
            // Bounded-domain families: the constraint binds where |u_i| / beta hits the domain edge.
            std::size_t best = 0;
            double best_ratio = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
              const double ratio = std::abs(u[i]) / s.family[i].domain_bound();
              if (ratio > best_ratio) {
                best_ratio = ratio;
                best = i;
              }
            }
            return point_density(space, u, best, 1.0 / s.family[best].domain_bound());
          },
          [&](const seminorm::Marcinkiewicz& s) {
            const StepFunction q = quantile(space, u);
            const auto& bp = q.breakpoints();
            double best = -1.0, running = 0.0;
            std::size_t best_k = 0;
            for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
              running += q.values()[k] * (bp[k + 1] - bp[k]);
              const double ratio = running / s.phi(bp[k + 1]);
              if (ratio > best) {
                best = ratio;
                best_k = k;
              }
            }
            const double weight = 1.0 / s.phi(bp[best_k + 1]);
            Rv g = Rv::zeros(n);
            for (std::size_t i : top_atoms(u, q.values()[best_k])) g[i] = sign(u[i]) * weight;
            return g;
          },
          [&](const seminorm::Lorentz& s) {
            const PlateauIndex idx = plateaus(space, u);
            const auto& bp = idx.q.breakpoints();
            Rv g = Rv::zeros(n);
            for (std::size_t i = 0; i < n; ++i) {
              if (u[i] == 0.0) continue;
              const std::size_t k = idx.plateau_of[i];
              g[i] = sign(u[i]) * (s.phi(bp[k + 1]) - s.phi(bp[k])) / (bp[k + 1] - bp[k]);
            }
            return g;
          },
          [&](const seminorm::RiskNorm& s) {
            const double beta = risk_norm(space, s.rho, u);
            const Rv d = risk_subgradient(space, s.rho, (1.0 / beta) * u.abs());
            return gauge_density(space, u, beta, std::vector<double>(d.begin(), d.end()));
          },
          [&](const seminorm::GenOrlicz& s) {
            const double beta = gen_orlicz_unchecked(space, u, s.phi, *s.r);
            std::vector<double> inner(n);
            for (std::size_t i = 0; i < n; ++i) inner[i] = evaluate(s.phi, std::abs(u[i]) / beta);
            const Rv d = seminorm_subgradient(space, *s.r, Rv(inner));
            std::vector<double> chain(n);
            for (std::size_t i = 0; i < n; ++i)
              chain[i] = std::abs(d[i]) * derivative(s.phi, std::abs(u[i]) / beta);
            return gauge_density(space, u, beta, chain);
          },
          [&](const seminorm::Custom& s) {
            if (s.subgradient) return s.subgradient(space, u);
            auto grad = optim::finite_difference_gradient(
                [&](std::span<const double> x) {
                  return s.evaluate(space, Rv(std::vector<double>(x.begin(), x.end())));
                },
                u.values());
            for (std::size_t i = 0; i < n; ++i) grad[i] /= space.prob(i);
            return Rv(std::move(grad));
          },
      },
      spec.kind());
}

GenOrliczDual gen_orlicz_dual_norm(const FiniteProbSpace& space, const Rv& y, const YoungFunction& phi,
                                   const SeminormSpec& r, int max_iterations) {
  require_on(space, y);
  if (std::isfinite(phi.domain_bound()))
    throw DomainError("generalized Orlicz dual needs a finite-valued Young function");
  GenOrliczDual out;
  out.sum_minimizer = Rv::zeros(space.size());
  out.max_minimizer = Rv::zeros(space.size());
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] != 0.0) active.push_back(i);
  if (active.empty()) return out;

  const YoungFunction conj = conjugate(phi);
  const double conj_bound = conj.domain_bound();
  const Gauge rpolar = polar_gauge(space, r);
  const std::size_t n = active.size();

  auto embed = [&](std::span<const double> v) {
    Rv full = Rv::zeros(space.size());
    for (std::size_t k = 0; k < n; ++k) full[active[k]] = v[k];
    return full;
  };
  // E[v Phi*(|y|/v)] on the active atoms; +inf when some v_k is outside the perspective's domain.
  auto perspective = [&](std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = active[k];
      if (!(v[k] > 0.0)) return kInf;
      const double val = evaluate(conj, std::abs(y[i]) / v[k]);
      if (std::isinf(val)) return kInf;
      acc += space.prob(i) * v[k] * val;
    }
    return acc;
  };

  auto solve = [&](bool max_form, double& value, double& gap, Rv& minimizer) {
    auto combine = [&](double pers, double pol) { return max_form ? std::max(pers, pol) : pers + pol; };
    auto total = [&](std::span<const double> v) {
      const double pers = perspective(v);
      if (std::isinf(pers)) return kInf;
      return combine(pers, rpolar.value(embed(v)));
    };
    const auto line = optim::minimize_on_positive_axis(
        [&](double t) { return total(std::vector<double>(n, t)); }, y.max_abs(), 1e-10);
    const double f0 = line.value;
    std::vector<double> box(n);
    for (std::size_t k = 0; k < n; ++k) {
      Rv e = Rv::zeros(space.size());
      e[active[k]] = 1.0;
      box[k] = f0 / rpolar.value(e);
    }
    auto oracle = [&](std::span<const double> v) {
      optim::Cut cut;
      cut.normal.assign(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const double floor = std::isfinite(conj_bound) ? std::abs(y[active[k]]) / conj_bound : 0.0;
        if (!(v[k] > floor)) {
          cut.normal[k] = -1.0;
          cut.rhs = -floor;
          return cut;
        }
        if (v[k] > box[k]) {
          cut.normal[k] = 1.0;
          cut.rhs = box[k];
          return cut;
        }
      }
      const double pers = perspective(v);
      if (std::isinf(pers)) {
        // Sits on the domain edge; push inward on the first offending atom.
        for (std::size_t k = 0; k < n; ++k)
          if (std::isinf(evaluate(conj, std::abs(y[active[k]]) / v[k]))) {
            cut.normal[k] = -1.0;
            cut.rhs = -v[k];
            return cut;
          }
      }
      const Rv full = embed(v);
      const double pol = rpolar.value(full);
      cut.feasible = true;
      cut.value = combine(pers, pol);
      const bool use_pers = !max_form || pers >= pol;
      const bool use_pol = !max_form || pol > pers;
      if (use_pers)
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t i = active[k];
          const double z = std::abs(y[i]) / v[k];
          const double d = derivative(conj, z);
          cut.normal[k] += space.prob(i) * (evaluate(conj, z) - z * d);
        }
      if (use_pol) {
        const Rv g = rpolar.subgradient(full);
        for (std::size_t k = 0; k < n; ++k) cut.normal[k] += space.prob(active[k]) * g[active[k]];
      }
      return cut;
    };
    optim::EllipsoidOptions opts;
    opts.max_iterations = max_iterations;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-14 * std::max(1.0, f0);
    std::vector<double> center(n), radii(n);
    for (std::size_t k = 0; k < n; ++k) {
      center[k] = 0.5 * box[k];
      radii[k] = 0.5 * box[k] * std::sqrt(static_cast<double>(n)) * (1.0 + 1e-9);
    }
    auto res = optim::ellipsoid_minimize(oracle, center, radii, opts);
    if (line.value <= res.value) {
      res.value = line.value;
      res.argmin.assign(n, line.argmin);
    }
    value = res.value;
    gap = std::max(0.0, res.value - res.lower_bound);
    minimizer = embed(res.argmin);
    return gap <= std::max(opts.abs_tol, 1e-8 * std::abs(value));
  };

  const bool ok_sum = solve(false, out.sum_form, out.sum_gap, out.sum_minimizer);
  const bool ok_max = solve(true, out.max_form, out.max_gap, out.max_minimizer);
  out.converged = ok_sum && ok_max;
  return out;
}

CheckReport check_axioms(const FiniteProbSpace& space, const SeminormSpec& spec, int trials,
                         std::uint64_t seed, double tol) {
  if (trials < 1) throw DomainError("need at least one trial");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = space.size();
  auto random_rv = [&] {
    std::vector<double> v(n);
    for (double& x : v) x = normal(rng);
    return Rv(std::move(v));
  };
  auto describe = [](const Rv& u) {
    std::ostringstream s;
    s << "(";
    for (std::size_t i = 0; i < u.size(); ++i) s << (i ? "," : "") << u[i];
    s << ")";
    return s.str();
  };
  auto p = [&](const Rv& u) { return seminorm_value(space, spec, u); };

  PropertyCheck nonneg{"nonnegativity"}, symmetry{"symmetry"}, homog{"homogeneity"},
      subadd{"subadditivity"}, a1{"A1"}, a2{"A2"}, a3{"A3"}, a4{"A4"},
      solid{"solid_decomposable"};
  auto record = [&](PropertyCheck& c, double violation, const std::string& witness) {
    if (violation > c.worst_slack) {
      c.worst_slack = violation;
      if (violation > tol) c.witness = witness;
    }
    if (violation > tol || std::isnan(violation)) {
      c.passed = false;
      if (c.witness.empty()) c.witness = witness;
    }
  };

  double c1 = kInf, c2 = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const Rv u = random_rv();
    const Rv v = random_rv();
    const double pu = p(u);
    const double pv = p(v);
    const double scale = 1.0 + std::abs(pu) + std::abs(pv);
    const std::string w = "u=" + describe(u);

    record(nonneg, -pu / scale, w);
    record(symmetry, std::abs(p(-u) - pu) / scale, w);
    const double lambda = 4.0 * unit(rng) - 2.0;
    record(homog, std::abs(p(lambda * u) - std::abs(lambda) * pu) / scale,
           w + " lambda=" + fmt_num(lambda));
    record(subadd, (p(u + v) - pu - pv) / scale, w + " v=" + describe(v));

    const double l1 = lp_norm(space, u, 1.0);
    if (l1 > 0.0) c1 = std::min(c1, pu / l1);
    c2 = std::max(c2, pu / u.max_abs());

    Rv dominated = u;
    for (std::size_t i = 0; i < n; ++i) dominated[i] *= (unit(rng) < 0.5 ? -1.0 : 1.0) * unit(rng);
    record(a3, (p(dominated) - pu) / scale, w + " u'=" + describe(dominated));

    Rv shrinking = u;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double prev = pu;
    for (std::size_t k = 0; k < n; ++k) {
      shrinking[order[k]] = 0.0;
      const double cur = p(shrinking);
      record(a4, (cur - prev) / scale, w);
      prev = cur;
    }
    record(a4, std::abs(prev) / scale, w);
  }
  a1.statistic = c1;
  if (!(c1 > tol)) {
    a1.passed = false;
    a1.worst_slack = tol - c1;
    a1.witness = "empirical lower constant " + fmt_num(c1);
  }
  a2.statistic = c2;
  if (!std::isfinite(c2)) {
    a2.passed = false;
    a2.witness = "unbounded ratio to the sup norm";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t atom[1] = {i};
    const double val = p(indicator(space, atom));
    if (!std::isfinite(val)) record(solid, kInf, "indicator of atom " + std::to_string(i));
  }
  if (!a3.passed) {
    solid.passed = false;
    if (solid.witness.empty()) solid.witness = a3.witness;
  }
  return CheckReport{{nonneg, symmetry, homog, subadd, a1, a2, a3, a4, solid}};
}

FundamentalFunctions fundamental_functions(const FiniteProbSpace& space, const SeminormSpec& spec) {
  const std::size_t n = space.size();
  std::vector<std::pair<double, double>> samples;  // (P(A), p(1_A))
  if (n <= 20) {
    const std::uint32_t count = std::uint32_t{1} << n;
    samples.reserve(count);
    std::vector<std::size_t> atoms;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      atoms.clear();
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::uint32_t{1} << i)) {
          atoms.push_back(i);
          mass += space.prob(i);
        }
      samples.emplace_back(mass, seminorm_value(space, spec, indicator(space, atoms)));
    }
  } else if (space.is_uniform() && spec.rearrangement_invariant()) {
    std::vector<std::size_t> atoms;
    samples.emplace_back(0.0, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
      atoms.push_back(k - 1);
      samples.emplace_back(static_cast<double>(k) / static_cast<double>(n),
                           seminorm_value(space, spec, indicator(space, atoms)));
    }
  } else {
    throw DomainError("fundamental functions need at most 20 atoms, or an equal-weight space and a "
                      "rearrangement-invariant seminorm");
  }

  std::sort(samples.begin(), samples.end());
  FundamentalFunctions out;
  std::vector<double> hi, lo;
  for (std::size_t k = 0; k < samples.size();) {
    std::size_t end = k;
    double vmax = -kInf, vmin = kInf;
    while (end < samples.size() && samples[end].first - samples[k].first <= 1e-12) {
      vmax = std::max(vmax, samples[end].second);
      vmin = std::min(vmin, samples[end].second);
      ++end;
    }
    out.t.push_back(samples[k].first);
    hi.push_back(vmax);
    lo.push_back(vmin);
    k = end;
  }
  out.upper.resize(out.t.size());
  out.lower.resize(out.t.size());
  double run = -kInf;
  for (std::size_t k = 0; k < out.t.size(); ++k) out.upper[k] = run = std::max(run, hi[k]);
  run = kInf;
  for (std::size_t k = out.t.size(); k-- > 0;) out.lower[k] = run = std::min(run, lo[k]);
  return out;
}

std::vector<double> family_membership(const FiniteProbSpace& space, const Rv& u, const NormFamily& family) {
  std::vector<double> out;
  out.reserve(family.members().size());
  for (const auto& spec : family.members()) out.push_back(seminorm_value(space, spec, u));
  return out;
}

SeminormSpec conditional_max_seminorm(const FiniteProbSpace& space, std::vector<std::size_t> atoms) {
  if (atoms.empty()) throw DomainError("conditioning set must be nonempty");
  for (std::size_t i : atoms)
    if (i >= space.size()) throw DomainError("atom index out of range");
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  auto parts = [atoms](const FiniteProbSpace& sp, const Rv& u) {
    double whole = 0.0, local = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) whole += sp.prob(i) * std::abs(u[i]);
    for (std::size_t i : atoms) {
      local += sp.prob(i) * std::abs(u[i]);
      mass += sp.prob(i);
    }
    return std::tuple{whole, local / mass, mass};
  };
  seminorm::Custom c;
  c.name = "conditional_max";
  c.evaluate = [parts](const FiniteProbSpace& sp, const Rv& u) {
    require_on(sp, u);
    auto [whole, local, mass] = parts(sp, u);
    return std::max(whole, local);
  };
  c.subgradient = [parts, atoms](const FiniteProbSpace& sp, const Rv& u) {
    auto [whole, local, mass] = parts(sp, u);
    Rv g = Rv::zeros(u.size());
    if (whole >= local) {
      for (std::size_t i = 0; i < u.size(); ++i) g[i] = sign(u[i]);
    } else {
      for (std::size_t i : atoms) g[i] = sign(u[i]) / mass;
    }
    return g;
  };
  c.rearrangement_invariant = false;
  return c;
}

}  // namespace kothe
