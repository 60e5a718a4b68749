#include "kothe/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "kothe/duality.hpp"
#include "kothe/optim.hpp"

namespace kothe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double avar(const FiniteProbSpace& space, const Rv& u, double t) {
  auto objective = [&](double s) {
    double excess = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) excess += space.prob(i) * std::max(u[i] - s, 0.0);
    return s + excess / t;
  };
  double best = kInf;
  for (double s : u) best = std::min(best, objective(s));
  return best;
}

double entropic(const FiniteProbSpace& space, const Rv& u, double theta) {
  const double m = *std::max_element(u.begin(), u.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += space.prob(i) * std::exp(theta * (u[i] - m));
  return m + std::log(acc) / theta;
}

Rv avar_density(const FiniteProbSpace& space, const Rv& u, double t) {
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return u[a] > u[b]; });
  std::vector<double> d(u.size(), 0.0);
  double remaining = t;  // probability mass still to assign weight 1/t
  std::size_t k = 0;
  while (k < order.size() && remaining > 0.0) {
    std::size_t end = k;
    double tie_mass = 0.0;
    while (end < order.size() && u[order[end]] == u[order[k]]) tie_mass += space.prob(order[end++]);
    const double share = std::min(tie_mass, remaining);
    for (std::size_t j = k; j < end; ++j) d[order[j]] = share / (t * tie_mass);
    remaining -= share;
    k = end;
  }
  return Rv(std::move(d));
}

}  // namespace

RiskMeasureSpec::RiskMeasureSpec(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const riskm::AVaR& r) {
                   if (!(r.level > 0.0 && r.level <= 1.0))
                     throw DomainError("AVaR level must lie in (0,1]");
                 },
                 [](const riskm::Entropic& r) {
                   if (!(r.theta > 0.0) || !std::isfinite(r.theta))
                     throw DomainError("entropic risk needs theta > 0");
                 },
                 [](const riskm::Custom& r) {
                   if (!r.evaluate) throw DomainError("custom risk measure needs an evaluator");
                 },
             },
             kind_);
}

std::string RiskMeasureSpec::name() const {
  return std::visit(overloaded{
                        [](const riskm::AVaR& r) {
                          std::ostringstream s;
                          s << "avar(level=" << r.level << ")";
                          return s.str();
                        },
                        [](const riskm::Entropic& r) {
                          std::ostringstream s;
                          s << "entropic(theta=" << r.theta << ")";
                          return s.str();
                        },
                        [](const riskm::Custom& r) { return "custom(" + r.name + ")"; },
                    },
                    kind_);
}

bool RiskMeasureSpec::law_invariant() const {
  if (const auto* c = std::get_if<riskm::Custom>(&kind_)) return c->law_invariant;
  return true;
}

double evaluate_risk(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& u) {
  require_on(space, u);
  return std::visit(overloaded{
                        [&](const riskm::AVaR& r) { return avar(space, u, r.level); },
                        [&](const riskm::Entropic& r) { return entropic(space, u, r.theta); },
                        [&](const riskm::Custom& r) { return r.evaluate(space, u); },
                    },
                    rho.kind());
}

Rv risk_subgradient(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& u) {
  require_on(space, u);
  return std::visit(
      overloaded{
          [&](const riskm::AVaR& r) { return avar_density(space, u, r.level); },
          [&](const riskm::Entropic& r) {
            const double m = *std::max_element(u.begin(), u.end());
            std::vector<double> w(u.size());
            double z = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
              w[i] = std::exp(r.theta * (u[i] - m));
              z += space.prob(i) * w[i];
            }
            for (double& v : w) v /= z;
            return Rv(std::move(w));
          },
          [&](const riskm::Custom& r) {
            if (r.subgradient) return r.subgradient(space, u);
            auto grad = optim::finite_difference_gradient(
                [&](std::span<const double> x) {
                  return r.evaluate(space, Rv(std::vector<double>(x.begin(), x.end())));
                },
                u.values());
            for (std::size_t i = 0; i < grad.size(); ++i) grad[i] /= space.prob(i);
            return Rv(std::move(grad));
          },
      },
      rho.kind());
}

double risk_norm(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& u) {
  require_on(space, u);
  const Rv a = u.abs();
  const double top = a.max_abs();
  if (top == 0.0) return 0.0;
  return optim::gauge_bisection([&](double beta) { return evaluate_risk(space, rho, (1.0 / beta) * a); },
                                top, default_policy().bisection_rel);
}

namespace {

struct BoxMax {
  double value;
  Rv argmax;
};

// max over xi in [0,c]^N with xi_i = 0 wherever y_i = 0 of E[xi y] - rho(xi).
BoxMax penalty_box_max(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& y,
                       const std::vector<std::size_t>& active, double c) {
  const std::size_t n = active.size();
  auto embed = [&](std::span<const double> x) {
    std::vector<double> full(space.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) full[active[k]] = x[k];
    return Rv(std::move(full));
  };
  auto oracle = [&](std::span<const double> x) {
    optim::Cut cut;
    cut.normal.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (x[k] < 0.0) {
        cut.normal[k] = -1.0;
        cut.rhs = 0.0;
        return cut;
      }
      if (x[k] > c) {
        cut.normal[k] = 1.0;
        cut.rhs = c;
        return cut;
      }
    }
    const Rv xi = embed(x);
    const Rv d = risk_subgradient(space, rho, xi);
    cut.feasible = true;
    cut.value = evaluate_risk(space, rho, xi) - pairing(space, xi, y);
    for (std::size_t k = 0; k < n; ++k)
      cut.normal[k] = space.prob(active[k]) * (d[active[k]] - y[active[k]]);
    return cut;
  };
  optim::EllipsoidOptions opts;
  opts.max_iterations = 4000 * static_cast<int>(n * n) + 4000;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-13 * c * std::max(1.0, y.max_abs());
  const double r = 0.5 * c * std::sqrt(static_cast<double>(n)) * (1.0 + 1e-9);
  auto res = optim::ellipsoid_minimize(oracle, std::vector<double>(n, 0.5 * c),
                                       std::vector<double>(n, r), opts);
  // xi = 0 is always feasible with value 0.
  if (res.value > 0.0) return {0.0, Rv::zeros(space.size())};
  return {-res.value, embed(res.argmin)};
}

double ray_value(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& y,
                 const Rv& direction, double lambda) {
  const Rv xi = lambda * direction;
  return pairing(space, xi, y) - evaluate_risk(space, rho, xi);
}

}  // namespace

PenaltyResult penalty(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& y) {
  require_on(space, y);
  for (double v : y)
    if (v < 0.0) throw DomainError("penalty argument must be nonnegative");
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] > 0.0) active.push_back(i);
  PenaltyResult out;
  out.maximizer = Rv::zeros(space.size());
  out.ray = Rv::zeros(space.size());
  if (active.empty()) return out;
  // Constant xi = c gives c (E y - 1) by translation invariance.
  if (expectation(space, y) > 1.0) {
    out.bounded = false;
    out.value = kInf;
    out.ray = Rv::constant(space.size(), 1.0);
    return out;
  }

  const double scale = std::max(1.0, y.max_abs());
  std::vector<double> values;
  double c = 1.0;
  for (int k = 0; k <= 60; ++k, c *= 2.0) {
    BoxMax m = penalty_box_max(space, rho, y, active, c);
    values.push_back(m.value);
    out.value = m.value;
    out.maximizer = m.argmax;
    if (k >= 1) {
      const double inc = values[k] - values[k - 1];
      if (inc <= 1e-10 * std::max(1.0, std::abs(values[k]))) return out;
    }
    if (k >= 2) {
      const double inc1 = values[k - 1] - values[k - 2];
      const double inc2 = values[k] - values[k - 1];
      if (inc1 > 1e-10 * scale * c && inc2 >= 2.0 * inc1 * (1.0 - 1e-6)) {
        // Confirm along the maximizer's ray: positive, linear growth over two doublings.
        const Rv direction = (1.0 / c) * m.argmax;
        const double g1 = ray_value(space, rho, y, direction, c);
        const double g2 = ray_value(space, rho, y, direction, 2.0 * c);
        const double g4 = ray_value(space, rho, y, direction, 4.0 * c);
        if (g2 - g1 > 0.0 && g4 - g2 >= 2.0 * (g2 - g1) * (1.0 - 1e-6)) {
          out.bounded = false;
          out.value = kInf;
          out.ray = direction;
          return out;
        }
      }
    }
  }
  out.bounded = false;
  out.value = kInf;
  out.ray = (1.0 / (c / 2.0)) * out.maximizer;
  return out;
}

namespace {

double scaled_penalty(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& abs_y,
                      double beta) {
  return penalty(space, rho, (1.0 / beta) * abs_y).value;
}

}  // namespace

double penalty_norm(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& y) {
  require_on(space, y);
  const Rv a = y.abs();
  if (a.max_abs() == 0.0) return 0.0;
  return optim::gauge_bisection([&](double beta) { return scaled_penalty(space, rho, a, beta); },
                                expectation(space, a), 1e-10);
}

RiskDualNorm risk_dual_norm(const FiniteProbSpace& space, const RiskMeasureSpec& rho, const Rv& y,
                            double agreement_tol) {
  require_on(space, y);
  RiskDualNorm out;
  const Rv a = y.abs();
  if (a.max_abs() == 0.0) return out;
  auto objective = [&](double beta) {
    const double alpha = scaled_penalty(space, rho, a, beta);
    return std::isinf(alpha) ? kInf : beta * alpha + beta;
  };
  out.inf_form = optim::minimize_on_positive_axis(objective, expectation(space, a), 1e-10).value;
  out.polar = polar(space, SeminormSpec::risk(rho), y).value;
  out.penalty_norm = penalty_norm(space, rho, y);
  const double diff = std::abs(out.inf_form - out.polar);
  if (diff > agreement_tol * std::max(1.0, out.inf_form)) {
    std::ostringstream msg;
    msg << "risk dual norm: inf-form " << out.inf_form << " and direct polar " << out.polar
        << " disagree";
    throw ConvergenceError(msg.str(), out.inf_form, diff);
  }
  return out;
}

CheckReport check_risk_axioms(const FiniteProbSpace& space, const RiskMeasureSpec& rho, int trials,
                              std::uint64_t seed, double tol) {
  if (trials < 1) throw DomainError("need at least one trial");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const std::size_t n = space.size();
  auto random_rv = [&] {
    std::vector<double> v(n);
    for (double& x : v) x = normal(rng);
    return Rv(std::move(v));
  };
  auto describe = [](const Rv& u) {
    std::ostringstream s;
    s << "u=(";
    for (std::size_t i = 0; i < u.size(); ++i) s << (i ? "," : "") << u[i];
    s << ")";
    return s.str();
  };

  PropertyCheck zero{"zero"}, convex{"convexity"}, monotone{"monotonicity"},
      translation{"translation"}, lebesgue{"lebesgue"};
  auto record = [&](PropertyCheck& c, double violation, const std::string& witness) {
    if (violation > c.worst_slack) {
      c.worst_slack = violation;
      if (violation > tol) c.witness = witness;
    }
    if (violation > tol) c.passed = false;
  };

  record(zero, std::abs(evaluate_risk(space, rho, Rv::zeros(n))), "u=0");
  for (int trial = 0; trial < trials; ++trial) {
    const Rv u = random_rv();
    const Rv v = random_rv();
    const double scale = 1.0 + std::max(u.max_abs(), v.max_abs());
    const double ru = evaluate_risk(space, rho, u);
    const double rv = evaluate_risk(space, rho, v);
    record(convex, (evaluate_risk(space, rho, 0.5 * (u + v)) - 0.5 * (ru + rv)) / scale,
           describe(u) + " v=" + describe(v).substr(2));

    Rv w = u;
    for (std::size_t i = 0; i < n; ++i) w[i] += std::abs(v[i]);
    record(monotone, (ru - evaluate_risk(space, rho, w)) / scale, describe(u));

    const double shift = normal(rng);
    record(translation,
           std::abs(evaluate_risk(space, rho, u + Rv::constant(n, shift)) - ru - shift) / scale,
           describe(u) + " shift=" + std::to_string(shift));

    Rv xi = u.abs();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double prev = evaluate_risk(space, rho, xi);
    for (std::size_t k = 0; k < n; ++k) {
      xi[order[k]] = 0.0;
      const double cur = evaluate_risk(space, rho, xi);
      record(lebesgue, (cur - prev) / scale, describe(u));
      prev = cur;
    }
    record(lebesgue, std::abs(prev) / scale, describe(u));
  }
  return CheckReport{{zero, convex, monotone, translation, lebesgue}};
}

}  // namespace kothe
