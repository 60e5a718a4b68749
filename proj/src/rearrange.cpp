#include "kothe/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kothe {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1)
    throw DomainError("step function needs one more breakpoint than plateaus");
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
    throw DomainError("step function breakpoints must start at 0 and end at 1");
  for (std::size_t k = 1; k < breakpoints_.size(); ++k)
    if (!(breakpoints_[k] > breakpoints_[k - 1]))
      throw DomainError("step function breakpoints must be strictly increasing");
}

double StepFunction::operator()(double t) const {
  if (t < 0.0 || t > 1.0) throw DomainError("step function argument outside [0,1]");
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
  k = std::clamp<std::size_t>(k, 1, values_.size());
  return values_[k - 1];
}

bool StepFunction::is_nonincreasing() const {
  return std::is_sorted(values_.rbegin(), values_.rend());
}

double distribution_fn(const FiniteProbSpace& space, const Rv& u, double tau) {
  require_on(space, u);
  double mass = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) > tau) mass += space.prob(i);
  return mass;
}

StepFunction quantile(const FiniteProbSpace& space, const Rv& u) {
  require_on(space, u);
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(u[a]) > std::abs(u[b]);
  });

  std::vector<double> breakpoints{0.0};
  std::vector<double> values;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = std::abs(u[order[k]]);
    cumulative += space.prob(order[k]);
    if (!values.empty() && values.back() == v) {
      breakpoints.back() = cumulative;
    } else {
      values.push_back(v);
      breakpoints.push_back(cumulative);
    }
  }
  breakpoints.back() = 1.0;
  return StepFunction(std::move(breakpoints), std::move(values));
}

double quantile_integral(const StepFunction& q, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("integration limit outside [0,1]");
  const auto& bp = q.breakpoints();
  double acc = 0.0;
  for (std::size_t k = 0; k < q.plateaus() && bp[k] < t; ++k)
    acc += q.values()[k] * (std::min(t, bp[k + 1]) - bp[k]);
  return acc;
}

double cvar_infimum(const FiniteProbSpace& space, const Rv& u, double t) {
  require_on(space, u);
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("CVaR level must lie in (0,1]");
  const Rv a = u.abs();
  auto objective = [&](double s) {
    double excess = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) excess += space.prob(i) * std::max(a[i] - s, 0.0);
    return t * s + excess;
  };
  double best = objective(0.0);
  for (double s : a) best = std::min(best, objective(s));
  return best;
}

double hardy_littlewood_sup(const FiniteProbSpace& space, const Rv& u, const Rv& y) {
  require_on(space, u);
  require_on(space, y);
  if (!space.is_uniform())
    throw DomainError("rearrangement supremum requires equal atom probabilities");
  std::vector<double> a(u.begin(), u.end()), b(y.begin(), y.end());
  for (double& v : a) v = std::abs(v);
  for (double& v : b) v = std::abs(v);
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / static_cast<double>(a.size());
}

}  // namespace kothe
