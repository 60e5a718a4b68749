#include "kothe/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kothe {

FiniteProbSpace::FiniteProbSpace(std::vector<double> probs, std::vector<std::string> labels,
                                 double tol)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
  if (probs_.empty()) throw DomainError("probability space needs at least one atom");
  if (!labels_.empty() && labels_.size() != probs_.size())
    throw DomainError("label count does not match atom count");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p <= 0.0)
      throw DomainError("atom probabilities must be finite and strictly positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) throw DomainError("atom probabilities must sum to 1");
}

FiniteProbSpace FiniteProbSpace::uniform(std::size_t n) {
  if (n == 0) throw DomainError("probability space needs at least one atom");
  return FiniteProbSpace(std::vector<double>(n, 1.0 / static_cast<double>(n)), {}, 1e-9);
}

bool FiniteProbSpace::is_uniform(double tol) const {
  const double target = 1.0 / static_cast<double>(probs_.size());
  return std::all_of(probs_.begin(), probs_.end(),
                     [&](double p) { return std::abs(p - target) <= tol; });
}

Rv::Rv(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("random variable values must be finite");
}

Rv Rv::abs() const {
  Rv out = *this;
  for (double& v : out.values_) v = std::abs(v);
  return out;
}

double Rv::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {
void require_same(const Rv& a, const Rv& b) {
  if (a.size() != b.size()) throw DomainError("random variables have different lengths");
}
}  // namespace

Rv operator+(const Rv& a, const Rv& b) {
  require_same(a, b);
  Rv out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out.values_[i] += b.values_[i];
  return out;
}

Rv operator-(const Rv& a, const Rv& b) {
  require_same(a, b);
  Rv out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out.values_[i] -= b.values_[i];
  return out;
}

Rv operator*(double s, const Rv& a) {
  Rv out = a;
  for (double& v : out.values_) v *= s;
  return out;
}

Rv hadamard(const Rv& a, const Rv& b) {
  require_same(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return Rv(std::move(out));
}

void require_on(const FiniteProbSpace& space, const Rv& u, const char* what) {
  if (u.size() != space.size())
    throw DomainError(std::string(what) + " length does not match the number of atoms");
}

Partition::Partition(const FiniteProbSpace& space, std::vector<std::vector<std::size_t>> blocks)
    : blocks_(std::move(blocks)) {
  std::vector<int> seen(space.size(), 0);
  for (const auto& block : blocks_) {
    if (block.empty()) throw DomainError("partition block is empty");
    for (std::size_t i : block) {
      if (i >= space.size()) throw DomainError("partition index out of range");
      if (seen[i]++) throw DomainError("partition blocks overlap");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw DomainError("partition does not cover every atom");
}

Partition Partition::trivial(const FiniteProbSpace& space) {
  std::vector<std::size_t> all(space.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Partition(space, {all});
}

Partition Partition::discrete(const FiniteProbSpace& space) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < space.size(); ++i) blocks.push_back({i});
  return Partition(space, std::move(blocks));
}

double expectation(const FiniteProbSpace& space, const Rv& u) {
  require_on(space, u);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += space.prob(i) * u[i];
  return s;
}

double pairing(const FiniteProbSpace& space, const Rv& u, const Rv& y) {
  require_on(space, u);
  require_on(space, y);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += space.prob(i) * u[i] * y[i];
  return s;
}

Rv conditional_expectation(const FiniteProbSpace& space, const Rv& u, const Partition& g) {
  require_on(space, u);
  std::vector<double> out(u.size());
  for (const auto& block : g.blocks()) {
    if (block.empty()) throw DomainError("partition block is empty");
    double mass = 0.0, acc = 0.0;
    for (std::size_t i : block) {
      if (i >= space.size()) throw DomainError("partition index out of range");
      mass += space.prob(i);
      acc += space.prob(i) * u[i];
    }
    for (std::size_t i : block) out[i] = acc / mass;
  }
  return Rv(std::move(out));
}

Rv indicator(const FiniteProbSpace& space, std::span<const std::size_t> atoms) {
  std::vector<double> out(space.size(), 0.0);
  for (std::size_t i : atoms) {
    if (i >= space.size()) throw DomainError("indicator index out of range");
    out[i] = 1.0;
  }
  return Rv(std::move(out));
}

}  // namespace kothe
