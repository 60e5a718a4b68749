#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kothe/numeric.hpp"

namespace kothe {

/// A finite probability space: atoms with strictly positive weights summing to one.
class FiniteProbSpace {
 public:
  explicit FiniteProbSpace(std::vector<double> probs,
                           std::vector<std::string> labels = {},
                           double tol = default_policy().linear);

  static FiniteProbSpace uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// True when all atoms carry the same weight (the resonant atomic case).
  bool is_uniform(double tol = 1e-12) const;

 private:
  std::vector<double> probs_;
  std::vector<std::string> labels_;
};

/// A real random variable on a finite space: one finite value per atom.
class Rv {
 public:
  Rv() = default;
  explicit Rv(std::vector<double> values);
  Rv(std::initializer_list<double> values) : Rv(std::vector<double>(values)) {}

  static Rv zeros(std::size_t n) { return Rv(std::vector<double>(n, 0.0)); }
  static Rv constant(std::size_t n, double c) { return Rv(std::vector<double>(n, c)); }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  Rv abs() const;
  double max_abs() const;

  friend Rv operator+(const Rv& a, const Rv& b);
  friend Rv operator-(const Rv& a, const Rv& b);
  friend Rv operator*(double s, const Rv& a);
  friend Rv operator-(const Rv& a) { return -1.0 * a; }
  friend bool operator==(const Rv&, const Rv&) = default;

 private:
  std::vector<double> values_;
};

/// Atomwise product.
Rv hadamard(const Rv& a, const Rv& b);

/// Disjoint nonempty blocks of atom indices covering the space; encodes a sub-sigma-algebra.
class Partition {
 public:
  Partition(const FiniteProbSpace& space, std::vector<std::vector<std::size_t>> blocks);

  static Partition trivial(const FiniteProbSpace& space);
  static Partition discrete(const FiniteProbSpace& space);

  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }

 private:
  std::vector<std::vector<std::size_t>> blocks_;
};

double expectation(const FiniteProbSpace& space, const Rv& u);

/// E[u y]
double pairing(const FiniteProbSpace& space, const Rv& u, const Rv& y);

Rv conditional_expectation(const FiniteProbSpace& space, const Rv& u, const Partition& g);

Rv indicator(const FiniteProbSpace& space, std::span<const std::size_t> atoms);

/// Throws DomainError unless `u` has one value per atom.
void require_on(const FiniteProbSpace& space, const Rv& u, const char* what = "random variable");

}  // namespace kothe
