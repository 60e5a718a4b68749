#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "kothe/numeric.hpp"

namespace kothe {

class YoungFunction;

namespace young {

/// coef * x^p, p >= 1.
struct Power {
  double p;
  double coef = 1.0;
  bool operator==(const Power&) const = default;
};

/// x^p / p, p > 1.
struct PowerOverP {
  double p;
  bool operator==(const PowerOverP&) const = default;
};

/// e^x - 1.
struct Exponential {
  bool operator==(const Exponential&) const = default;
};

/// y log y - y + 1 for y >= 1 and 0 below; the conjugate of e^x - 1.
struct Entropy {
  bool operator==(const Entropy&) const = default;
};

/// 0 on [0,a], +inf beyond.
struct IndicatorBall {
  double a;
  bool operator==(const IndicatorBall&) const = default;
};

/// Piecewise-linear interpolation of (x, phi) nodes starting at (0,0), extended past the
/// last node with the last slope.
struct Tabulated {
  std::vector<double> x;
  std::vector<double> phi;
  bool operator==(const Tabulated&) const = default;
};

/// sup_x {x y - primal(x)} evaluated numerically; produced by conjugating a Tabulated function.
struct NumericConjugate {
  std::shared_ptr<const YoungFunction> primal;
  bool operator==(const NumericConjugate& other) const;
};

}  // namespace young

/// A Young function: convex, nondecreasing on [0,inf), zero at zero, not identically zero.
/// Arguments are magnitudes; the symmetric extension Phi(|x|) is applied by callers.
class YoungFunction {
 public:
  using Kind = std::variant<young::Power, young::PowerOverP, young::Exponential, young::Entropy,
                            young::IndicatorBall, young::Tabulated, young::NumericConjugate>;

  YoungFunction(Kind kind);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, YoungFunction> &&
             !std::is_same_v<std::remove_cvref_t<T>, Kind> && std::is_constructible_v<Kind, T &&>)
  YoungFunction(T&& alternative)  // NOLINT(google-explicit-constructor)
      : YoungFunction(Kind(std::forward<T>(alternative))) {}

  static YoungFunction power(double p, double coef = 1.0) { return young::Power{p, coef}; }
  static YoungFunction power_over_p(double p) { return young::PowerOverP{p}; }
  static YoungFunction exponential() { return young::Exponential{}; }
  static YoungFunction entropy() { return young::Entropy{}; }
  static YoungFunction indicator_ball(double a) { return young::IndicatorBall{a}; }
  static YoungFunction tabulated(std::vector<double> x, std::vector<double> phi);

  /// Two whitespace-separated numeric columns (x, Phi(x)); '#' starts a comment.
  static YoungFunction from_table(std::istream& in);

  const Kind& kind() const { return kind_; }
  std::string name() const;

  /// sup{x : Phi(x) < inf}.
  double domain_bound() const;

  bool operator==(const YoungFunction& other) const { return kind_ == other.kind_; }

 private:
  Kind kind_;
};

/// Phi(x) for x >= 0; +inf outside the domain.
double evaluate(const YoungFunction& phi, double x);

/// Right derivative Phi'(x+); +inf at the right end of a bounded domain.
double derivative(const YoungFunction& phi, double x);

/// Legendre-Fenchel conjugate restricted to y >= 0.
YoungFunction conjugate(const YoungFunction& phi);

/// Phi(2x) <= K Phi(x) for all x >= x0.
bool check_delta2(const YoungFunction& phi, double x0, double K);

/// One Young function per atom.
class MusielakFamily {
 public:
  explicit MusielakFamily(std::vector<YoungFunction> per_atom);
  static MusielakFamily uniform(std::size_t n, const YoungFunction& phi);

  std::size_t size() const { return per_atom_.size(); }
  const YoungFunction& operator[](std::size_t i) const { return per_atom_[i]; }
  const std::vector<YoungFunction>& functions() const { return per_atom_; }

  bool atom_independent() const;
  MusielakFamily conjugate() const;

  bool operator==(const MusielakFamily&) const = default;

 private:
  std::vector<YoungFunction> per_atom_;
};

namespace detail {
/// Maximizer and value of x*y - Phi(x) over x >= 0, by outward doubling then golden-section.
struct ConjugateSup {
  double value;
  double argmax;
};
ConjugateSup conjugate_sup(const YoungFunction& phi, double y);
}  // namespace detail

}  // namespace kothe
