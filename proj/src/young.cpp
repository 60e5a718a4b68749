#include "kothe/young.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "kothe/optim.hpp"

namespace kothe {

namespace young {
bool NumericConjugate::operator==(const NumericConjugate& other) const {
  if (primal == other.primal) return true;
  return primal && other.primal && *primal == *other.primal;
}
}  // namespace young

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const YoungFunction::Kind& kind) {
  std::visit(overloaded{
                 [](const young::Power& f) {
                   if (!(f.p >= 1.0) || !std::isfinite(f.p))
                     throw DomainError("power Young function needs p >= 1");
                   if (!(f.coef > 0.0) || !std::isfinite(f.coef))
                     throw DomainError("power Young function needs a positive coefficient");
                 },
                 [](const young::PowerOverP& f) {
                   if (!(f.p > 1.0) || !std::isfinite(f.p))
                     throw DomainError("x^p/p Young function needs p > 1");
                 },
                 [](const young::IndicatorBall& f) {
                   if (!(f.a > 0.0) || !std::isfinite(f.a))
                     throw DomainError("indicator ball radius must be positive");
                 },
                 [](const young::Tabulated& f) {
                   if (f.x.size() < 2 || f.x.size() != f.phi.size())
                     throw DomainError("tabulated Young function needs at least two nodes");
                   if (f.x.front() != 0.0 || f.phi.front() != 0.0)
                     throw DomainError("tabulated Young function must start at (0,0)");
                   double prev_slope = 0.0;
                   for (std::size_t k = 1; k < f.x.size(); ++k) {
                     if (!(f.x[k] > f.x[k - 1]) || !std::isfinite(f.x[k]) ||
                         !std::isfinite(f.phi[k]))
                       throw DomainError("tabulated x nodes must be finite and strictly increasing");
                     const double slope = (f.phi[k] - f.phi[k - 1]) / (f.x[k] - f.x[k - 1]);
                     if (slope < prev_slope - 1e-12 * std::max(1.0, std::abs(prev_slope)))
                       throw DomainError("tabulated Young function must be convex and nondecreasing");
                     prev_slope = slope;
                   }
                   if (!(f.phi.back() > 0.0))
                     throw DomainError("tabulated Young function is identically zero");
                 },
                 [](const young::NumericConjugate& f) {
                   if (!f.primal) throw DomainError("numeric conjugate without a primal function");
                 },
                 [](const auto&) {},
             },
             kind);
}

double tabulated_value(const young::Tabulated& f, double x) {
  auto it = std::upper_bound(f.x.begin(), f.x.end(), x);
  std::size_t k = static_cast<std::size_t>(it - f.x.begin());
  k = std::clamp<std::size_t>(k, 1, f.x.size() - 1);
  const double slope = (f.phi[k] - f.phi[k - 1]) / (f.x[k] - f.x[k - 1]);
  return f.phi[k - 1] + slope * (x - f.x[k - 1]);
}

double tabulated_slope(const young::Tabulated& f, double x) {
  auto it = std::upper_bound(f.x.begin(), f.x.end(), x);
  std::size_t k = static_cast<std::size_t>(it - f.x.begin());
  k = std::clamp<std::size_t>(k, 1, f.x.size() - 1);
  return (f.phi[k] - f.phi[k - 1]) / (f.x[k] - f.x[k - 1]);
}

}  // namespace

YoungFunction::YoungFunction(Kind kind) : kind_(std::move(kind)) { validate(kind_); }

YoungFunction YoungFunction::tabulated(std::vector<double> x, std::vector<double> phi) {
  return young::Tabulated{std::move(x), std::move(phi)};
}

YoungFunction YoungFunction::from_table(std::istream& in) {
  std::vector<double> xs, phis;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    double x, phi;
    if (!(row >> x)) continue;
    if (!(row >> phi)) throw DomainError("Young function table row needs two columns");
    xs.push_back(x);
    phis.push_back(phi);
  }
  return tabulated(std::move(xs), std::move(phis));
}

std::string YoungFunction::name() const {
  return std::visit(
      overloaded{
          [](const young::Power& f) {
            std::ostringstream s;
            s << "power(p=" << f.p << ",coef=" << f.coef << ")";
            return s.str();
          },
          [](const young::PowerOverP& f) {
            std::ostringstream s;
            s << "power_over_p(p=" << f.p << ")";
            return s.str();
          },
          [](const young::Exponential&) { return std::string("exponential"); },
          [](const young::Entropy&) { return std::string("entropy"); },
          [](const young::IndicatorBall& f) {
            std::ostringstream s;
            s << "indicator_ball(a=" << f.a << ")";
            return s.str();
          },
          [](const young::Tabulated& f) {
            return "tabulated(" + std::to_string(f.x.size()) + " nodes)";
          },
          [](const young::NumericConjugate& f) { return "conjugate(" + f.primal->name() + ")"; },
      },
      kind_);
}

double YoungFunction::domain_bound() const {
  if (const auto* ball = std::get_if<young::IndicatorBall>(&kind_)) return ball->a;
  if (const auto* conj = std::get_if<young::NumericConjugate>(&kind_)) {
    // Finite exactly below the primal's asymptotic slope.
    if (const auto* tab = std::get_if<young::Tabulated>(&conj->primal->kind())) {
      const std::size_t k = tab->x.size() - 1;
      return (tab->phi[k] - tab->phi[k - 1]) / (tab->x[k] - tab->x[k - 1]);
    }
  }
  return kInf;
}

double evaluate(const YoungFunction& phi, double x) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("Young function argument must be nonnegative");
  return std::visit(
      overloaded{
          [x](const young::Power& f) { return f.coef * std::pow(x, f.p); },
          [x](const young::PowerOverP& f) { return std::pow(x, f.p) / f.p; },
          [x](const young::Exponential&) { return std::expm1(x); },
          [x](const young::Entropy&) { return x <= 1.0 ? 0.0 : x * std::log(x) - x + 1.0; },
          [x](const young::IndicatorBall& f) { return x <= f.a ? 0.0 : kInf; },
          [x](const young::Tabulated& f) { return tabulated_value(f, x); },
          [x](const young::NumericConjugate& f) {
            return detail::conjugate_sup(*f.primal, x).value;
          },
      },
      phi.kind());
}

double derivative(const YoungFunction& phi, double x) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("Young function argument must be nonnegative");
  return std::visit(
      overloaded{
          [x](const young::Power& f) {
            return f.p == 1.0 ? f.coef : f.coef * f.p * std::pow(x, f.p - 1.0);
          },
          [x](const young::PowerOverP& f) { return std::pow(x, f.p - 1.0); },
          [x](const young::Exponential&) { return std::exp(x); },
          [x](const young::Entropy&) { return x < 1.0 ? 0.0 : std::log(x); },
          [x](const young::IndicatorBall& f) { return x < f.a ? 0.0 : kInf; },
          [x](const young::Tabulated& f) { return tabulated_slope(f, x); },
          [x](const young::NumericConjugate& f) {
            return detail::conjugate_sup(*f.primal, x).argmax;
          },
      },
      phi.kind());
}

YoungFunction conjugate(const YoungFunction& phi) {
  return std::visit(
      overloaded{
          [](const young::Power& f) -> YoungFunction {
            if (f.p == 1.0) return young::IndicatorBall{f.coef};
            // sup_x {x y - c x^p} = (p-1) c (y/(c p))^q
            const double q = f.p / (f.p - 1.0);
            return young::Power{q, (f.p - 1.0) * f.coef * std::pow(f.coef * f.p, -q)};
          },
          [](const young::PowerOverP& f) -> YoungFunction {
            return young::PowerOverP{f.p / (f.p - 1.0)};
          },
          [](const young::Exponential&) -> YoungFunction { return young::Entropy{}; },
          [](const young::Entropy&) -> YoungFunction { return young::Exponential{}; },
          [](const young::IndicatorBall& f) -> YoungFunction { return young::Power{1.0, f.a}; },
          [&phi](const young::Tabulated&) -> YoungFunction {
            return young::NumericConjugate{std::make_shared<const YoungFunction>(phi)};
          },
          [](const young::NumericConjugate& f) -> YoungFunction { return *f.primal; },
      },
      phi.kind());
}

namespace detail {

ConjugateSup conjugate_sup(const YoungFunction& phi, double y) {
  if (y < 0.0 || std::isnan(y)) throw DomainError("conjugate argument must be nonnegative");
  auto supremand = [&](double x) { return x * y - evaluate(phi, x); };

  double scale = 1.0;
  if (const auto* tab = std::get_if<young::Tabulated>(&phi.kind())) scale = tab->x.back();
  double hi = 10.0 * scale;
  double f_hi = supremand(hi);
  double f_half = supremand(hi / 2.0);
  int doublings = 0;
  while (f_hi > f_half) {
    if (++doublings > 200) return {kInf, kInf};
    hi *= 2.0;
    f_half = f_hi;
    f_hi = supremand(hi);
  }
  auto best = optim::golden_section([&](double x) { return -supremand(x); }, 0.0, hi, 1e-12);
  // The sup over [0, hi] may sit at x = 0 exactly for small y.
  const double at_zero = supremand(0.0);
  if (at_zero >= -best.value) return {at_zero, 0.0};
  return {-best.value, best.argmin};
}

}  // namespace detail

bool check_delta2(const YoungFunction& phi, double x0, double K) {
  if (!(x0 > 0.0) || !(K > 0.0)) throw DomainError("delta-2 check needs x0 > 0 and K > 0");
  if (const auto* f = std::get_if<young::Power>(&phi.kind()))
    return std::pow(2.0, f->p) <= K * (1.0 + 1e-15);
  if (const auto* f = std::get_if<young::PowerOverP>(&phi.kind()))
    return std::pow(2.0, f->p) <= K * (1.0 + 1e-15);
  if (std::holds_alternative<young::Exponential>(phi.kind())) return false;
  if (const auto* f = std::get_if<young::IndicatorBall>(&phi.kind())) return x0 > f->a;
  // Logarithmic grid x0 * 2^(k/16) up to x0 * 2^40.
  for (int k = 0; k <= 16 * 40; ++k) {
    const double x = x0 * std::exp2(k / 16.0);
    const double lhs = evaluate(phi, 2.0 * x);
    const double rhs = K * evaluate(phi, x);
    if (std::isinf(lhs) && std::isinf(rhs)) continue;
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) return false;
  }
  return true;
}

MusielakFamily::MusielakFamily(std::vector<YoungFunction> per_atom)
    : per_atom_(std::move(per_atom)) {
  if (per_atom_.empty()) throw DomainError("Musielak family needs at least one atom");
}

MusielakFamily MusielakFamily::uniform(std::size_t n, const YoungFunction& phi) {
  return MusielakFamily(std::vector<YoungFunction>(n, phi));
}

bool MusielakFamily::atom_independent() const {
  return std::all_of(per_atom_.begin(), per_atom_.end(),
                     [&](const YoungFunction& f) { return f == per_atom_.front(); });
}

MusielakFamily MusielakFamily::conjugate() const {
  std::vector<YoungFunction> out;
  out.reserve(per_atom_.size());
  for (const auto& f : per_atom_) out.push_back(kothe::conjugate(f));
  return MusielakFamily(std::move(out));
}

}  // namespace kothe
