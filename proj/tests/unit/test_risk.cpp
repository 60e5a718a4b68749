#include <doctest.h>

#include "kothe/duality.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace kothe;
using doctest::Approx;

TEST_SUITE("risk") {
  const auto u4 = FiniteProbSpace::uniform(4);
  const Rv u4132{4, 1, 3, 2};

  TEST_CASE("evaluation") {
    CHECK(evaluate_risk(u4, RiskMeasureSpec::avar(1.0), Rv{4, -1, 3, 2}) == Approx(2.0));
    CHECK(evaluate_risk(u4, RiskMeasureSpec::avar(0.5), u4132) == Approx(3.5));
    CHECK(evaluate_risk(u4, RiskMeasureSpec::entropic(0.7), Rv::constant(4, -1.25)) == Approx(-1.25));
    CHECK(evaluate_risk(u4, RiskMeasureSpec::entropic(800.0), Rv{1, 2, 3, 4}) == Approx(4.0 + std::log(0.25) / 800.0));
    CHECK_THROWS_AS(RiskMeasureSpec::avar(0.0), DomainError);
    CHECK_THROWS_AS(RiskMeasureSpec::avar(1.5), DomainError);
    CHECK_THROWS_AS(RiskMeasureSpec::entropic(-1.0), DomainError);
  }

  TEST_CASE("avar matches the rearrangement oracle") {
    gen::Gen g(41);
    for (int k = 0; k < 100; ++k) {
      const std::size_t n = g.index(1, 12);
      const auto s = g.space(n, g.coin());
      const Rv u = g.rv(n);
      const double t = g.uniform(0.05, 1.0);
      CHECK(std::abs(evaluate_risk(s, RiskMeasureSpec::avar(t), u) - oracle::avar_signed(s, u, t)) <= 1e-10);
      const Rv a = u.abs();
      CHECK(std::abs(evaluate_risk(s, RiskMeasureSpec::avar(t), a) - oracle::running_integral(s, a, t) / t) <= 1e-10);
      CHECK(std::abs(risk_norm(s, RiskMeasureSpec::avar(t), a) - evaluate_risk(s, RiskMeasureSpec::avar(t), a)) <=
            1e-10 * std::max(1.0, a.max_abs()));
    }
  }

  TEST_CASE("risk norms") {
    CHECK(risk_norm(u4, RiskMeasureSpec::entropic(1.0), Rv::constant(4, 2.0)) == Approx(2.0).epsilon(1e-10));
    CHECK(risk_norm(u4, RiskMeasureSpec::avar(0.5), u4132) == Approx(3.5).epsilon(1e-10));
    CHECK(risk_norm(u4, RiskMeasureSpec::entropic(1.0), Rv::zeros(4)) == 0.0);
  }

  TEST_CASE("penalty classification") {
    const auto rho = RiskMeasureSpec::avar(0.5);
    const PenaltyResult a = penalty(u4, rho, Rv{1, 1, 0, 0});
    CHECK(a.bounded);
    CHECK(std::abs(a.value) <= 1e-9);
    const PenaltyResult b = penalty(u4, rho, Rv{4, 0, 0, 0});
    CHECK_FALSE(b.bounded);
    CHECK(std::isinf(b.value));
    CHECK(b.ray[0] > 0.0);
    CHECK(b.ray[1] == 0.0);
    const PenaltyResult z = penalty(u4, rho, Rv::zeros(4));
    CHECK(z.bounded);
    CHECK(z.value == 0.0);
    CHECK_THROWS_AS(penalty(u4, rho, Rv{1, -1, 0, 0}), DomainError);
    CHECK_FALSE(penalty(u4, RiskMeasureSpec::entropic(1.0), Rv::constant(4, 1.5)).bounded);
  }

  TEST_CASE("entropic penalty is relative entropy on densities") {
    const FiniteProbSpace s({0.2, 0.3, 0.5});
    const Rv m{2.0, 1.0, 0.6};  // E m = 1
    double h = 0.0;
    for (std::size_t i = 0; i < 3; ++i) h += s.prob(i) * m[i] * std::log(m[i]);
    const PenaltyResult p = penalty(s, RiskMeasureSpec::entropic(2.0), m);
    CHECK(p.bounded);
    CHECK(p.value == Approx(h / 2.0).epsilon(1e-7));
  }

  TEST_CASE("dual norms and sandwich") {
    CHECK(risk_dual_norm(u4, RiskMeasureSpec::avar(0.5), Rv::zeros(4)).inf_form == 0.0);
    const RiskDualNorm ones = risk_dual_norm(u4, RiskMeasureSpec::avar(0.5), Rv::constant(4, 1.0));
    CHECK(ones.inf_form == Approx(1.0).epsilon(1e-6));
    CHECK(ones.polar == Approx(1.0).epsilon(1e-6));
    gen::Gen g(42);
    for (int k = 0; k < 30; ++k) {
      const std::size_t n = g.index(1, 6);
      const auto s = g.space(n, g.coin());
      const RiskMeasureSpec rho = k % 2 ? RiskMeasureSpec::avar(g.uniform(0.1, 1.0))
                                        : RiskMeasureSpec::entropic(g.uniform(0.2, 3.0));
      const Rv y = g.rv(n);
      const RiskDualNorm d = risk_dual_norm(s, rho, y);
      CHECK(d.penalty_norm <= d.inf_form + 1e-6);
      CHECK(d.inf_form <= 2.0 * d.penalty_norm + 1e-6);
      const Rv u = g.rv(n);
      CHECK(pairing(s, u, y) <= risk_norm(s, rho, u) * d.inf_form + 1e-8);
    }
  }

  TEST_CASE("axiom reports") {
    gen::Gen g(43);
    for (int k = 0; k < 10; ++k) {
      const std::size_t n = g.index(1, 8);
      const auto s = g.space(n, g.coin());
      CHECK(check_risk_axioms(s, RiskMeasureSpec::avar(g.uniform(0.05, 1.0)), 50, k).all_passed());
      CHECK(check_risk_axioms(s, RiskMeasureSpec::entropic(g.uniform(0.1, 5.0)), 50, k).all_passed());
    }
    const RiskMeasureSpec sq = riskm::Custom{"mean_square",
                                             [](const FiniteProbSpace& s, const Rv& u) {
                                               double a = 0;
                                               for (std::size_t i = 0; i < u.size(); ++i) a += s.prob(i) * u[i] * u[i];
                                               return a;
                                             },
                                             {}, true};
    const CheckReport r = check_risk_axioms(u4, sq, 50);
    CHECK_FALSE(r.find("translation")->passed);
  }

  TEST_CASE("subgradients support the risk measure") {
    gen::Gen g(44);
    for (int k = 0; k < 40; ++k) {
      const std::size_t n = g.index(1, 8);
      const auto s = g.space(n, g.coin());
      const RiskMeasureSpec rho = k % 2 ? RiskMeasureSpec::avar(g.uniform(0.1, 1.0))
                                        : RiskMeasureSpec::entropic(g.uniform(0.2, 3.0));
      const Rv u = g.rv(n);
      const Rv d = risk_subgradient(s, rho, u);
      CHECK(std::abs(expectation(s, d) - 1.0) <= 1e-9);
      for (double x : d) CHECK(x >= -1e-12);
      for (int j = 0; j < 5; ++j) {
        const Rv v = g.rv(n);
        CHECK(evaluate_risk(s, rho, v) >= evaluate_risk(s, rho, u) + pairing(s, d, v - u) - 1e-9);
      }
    }
  }
}
