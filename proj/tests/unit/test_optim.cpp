#include <doctest.h>

#include <cmath>

#include "kothe/optim.hpp"

using namespace kothe;
using doctest::Approx;

TEST_SUITE("optim") {
  TEST_CASE("gauge bisection") {
    CHECK(optim::gauge_bisection([](double b) { return 3.0 / b; }, 1.0, 1e-12) == Approx(3.0));
    CHECK(optim::gauge_bisection([](double b) { return 1e-4 / (b * b); }, 100.0, 1e-12) == Approx(1e-2));
    CHECK(optim::gauge_bisection([](double) { return 0.0; }, 1.0, 1e-12) == 0.0);
    CHECK(std::isinf(optim::gauge_bisection([](double) { return 2.0; }, 1.0, 1e-12)));
  }

  TEST_CASE("one-dimensional minimization") {
    const auto m = optim::minimize_on_positive_axis([](double b) { return 4.0 / b + b; }, 10.0, 1e-12);
    CHECK(m.argmin == Approx(2.0).epsilon(1e-5));
    CHECK(m.value == Approx(4.0).epsilon(1e-10));
    const auto g = optim::golden_section([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-12);
    CHECK(g.argmin == Approx(0.3).epsilon(1e-5));
    const auto ext = optim::minimize_on_positive_axis(
        [](double b) { return b < 1.0 ? kInf : b; }, 0.01, 1e-12);
    CHECK(ext.value == Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("ellipsoid on a linear program over the simplex") {
    // min -(3x + 2y) subject to x + y <= 1, x, y >= 0.
    auto oracle = [](std::span<const double> x) {
      optim::Cut c;
      if (x[0] < 0.0 || x[1] < 0.0) {
        const std::size_t i = x[0] < x[1] ? 0 : 1;
        c.normal = {0.0, 0.0};
        c.normal[i] = -1.0;
        c.rhs = 0.0;
        return c;
      }
      if (x[0] + x[1] > 1.0) {
        c.normal = {1.0, 1.0};
        c.rhs = 1.0;
        return c;
      }
      c.feasible = true;
      c.value = -(3 * x[0] + 2 * x[1]);
      c.normal = {-3.0, -2.0};
      return c;
    };
    optim::EllipsoidOptions o;
    o.linear_objective = std::vector<double>{-3.0, -2.0};
    const std::vector<double> radii{1.5, 1.5};
    const auto r = optim::ellipsoid_minimize(oracle, {0.5, 0.5}, radii, o);
    CHECK(r.converged);
    CHECK(r.value == Approx(-3.0).epsilon(1e-9));
    CHECK(r.lower_bound <= r.value);
    CHECK(r.value - r.lower_bound <= 1e-9 * 3.0 + 1e-12);
  }

  TEST_CASE("finite difference gradient") {
    auto f = [](std::span<const double> x) { return x[0] * x[0] + 3 * x[1]; };
    const std::vector<double> x{2.0, -1.0};
    const auto g = optim::finite_difference_gradient(f, x);
    CHECK(g[0] == Approx(4.0).epsilon(1e-6));
    CHECK(g[1] == Approx(3.0).epsilon(1e-6));
  }
}
