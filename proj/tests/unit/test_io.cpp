#include <doctest.h>

#include <sstream>

#include "kothe/io.hpp"

using namespace kothe;
using doctest::Approx;

namespace {

io::Scenario scenario(const std::string& text) {
  std::istringstream in(text);
  return io::read_scenario(in);
}

io::NormConfig config(const std::string& text) {
  std::istringstream in(text);
  return io::NormConfig::parse(in);
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("scenario files") {
    const io::Scenario s = scenario("u,v\n4,1\n1,0\n3,0\n2,0\n");
    CHECK(s.space.size() == 4);
    CHECK(s.space.is_uniform());
    CHECK(s.names == std::vector<std::string>{"u", "v"});
    CHECK(s.column("u") == Rv{4, 1, 3, 2});
    CHECK(s.column("") == Rv{4, 1, 3, 2});
    CHECK_THROWS_AS(s.column("w"), io::ParseError);

    const io::Scenario w = scenario("# weighted\nprob,u\n0.25,2\n0.75,1\n");
    CHECK(w.space.prob(0) == Approx(0.25));
    CHECK(w.column("u") == Rv{2, 1});
    CHECK(w.warnings.empty());
  }

  TEST_CASE("probability renormalization policy") {
    const io::Scenario quiet = scenario("prob,u\n0.5,1\n0.5000000000001,2\n");
    CHECK(quiet.warnings.empty());
    const io::Scenario noisy = scenario("prob,u\n0.5,1\n0.5000005,2\n");
    CHECK(noisy.warnings.size() == 1);
    CHECK(noisy.space.prob(0) + noisy.space.prob(1) == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(scenario("prob,u\n0.5,1\n0.6,2\n"), io::ParseError);
    CHECK_THROWS_AS(scenario("prob,u\n0,1\n1,2\n"), io::ParseError);
  }

  TEST_CASE("malformed scenarios") {
    CHECK_THROWS_AS(scenario(""), io::ParseError);
    CHECK_THROWS_AS(scenario("u\n"), io::ParseError);
    CHECK_THROWS_AS(scenario("u,v\n1\n"), io::ParseError);
    CHECK_THROWS_AS(scenario("u\nabc\n"), io::ParseError);
    CHECK_THROWS_AS(scenario("u\nnan\n"), io::ParseError);
    CHECK_THROWS_AS(io::read_scenario_file("/nonexistent/file.csv"), io::ParseError);
  }

  TEST_CASE("random scenarios are reproducible") {
    const io::Scenario a = io::random_scenario(6, 7), b = io::random_scenario(6, 7), c = io::random_scenario(6, 8);
    CHECK(a.column("x") == b.column("x"));
    CHECK_FALSE(a.column("x") == c.column("x"));
    CHECK(a.space.is_uniform());
  }

  TEST_CASE("norm configs") {
    CHECK(config("kind=lp\np=2\n").seminorm(4) == SeminormSpec::lp(2.0));
    CHECK(config("kind = lp\np = inf\n").seminorm(3) == SeminormSpec::lp(kInf));
    CHECK(config("# comment\nkind=marcinkiewicz\nphi=sqrt\n").seminorm(4) ==
          SeminormSpec::marcinkiewicz(PhiConcave::power_root(0.5)));
    CHECK(config("kind=luxemburg\nphi=power\nphi_param=3\n").seminorm(2) ==
          SeminormSpec::luxemburg(MusielakFamily::uniform(2, YoungFunction::power(3.0))));
    const io::NormConfig avar = config("kind=avar\nlevel=0.5\n");
    CHECK(avar.is_risk());
    CHECK(avar.risk() == RiskMeasureSpec::avar(0.5));
    CHECK(avar.seminorm(4) == SeminormSpec::risk(RiskMeasureSpec::avar(0.5)));
    CHECK(avar.modular(4).has_value());
    CHECK_FALSE(config("kind=lorentz\nphi=sqrt\n").modular(4).has_value());
    CHECK(config("kind=gen_orlicz\nphi=power\nphi_param=2\ninner_kind=lorentz\ninner_param=0.5\n").seminorm(4) ==
          SeminormSpec::gen_orlicz(YoungFunction::power(2.0), SeminormSpec::lorentz(PhiConcave::power_root(0.5))));
    CHECK(config("kind=custom\nname=conditional_max\n").seminorm(2).name() == "custom(conditional_max)");
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(config("kind=lp\np=0.5\n"), io::ConfigError);
    CHECK_THROWS_AS(config("kind=banach\n"), io::ConfigError);
    CHECK_THROWS_AS(config("kind=lp\ncolour=red\n"), io::ConfigError);
    CHECK_THROWS_AS(config("kind=lp\nkind=lp\n"), io::ConfigError);
    CHECK_THROWS_AS(config("p=2\n"), io::ConfigError);
    CHECK_THROWS_AS(config("kind=lp\np=two\n"), io::ConfigError);
    CHECK_THROWS_AS(config("kind lp\n"), io::ParseError);
    CHECK_THROWS_AS(config("kind=custom\nname=mystery\n"), io::ConfigError);
    CHECK_THROWS_AS(config("kind=luxemburg\nphi=tabulated\n"), io::ConfigError);
  }
}
