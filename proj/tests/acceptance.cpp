// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "kothe/duality.hpp"
#include "kothe/rearrange.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace kothe;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

// ---------------------------------------------------------------------------------------------

Outcome cvar_identity() {
  gen::Gen g(101);
  double worst = 0.0, worst_oracle = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = g.index(2, 16);
    const auto space = g.space(n, k % 2 == 0);
    const Rv u = k % 5 == 0 ? g.tied_rv(n) : g.rv(n);
    const StepFunction q = quantile(space, u);
    for (int j = 0; j <= 10; ++j) {
      const double t = j == 0 ? 1e-3 : j / 10.0;
      const double lhs = quantile_integral(q, t);
      worst = std::max(worst, std::abs(lhs - cvar_infimum(space, u, t)));
      worst_oracle = std::max(worst_oracle, std::abs(lhs - oracle::running_integral(space, u, t)));
    }
  }
  return {worst <= 1e-10 && worst_oracle <= 1e-10,
          "max |F - cvar| = " + sci(worst) + ", max |F - oracle| = " + sci(worst_oracle)};
}

Outcome luxemburg_equals_lp() {
  gen::Gen g(202);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = g.index(1, 12);
    const auto space = g.space(n, k % 3 == 0);
    const Rv u = g.rv(n, g.uniform(0.1, 10.0));
    const double p = k % 10 == 0 ? 1.0 : g.uniform(1.0, 6.0);
    const double lux = luxemburg_norm(space, u, MusielakFamily::uniform(n, YoungFunction::power(p)));
    const double ref = oracle::lp(space, u, p);
    worst = std::max(worst, std::abs(lux - ref) / ref);
  }
  return {worst <= 1e-8, "max relative error = " + sci(worst)};
}

Outcome marcinkiewicz_fundamental() {
  const auto space = FiniteProbSpace::uniform(8);
  double worst = 0.0, worst_ff = 0.0;
  for (double a : {0.5, 0.75}) {
    const PhiConcave phi = PhiConcave::power_root(a);
    const auto spec = SeminormSpec::marcinkiewicz(phi);
    const auto ff = fundamental_functions(space, spec);
    for (unsigned mask = 1; mask < 256; ++mask) {
      std::vector<std::size_t> atoms;
      for (std::size_t i = 0; i < 8; ++i)
        if (mask & (1u << i)) atoms.push_back(i);
      const double pa = static_cast<double>(atoms.size()) / 8.0;
      const double expected = pa / std::pow(pa, a);
      worst = std::max(worst, std::abs(marcinkiewicz_norm(space, indicator(space, atoms), phi) - expected));
      for (std::size_t k = 0; k < ff.t.size(); ++k)
        if (std::abs(ff.t[k] - pa) < 1e-12) {
          worst_ff = std::max(worst_ff, std::abs(ff.upper[k] - expected));
          worst_ff = std::max(worst_ff, std::abs(ff.lower[k] - expected));
        }
    }
  }
  return {worst <= 1e-12 && worst_ff <= 1e-12,
          "255 subsets x 2 phi, max error = " + sci(worst) + ", fundamental fn error = " + sci(worst_ff)};
}

Outcome lorentz_polar_of_marcinkiewicz() {
  gen::Gen g(404);
  double worst_polar = 0.0, worst_bipolar = 0.0, worst_oracle = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = g.index(2, 8);
    const auto space = FiniteProbSpace::uniform(n);
    const double a = k % 2 == 0 ? 0.5 : g.uniform(0.2, 1.0);
    const PhiConcave phi = PhiConcave::power_root(a);
    const auto spec = SeminormSpec::marcinkiewicz(phi);
    const Rv y = k % 7 == 0 ? g.tied_rv(n) : g.rv(n);
    const double lor = lorentz_norm(space, y, phi);
    worst_oracle = std::max(
        worst_oracle, std::abs(lor - oracle::lorentz_atoms(space, y, [&](double t) { return std::pow(t, a); })));
    const PolarResult r = polar(space, spec, y);
    worst_polar = std::max(worst_polar, std::abs(r.value - lor));
    const Rv u = g.rv(n);
    worst_bipolar = std::max(worst_bipolar, verify_bipolar(space, spec, u).rel_gap);
  }
  return {worst_polar <= 1e-5 && worst_bipolar <= 1e-5 && worst_oracle <= 1e-12,
          "max |polar - lorentz| = " + sci(worst_polar) + ", max bipolar gap = " + sci(worst_bipolar)};
}

YoungFunction random_young(gen::Gen& g) {
  switch (g.index(0, 3)) {
    case 0:
      return YoungFunction::power(g.uniform(1.2, 4.0), g.uniform(0.5, 2.0));
    case 1:
      return YoungFunction::power_over_p(g.uniform(1.3, 4.0));
    case 2:
      return YoungFunction::exponential();
    default:
      return YoungFunction::power(2.0);
  }
}

Outcome sandwich() {
  gen::Gen g(505);
  double worst_lower = -kInf, worst_upper = -kInf, worst_amemiya = 0.0;
  double min_ratio = kInf, max_ratio = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = g.index(2, 6);
    const auto space = g.space(n, k % 2 == 0);
    std::vector<YoungFunction> fs;
    const bool same = k % 3 == 0;
    const YoungFunction base = random_young(g);
    for (std::size_t i = 0; i < n; ++i) fs.push_back(same ? base : random_young(g));
    const MusielakFamily fam(fs);
    const Rv y = g.rv(n);
    const SandwichReport s = verify_sandwich(space, fam, y, 1e-6);
    worst_lower = std::max(worst_lower, s.conjugate_norm - s.polar);
    worst_upper = std::max(worst_upper, s.polar - 2.0 * s.conjugate_norm);
    min_ratio = std::min(min_ratio, s.ratio);
    max_ratio = std::max(max_ratio, s.ratio);
    const double am = amemiya_dual_norm(space, y, fam);
    worst_amemiya = std::max(worst_amemiya, std::abs(am - s.polar) / std::max(1.0, am));
  }
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = g.index(2, 6);
    const auto space = g.space(n, k % 2 == 0);
    const RiskMeasureSpec rho =
        k % 2 == 0 ? RiskMeasureSpec::avar(g.uniform(0.1, 1.0)) : RiskMeasureSpec::entropic(g.uniform(0.2, 3.0));
    const Rv y = g.rv(n);
    const SandwichReport s = verify_sandwich(space, rho, y, 1e-6);
    worst_lower = std::max(worst_lower, s.conjugate_norm - s.polar);
    worst_upper = std::max(worst_upper, s.polar - 2.0 * s.conjugate_norm);
    min_ratio = std::min(min_ratio, s.ratio);
    max_ratio = std::max(max_ratio, s.ratio);
  }
  return {worst_lower <= 1e-6 && worst_upper <= 1e-6 && worst_amemiya <= 1e-5,
          "ratio in [" + std::to_string(min_ratio) + ", " + std::to_string(max_ratio) +
              "], worst lower slack " + sci(worst_lower) + ", worst upper slack " + sci(worst_upper) +
              ", max |amemiya - polar| = " + sci(worst_amemiya)};
}

std::vector<SeminormSpec> builtin_specs(const FiniteProbSpace& space) {
  const std::size_t n = space.size();
  return {
      SeminormSpec::lp(1.0),
      SeminormSpec::lp(2.0),
      SeminormSpec::lp(3.5),
      SeminormSpec::lp(kInf),
      SeminormSpec::luxemburg(MusielakFamily::uniform(n, YoungFunction::power(3.0))),
      SeminormSpec::luxemburg(MusielakFamily::uniform(n, YoungFunction::exponential())),
      SeminormSpec::luxemburg(MusielakFamily::uniform(n, YoungFunction::power_over_p(1.5))),
      SeminormSpec::marcinkiewicz(PhiConcave::power_root(0.5)),
      SeminormSpec::lorentz(PhiConcave::power_root(0.75)),
      SeminormSpec::risk(RiskMeasureSpec::avar(0.3)),
      SeminormSpec::risk(RiskMeasureSpec::entropic(1.5)),
      SeminormSpec::gen_orlicz(YoungFunction::power(2.0), SeminormSpec::lp(1.0)),
      SeminormSpec::gen_orlicz(YoungFunction::power(2.0), SeminormSpec::lorentz(PhiConcave::power_root(0.5))),
      conditional_max_seminorm(space, {0}),
  };
}

Outcome holder() {
  gen::Gen g(606);
  double worst = -kInf;
  std::string witness;
  int count = 0;
  while (count < 500) {
    const std::size_t n = g.index(2, 7);
    const auto space = g.space(n, g.coin());
    for (const auto& spec : builtin_specs(space)) {
      if (count >= 500) break;
      const Rv y = g.rv(n);
      const Rv u = count % 4 == 0 ? polar(space, spec, y).maximizer : g.rv(n);
      const HolderCheck h = verify_holder(space, spec, u, y, 1e-8);
      if (h.slack > worst) {
        worst = h.slack;
        witness = spec.name();
      }
      ++count;
    }
  }
  return {worst <= 1e-8, std::to_string(count) + " triples, worst slack " + sci(worst) + " (" + witness + ")"};
}

Outcome jensen() {
  gen::Gen g(707);
  double worst = -kInf;
  std::string witness;
  for (int s = 0; s < 8; ++s) {
    for (int k = 0; k < 200; ++k) {
      const std::size_t n = g.index(2, 10);
      const auto space = FiniteProbSpace::uniform(n);
      const std::vector<SeminormSpec> specs = {
          SeminormSpec::lp(1.0),
          SeminormSpec::lp(2.5),
          SeminormSpec::lp(kInf),
          SeminormSpec::luxemburg(MusielakFamily::uniform(n, YoungFunction::power(3.0))),
          SeminormSpec::luxemburg(MusielakFamily::uniform(n, YoungFunction::exponential())),
          SeminormSpec::marcinkiewicz(PhiConcave::power_root(0.5)),
          SeminormSpec::lorentz(PhiConcave::power_root(0.5)),
          SeminormSpec::lorentz(PhiConcave::power_root(0.8)),
      };
      const auto& spec = specs[s];
      const Rv u = g.rv(n);
      const Partition part(space, g.partition(n));
      const double d = seminorm_value(space, spec, conditional_expectation(space, u, part)) -
                       seminorm_value(space, spec, u);
      if (d > worst) {
        worst = d;
        witness = spec.name();
      }
    }
  }
  const FiniteProbSpace two({0.5, 0.5});
  const auto p = conditional_max_seminorm(two, {0});
  const double pa = seminorm_value(two, p, Rv{1.0, 0.0});
  const double pac = seminorm_value(two, p, Rv{0.0, 1.0});
  double worst_cm = -kInf;
  gen::Gen h(708);
  for (int k = 0; k < 200; ++k) {
    const Rv u = h.rv(2);
    worst_cm = std::max(worst_cm, seminorm_value(two, p, conditional_expectation(two, u, Partition::trivial(two))) -
                                      seminorm_value(two, p, u));
  }
  return {worst <= 1e-10 && pa == 1.0 && pac == 0.5 && worst_cm <= 1e-12,
          "worst p(E^G u) - p(u) = " + sci(worst) + " (" + witness + "); counterexample p(1_A) = " +
              std::to_string(pa) + ", p(1_Ac) = " + std::to_string(pac)};
}

Outcome gen_orlicz_dual() {
  gen::Gen g(808);
  double worst_l1 = 0.0, worst_polar = 0.0;
  bool sandwich_ok = true;
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = g.index(2, 6);
    const auto space = g.space(n, k % 2 == 0);
    const YoungFunction phi = k % 3 == 0 ? YoungFunction::power(2.0) : random_young(g);
    const Rv y = g.rv(n);
    const GenOrliczDual d = gen_orlicz_dual_norm(space, y, phi, SeminormSpec::lp(1.0));
    const double am = amemiya_dual_norm(space, y, MusielakFamily::uniform(n, phi));
    worst_l1 = std::max(worst_l1, std::abs(d.sum_form - am) / std::max(1.0, am));
  }
  double min_ratio = kInf, max_ratio = 0.0;
  const auto r = SeminormSpec::lorentz(PhiConcave::power_root(0.5));
  const YoungFunction phi = YoungFunction::power(2.0);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = g.index(2, 6);
    const auto space = FiniteProbSpace::uniform(n);
    const Rv y = g.rv(n);
    const SandwichReport s = verify_sandwich(space, GenOrliczPair{phi, r}, y, 1e-6);
    sandwich_ok = sandwich_ok && s.lower_holds && s.upper_holds;
    min_ratio = std::min(min_ratio, s.ratio);
    max_ratio = std::max(max_ratio, s.ratio);
    if (k < 10) {
      const double sum = gen_orlicz_dual_norm(space, y, phi, r).sum_form;
      worst_polar = std::max(worst_polar, std::abs(s.polar - sum) / std::max(1.0, s.polar));
    }
  }
  return {worst_l1 <= 1e-6 && sandwich_ok,
          "r = L1: max |dual - amemiya| = " + sci(worst_l1) + "; r = Lorentz: sandwich ratio in [" +
              std::to_string(min_ratio) + ", " + std::to_string(max_ratio) +
              "], max |sum form - polar| = " + sci(worst_polar)};
}

Outcome penalty_classification() {
  const auto space = FiniteProbSpace::uniform(4);
  const auto rho = RiskMeasureSpec::avar(0.5);
  const PenaltyResult finite = penalty(space, rho, Rv{1, 1, 0, 0});
  const PenaltyResult infinite = penalty(space, rho, Rv{4, 0, 0, 0});
  const bool ray_ok = !infinite.bounded && infinite.ray[0] > 0.0 && infinite.ray[1] == 0.0 &&
                      infinite.ray[2] == 0.0 && infinite.ray[3] == 0.0;
  const bool cls = finite.bounded && std::abs(finite.value) <= 1e-9 && ray_ok && std::isinf(infinite.value);

  gen::Gen g(909);
  double worst = -kInf;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = g.index(2, 6);
    const auto sp = g.space(n, k % 2 == 0);
    const RiskMeasureSpec r =
        k % 2 == 0 ? RiskMeasureSpec::avar(g.uniform(0.1, 1.0)) : RiskMeasureSpec::entropic(g.uniform(0.2, 3.0));
    const RiskDualNorm d = risk_dual_norm(sp, r, g.rv(n));
    worst = std::max(worst, d.penalty_norm - d.inf_form);
    worst = std::max(worst, d.inf_form - 2.0 * d.penalty_norm);
  }
  return {cls && worst <= 1e-6, std::string("alpha(1,1,0,0) = ") + std::to_string(finite.value) +
                                    ", alpha(4,0,0,0) = +inf along e_1: " + (ray_ok ? "yes" : "no") +
                                    "; worst sandwich slack " + sci(worst)};
}

Outcome singular_part() {
  gen::Gen g(1010);
  double worst = 0.0;
  bool dims = true;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = g.index(1, 12);
    const auto space = g.space(n, k % 4 == 0);
    const auto r = singular_part_report(space, 10, 1000 + k);
    worst = std::max(worst, r.max_reconstruction_error);
    dims = dims && r.singular_dimension == 0 && r.density_dimension == r.dual_dimension;
  }
  return {worst <= 1e-12 && dims, "100 spaces x 10 functionals, max reconstruction error " + sci(worst)};
}

// ---------------------------------------------------------------------------------------------

struct CliRun {
  int status;
  nlohmann::json out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(KOTHE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string text;
  std::array<char, 4096> buf{};
  while (pipe && fgets(buf.data(), buf.size(), pipe)) text += buf.data();
  const int raw = pipe ? pclose(pipe) : -1;
  CliRun r{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, nullptr};
  r.out = nlohmann::json::parse(text, nullptr, false);
  return r;
}

bool same9(double a, double b) { return std::llround(a * 1e9) == std::llround(b * 1e9); }

Outcome cli_end_to_end() {
  const std::string f = KOTHE_FIXTURES;
  auto sc = [&](const std::string& name) { return "--scenario " + f + "/" + name; };
  auto cf = [&](const std::string& name) { return "--config " + f + "/" + name; };
  std::vector<std::string> failures;
  auto expect_num = [&](const std::string& args, const std::string& key, double want) {
    const CliRun r = run_cli(args);
    if (r.status != 0 || r.out.is_discarded() || !r.out.contains(key) || !r.out[key].is_number() ||
        !same9(r.out[key].get<double>(), want) || r.out.value("schema", "") != "kothe.cli/1")
      failures.push_back(args + " [" + key + "]");
  };
  auto expect_vec = [&](const std::string& args, const std::string& key, const std::vector<double>& want) {
    const CliRun r = run_cli(args);
    bool ok = r.status == 0 && !r.out.is_discarded() && r.out.contains(key) && r.out[key].size() == want.size();
    for (std::size_t i = 0; ok && i < want.size(); ++i) ok = same9(r.out[key][i].get<double>(), want[i]);
    if (!ok) failures.push_back(args + " [" + key + "]");
  };

  expect_num("norm " + sc("u4132.csv") + " " + cf("lp1.cfg"), "norm", 2.5);
  expect_num("norm " + sc("u4132.csv") + " " + cf("marcinkiewicz_sqrt.cfg"), "norm", 2.25 / std::sqrt(0.75));
  expect_num("norm " + sc("zero.csv") + " " + cf("lp2.cfg"), "norm", 0.0);
  expect_num("dual " + sc("y2000.csv") + " " + cf("lp2.cfg"), "polar", 1.0);
  expect_num("dual " + sc("y2000.csv") + " " + cf("lp2.cfg"), "closed_form", 1.0);
  expect_num("dual " + sc("y2000.csv") + " " + cf("lp2.cfg"), "gap", 0.0);
  expect_num("dual " + sc("indicator.csv") + " " + cf("marcinkiewicz_sqrt.cfg"), "polar", 0.5);
  expect_num("dual " + sc("u4132.csv") + " " + cf("lp1.cfg"), "polar", 4.0);
  expect_vec("rearrange " + sc("u4132.csv"), "breakpoints", {0, 0.25, 0.5, 0.75, 1});
  expect_vec("rearrange " + sc("u4132.csv"), "values", {4, 3, 2, 1});
  expect_vec("rearrange " + sc("constant.csv"), "values", {1.5});
  expect_vec("rearrange " + sc("weighted.csv"), "breakpoints", {0, 0.25, 1});
  expect_vec("rearrange " + sc("weighted.csv"), "values", {2, 1});
  expect_num("risk " + sc("u4132.csv") + " " + cf("avar05.cfg"), "rho", 3.5);
  expect_num("risk " + sc("u4132.csv") + " " + cf("avar05.cfg"), "norm", 3.5);
  expect_num("risk " + sc("u4132.csv") + " " + cf("avar1.cfg"), "rho", 2.5);
  expect_num("risk " + sc("constant.csv") + " " + cf("entropic1.cfg"), "rho", 1.5);

  int builtin = 0;
  for (const char* cfg : {"lp1.cfg", "lp2.cfg", "lp3.cfg", "lpinf.cfg", "luxemburg_power3.cfg",
                          "luxemburg_exponential.cfg", "marcinkiewicz_sqrt.cfg", "lorentz_sqrt.cfg",
                          "avar05.cfg", "entropic1.cfg", "gen_orlicz_lorentz.cfg", "conditional_max.cfg"}) {
    const CliRun r = run_cli("check --random 6 --seed 7 " + cf(cfg));
    if (r.status != 0 || r.out.is_discarded() || !r.out.value("all_passed", false))
      failures.push_back(std::string("check ") + cfg + " exit " + std::to_string(r.status));
    ++builtin;
  }
  const CliRun broken = run_cli("check --random 6 --seed 7 " + cf("broken_custom.cfg"));
  if (broken.status != 1) failures.push_back("broken custom spec exit " + std::to_string(broken.status));
  const CliRun scen = run_cli("check " + sc("u4132.csv") + " " + cf("marcinkiewicz_sqrt.cfg"));
  if (scen.status != 0) failures.push_back("check on scenario file exit " + std::to_string(scen.status));

  std::string detail = "17 value comparisons, " + std::to_string(builtin) + " check runs";
  for (const auto& fl : failures) detail += "\n      mismatch: " + fl;
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria = {
      {"cvar identity on random instances", cvar_identity, 1.0},
      {"luxemburg norm of power Young functions equals L^p", luxemburg_equals_lp, 1.0},
      {"marcinkiewicz fundamental function P(A)/phi(P(A))", marcinkiewicz_fundamental, 0.0},
      {"lorentz norm is the polar of marcinkiewicz, bipolar round trip", lorentz_polar_of_marcinkiewicz, 30.0},
      {"sandwich ||y||_H* <= polar <= 2 ||y||_H*, amemiya agreement", sandwich, 0.0},
      {"holder inequality over built-in specs", holder, 0.0},
      {"jensen contraction and two-point counterexample", jensen, 0.0},
      {"generalized orlicz dual: L1 reduction and lorentz sandwich", gen_orlicz_dual, 60.0},
      {"risk penalty classification and dual-norm sandwich", penalty_classification, 0.0},
      {"every functional is a density (no singular part)", singular_part, 0.0},
      {"cli end-to-end", cli_end_to_end, 0.0},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = o.passed;
    std::string timing = std::to_string(secs).substr(0, 6) + " s";
    if (criteria[k].budget_seconds > 0.0) {
      timing += " / budget " + std::to_string(static_cast<int>(criteria[k].budget_seconds)) + " s";
      if (secs > criteria[k].budget_seconds) ok = false;
    }
    if (!ok) ++failed;
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << (k + 1) << "] " << criteria[k].label << " :: " << o.detail
              << " (" << timing << ")" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
