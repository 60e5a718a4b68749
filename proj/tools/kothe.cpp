// Command-line front end: norms, polars, rearrangements, risk functionals and property checks
// on scenario files, with JSON output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <map>
#include <sstream>
#include <random>
#include <string>
#include <vector>

#include "kothe/duality.hpp"
#include "kothe/io.hpp"
#include "kothe/rearrange.hpp"

using nlohmann::json;
using namespace kothe;

namespace {

constexpr const char* kSchema = "kothe.cli/1";

enum Exit { kOk = 0, kCheckFailed = 1, kParse = 2, kConfig = 3, kNoConvergence = 4 };

struct Options {
  std::string scenario;
  std::string config;
  std::string column;
  int random = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tol = 1e-8;
  int trials = 20;
  bool json_output = true;
};

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

json vec(const Rv& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json envelope(const std::string& command) { return json{{"schema", kSchema}, {"command", command}}; }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void warn(const io::Scenario& sc) {
  for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_norm(const Options& o) {
  const auto sc = io::read_scenario_file(o.scenario);
  warn(sc);
  const auto cfg = io::NormConfig::parse_file(o.config);
  const auto spec = cfg.seminorm(sc.space.size());
  const Rv& u = sc.column(o.column);
  json j = envelope("norm");
  j["spec"] = spec.name();
  j["norm"] = number(seminorm_value(sc.space, spec, u));
  emit(j);
  return kOk;
}

int cmd_dual(const Options& o) {
  const auto sc = io::read_scenario_file(o.scenario);
  warn(sc);
  const auto cfg = io::NormConfig::parse_file(o.config);
  const auto spec = cfg.seminorm(sc.space.size());
  const Rv& y = sc.column(o.column);
  const PolarResult r = polar(sc.space, spec, y);
  const auto closed = polar_closed_form(sc.space, spec, y);
  json j = envelope("dual");
  j["spec"] = spec.name();
  j["polar"] = number(r.value);
  j["closed_form"] = closed ? number(*closed) : json(nullptr);
  j["gap"] = number(r.gap);
  j["method"] = to_string(r.method);
  j["converged"] = r.converged;
  j["maximizer"] = vec(r.maximizer);
  emit(j);
  if (!r.converged) {
    std::cerr << "error: polar optimization did not converge (gap " << r.gap << ")\n";
    return kNoConvergence;
  }
  return kOk;
}

int cmd_rearrange(const Options& o) {
  const auto sc = io::read_scenario_file(o.scenario);
  warn(sc);
  const Rv& u = sc.column(o.column);
  const StepFunction q = quantile(sc.space, u);
  json j = envelope("rearrange");
  j["breakpoints"] = q.breakpoints();
  j["values"] = q.values();
  json integrals = json::array();
  for (double t : q.breakpoints()) integrals.push_back(quantile_integral(q, t));
  j["integrals"] = integrals;
  emit(j);
  return kOk;
}

int cmd_risk(const Options& o) {
  const auto sc = io::read_scenario_file(o.scenario);
  warn(sc);
  const auto cfg = io::NormConfig::parse_file(o.config);
  if (!cfg.is_risk()) throw io::ConfigError("risk needs a risk-measure config (avar, entropic)");
  const auto rho = cfg.risk();
  const Rv& u = sc.column(o.column);
  const PenaltyResult pen = penalty(sc.space, rho, u.abs());
  json j = envelope("risk");
  j["spec"] = rho.name();
  j["rho"] = number(evaluate_risk(sc.space, rho, u));
  j["norm"] = number(risk_norm(sc.space, rho, u));
  const RiskDualNorm dual = risk_dual_norm(sc.space, rho, u);
  j["dual_norm"] = number(dual.inf_form);
  j["penalty_norm"] = number(dual.penalty_norm);
  j["penalty_finite"] = pen.bounded;
  j["penalty"] = pen.bounded ? number(pen.value) : json(nullptr);
  if (!pen.bounded) j["penalty_ray"] = vec(pen.ray);
  emit(j);
  return kOk;
}

struct Instance {
  FiniteProbSpace space;
  Rv u;
};

std::vector<Instance> check_instances(const Options& o) {
  std::vector<Instance> out;
  if (o.random > 0) {
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<std::size_t> size(2, 8);
    for (int k = 0; k < o.random; ++k) {
      const std::size_t atoms = size(rng);
      const std::uint64_t instance_seed = rng();
      const auto sc = io::random_scenario(atoms, instance_seed);
      out.push_back({sc.space, sc.columns[0]});
    }
    return out;
  }
  const auto sc = io::read_scenario_file(o.scenario);
  warn(sc);
  if (!o.column.empty()) {
    out.push_back({sc.space, sc.column(o.column)});
  } else {
    for (const auto& c : sc.columns) out.push_back({sc.space, c});
  }
  return out;
}

std::string describe(const Rv& v) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << ")";
  return s.str();
}

/// Folds one instance's check into the running summary. The A1 statistic is a lower constant
/// (smallest wins), A2 an upper one (largest wins).
void merge(PropertyCheck& into, const PropertyCheck& c, bool first) {
  if (first) {
    into.statistic = c.statistic;
  } else if (into.name == "axiom.A1") {
    into.statistic = std::min(into.statistic, c.statistic);
  } else {
    into.statistic = std::max(into.statistic, c.statistic);
  }
  if (c.worst_slack > into.worst_slack) into.worst_slack = c.worst_slack;
  if (!c.passed) {
    if (into.passed) into.witness = c.witness;
    into.passed = false;
  }
}

void record(PropertyCheck& c, double violation, double tol, const std::string& witness) {
  if (std::isnan(violation)) violation = kInf;
  if (violation > c.worst_slack) c.worst_slack = violation;
  if (violation > tol && c.passed) {
    c.passed = false;
    c.witness = witness;
  }
}

int cmd_check(const Options& o) {
  if (o.random > 0 && !o.seed_given) throw io::ParseError("--random needs an explicit --seed");
  if (o.random <= 0 && o.scenario.empty()) throw io::ParseError("check needs --scenario or --random N");
  const auto cfg = io::NormConfig::parse_file(o.config);
  const auto instances = check_instances(o);

  std::vector<PropertyCheck> checks;
  std::map<std::string, std::size_t> index;
  auto slot = [&](const std::string& name) -> PropertyCheck& {
    auto it = index.find(name);
    if (it != index.end()) return checks[it->second];
    index[name] = checks.size();
    checks.emplace_back(name);
    return checks.back();
  };

  std::mt19937_64 rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::string spec_name;
  bool converged = true;

  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto& inst = instances[k];
    const std::size_t n = inst.space.size();
    const SeminormSpec spec = cfg.seminorm(n);
    spec_name = spec.name();
    const std::string tag = "instance " + std::to_string(k) + " u=" + describe(inst.u);

    const CheckReport axioms = check_axioms(inst.space, spec, o.trials, o.seed + k, 1e-9);
    for (const auto& c : axioms.checks) {
      PropertyCheck tagged = c;
      if (!tagged.passed) tagged.witness = "instance " + std::to_string(k) + ": " + c.witness;
      merge(slot("axiom." + c.name), tagged, k == 0);
    }
    if (cfg.is_risk()) {
      const CheckReport ra = check_risk_axioms(inst.space, cfg.risk(), o.trials, o.seed + k, 1e-9);
      for (const auto& c : ra.checks) {
        PropertyCheck tagged = c;
        if (!tagged.passed) tagged.witness = "instance " + std::to_string(k) + ": " + c.witness;
        merge(slot("risk_axiom." + c.name), tagged, k == 0);
      }
    }

    PropertyCheck& cvar = slot("cvar_identity");
    const StepFunction q = quantile(inst.space, inst.u);
    for (int g = 1; g <= 10; ++g) {
      const double t = g / 10.0;
      record(cvar, std::abs(quantile_integral(q, t) - cvar_infimum(inst.space, inst.u, t)), 1e-10,
             tag + " t=" + std::to_string(t));
    }

    // Duality checks presuppose a seminorm; a spec failing the axioms is reported above.
    if (!axioms.all_passed()) continue;

    std::vector<double> yv(n);
    for (double& x : yv) x = normal(rng);
    const Rv y(yv);
    const PolarResult py = polar(inst.space, spec, y);
    converged = converged && py.converged;
    const double pu = seminorm_value(inst.space, spec, inst.u);
    record(slot("holder"), pairing(inst.space, inst.u, y) - pu * py.value, o.tol,
           tag + " y=" + describe(y));

    if (const auto closed = polar_closed_form(inst.space, spec, y))
      record(slot("polar_closed_form"), std::abs(py.value - *closed) / std::max(1.0, *closed), 1e-5,
             tag + " y=" + describe(y));

    if (const auto h = cfg.modular(n)) {
      const SandwichReport s = verify_sandwich(inst.space, *h, y, 1e-6);
      PropertyCheck& c = slot("sandwich");
      record(c, s.conjugate_norm - s.polar, 1e-6, tag + " y=" + describe(y));
      record(c, s.polar - 2.0 * s.conjugate_norm, 1e-6, tag + " y=" + describe(y));
    }

    const BipolarReport b = verify_bipolar(inst.space, spec, inst.u);
    record(slot("bipolar"), b.rel_gap, 1e-5, tag);
  }

  json j = envelope("check");
  j["spec"] = spec_name;
  j["instances"] = instances.size();
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    json e{{"name", c.name}, {"passed", c.passed}, {"worst_slack", number(c.worst_slack)}};
    if (!c.passed) e["witness"] = c.witness;
    if (c.name == "axiom.A1" || c.name == "axiom.A2") e["statistic"] = number(c.statistic);
    arr.push_back(e);
  }
  j["checks"] = arr;
  j["all_passed"] = all;
  j["converged"] = converged;
  emit(j);
  if (!all) {
    for (const auto& c : checks)
      if (!c.passed) std::cerr << "FAILED " << c.name << ": " << c.witness << "\n";
    return kCheckFailed;
  }
  return converged ? kOk : kNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, dual norms, rearrangements and risk functionals on finite probability spaces"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_config, bool needs_scenario) {
    auto* s = sub->add_option("--scenario", o.scenario, "CSV scenario file");
    if (needs_scenario) s->required();
    auto* c = sub->add_option("--config", o.config, "key=value spec file");
    if (needs_config) c->required();
    sub->add_option("--column", o.column, "value column (default: first)");
    sub->add_flag("--json", o.json_output, "JSON output (default)");
  };

  auto* norm = app.add_subcommand("norm", "seminorm value of a column");
  add_common(norm, true, true);
  auto* dual = app.add_subcommand("dual", "polar (dual) seminorm of a column");
  add_common(dual, true, true);
  auto* rearr = app.add_subcommand("rearrange", "decreasing rearrangement of a column");
  add_common(rearr, false, true);
  auto* risk = app.add_subcommand("risk", "risk measure, its norm, dual norm and penalty");
  add_common(risk, true, true);
  auto* check = app.add_subcommand("check", "axiom and duality property suite");
  add_common(check, true, false);
  check->add_option("--random", o.random, "number of random instances");
  check->add_option("--seed", o.seed, "seed for --random")->each([&](const std::string&) { o.seed_given = true; });
  check->add_option("--tol", o.tol, "tolerance for the Holder check");
  check->add_option("--trials", o.trials, "random trials per axiom check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*norm) return cmd_norm(o);
    if (*dual) return cmd_dual(o);
    if (*rearr) return cmd_rearrange(o);
    if (*risk) return cmd_risk(o);
    if (*check) return cmd_check(o);
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ConvergenceError& e) {
    json j = envelope("error");
    j["error"] = e.what();
    j["best_value"] = number(e.best_value());
    j["gap"] = number(e.gap());
    emit(j);
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
