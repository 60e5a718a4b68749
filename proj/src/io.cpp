#include "kothe/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace kothe::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> to_number(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "+inf") return kInf;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) return std::nullopt;
  return v;
}

double require_number(const std::map<std::string, std::string>& e, const std::string& key) {
  auto it = e.find(key);
  if (it == e.end()) throw ConfigError("missing key '" + key + "'");
  auto v = to_number(it->second);
  if (!v) throw ConfigError("key '" + key + "' is not a number: " + it->second);
  return *v;
}

std::optional<double> optional_number(const std::map<std::string, std::string>& e, const std::string& key) {
  if (!e.count(key)) return std::nullopt;
  return require_number(e, key);
}

std::string value_or(const std::map<std::string, std::string>& e, const std::string& key,
                     const std::string& fallback) {
  auto it = e.find(key);
  return it == e.end() ? fallback : it->second;
}

std::pair<std::vector<double>, std::vector<double>> read_two_columns(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table " + path.string());
  std::vector<double> a, b;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    std::string x, y;
    if (!(row >> x)) continue;
    if (!(row >> y)) throw ConfigError("table row needs two columns: " + path.string());
    auto vx = to_number(x), vy = to_number(y);
    if (!vx || !vy) {
      if (a.empty()) continue;  // header
      throw ConfigError("non-numeric table entry in " + path.string());
    }
    a.push_back(*vx);
    b.push_back(*vy);
  }
  return {a, b};
}

const std::set<std::string> kKnownKeys = {"kind",     "p",           "phi",        "phi_param",
                                          "phi_file", "level",       "theta",      "inner_kind",
                                          "inner_param", "name"};

const std::set<std::string> kRiskKinds = {"avar", "entropic"};

RiskMeasureSpec make_risk(const std::string& kind, std::optional<double> param) {
  if (kind == "avar") {
    if (!param) throw ConfigError("avar needs a level");
    return RiskMeasureSpec::avar(*param);
  }
  if (kind == "entropic") {
    if (!param) throw ConfigError("entropic needs theta");
    return RiskMeasureSpec::entropic(*param);
  }
  throw ConfigError("unknown risk measure '" + kind + "'");
}

RiskMeasureSpec mean_square_risk() {
  riskm::Custom c;
  c.name = "mean_square";
  c.evaluate = [](const FiniteProbSpace& space, const Rv& u) { return pairing(space, u, u); };
  c.subgradient = [](const FiniteProbSpace&, const Rv& u) { return 2.0 * u; };
  c.law_invariant = true;
  return c;
}

SeminormSpec signed_mean_seminorm() {
  seminorm::Custom c;
  c.name = "signed_mean";
  c.evaluate = [](const FiniteProbSpace& space, const Rv& u) { return expectation(space, u); };
  c.subgradient = [](const FiniteProbSpace& space, const Rv&) { return Rv::constant(space.size(), 1.0); };
  c.rearrangement_invariant = false;
  return c;
}

}  // namespace

const Rv& Scenario::column(const std::string& name) const {
  if (name.empty()) return columns.front();
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return columns[k];
  throw ParseError("no column named '" + name + "'");
}

Scenario read_scenario(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw ParseError("scenario has no header row");
  const bool has_prob = header[0] == "prob";
  const std::size_t first_value = has_prob ? 1 : 0;
  if (header.size() <= first_value) throw ParseError("scenario has no value columns");
  for (const auto& h : header)
    if (h.empty()) throw ParseError("empty column name in header");

  std::vector<double> probs;
  std::vector<std::vector<double>> cols(header.size() - first_value);
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw ParseError("row " + std::to_string(row_no) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto v = to_number(cells[c]);
      if (!v || !std::isfinite(*v))
        throw ParseError("row " + std::to_string(row_no) + ": invalid number '" + cells[c] + "'");
      if (c < first_value)
        probs.push_back(*v);
      else
        cols[c - first_value].push_back(*v);
    }
  }
  const std::size_t n = cols[0].size();
  if (n == 0) throw ParseError("scenario has no rows");

  std::vector<std::string> warnings;
  if (has_prob) {
    double sum = 0.0;
    for (double p : probs) {
      if (!(p > 0.0)) throw ParseError("probabilities must be strictly positive");
      sum += p;
    }
    const double err = std::abs(sum - 1.0);
    if (err > 1e-6) throw ParseError("probabilities sum to " + std::to_string(sum) + ", not 1");
    if (err > 1e-9) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "probabilities sum to " << sum << "; renormalized";
      warnings.push_back(msg.str());
    }
    for (double& p : probs) p /= sum;
  } else {
    probs.assign(n, 1.0 / static_cast<double>(n));
  }

  Scenario out{FiniteProbSpace(probs, {}, 1e-9), {}, {}, std::move(warnings)};
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out.names.push_back(header[c + first_value]);
    out.columns.emplace_back(std::move(cols[c]));
  }
  return out;
}

Scenario read_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario " + path.string());
  return read_scenario(in);
}

Scenario random_scenario(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("random scenario needs at least one atom");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return Scenario{FiniteProbSpace::uniform(n), {"x"}, {Rv(std::move(v))}, {}};
}

NormConfig NormConfig::parse(std::istream& in, const std::filesystem::path& base_dir) {
  NormConfig cfg;
  cfg.base_dir_ = base_dir;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(line_no) + " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + " has an empty key");
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    if (cfg.entries_.count(key)) throw ConfigError("duplicate config key '" + key + "'");
    cfg.entries_[key] = value;
  }
  auto it = cfg.entries_.find("kind");
  if (it == cfg.entries_.end()) throw ConfigError("config needs a 'kind'");
  cfg.kind_ = it->second;
  try {
    if (cfg.is_risk())
      (void)cfg.risk();
    else
      (void)cfg.seminorm(1);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

NormConfig NormConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  return parse(in, path.parent_path());
}

bool NormConfig::is_risk() const {
  if (kRiskKinds.count(kind_)) return true;
  return kind_ == "custom" && value_or(entries_, "name", "") == "mean_square";
}

RiskMeasureSpec NormConfig::risk() const {
  if (kind_ == "avar") return make_risk("avar", require_number(entries_, "level"));
  if (kind_ == "entropic") return make_risk("entropic", require_number(entries_, "theta"));
  if (kind_ == "custom" && value_or(entries_, "name", "") == "mean_square") return mean_square_risk();
  throw ConfigError("kind '" + kind_ + "' is not a risk measure");
}

namespace {

YoungFunction make_young(const std::map<std::string, std::string>& e, const std::filesystem::path& base) {
  const std::string phi = value_or(e, "phi", "power");
  const auto param = optional_number(e, "phi_param");
  if (phi == "power") return YoungFunction::power(param.value_or(2.0));
  if (phi == "power_over_p") return YoungFunction::power_over_p(param.value_or(2.0));
  if (phi == "exponential") return YoungFunction::exponential();
  if (phi == "entropy") return YoungFunction::entropy();
  if (phi == "indicator_ball") return YoungFunction::indicator_ball(param.value_or(1.0));
  if (phi == "tabulated") {
    auto file = e.find("phi_file");
    if (file == e.end()) throw ConfigError("tabulated phi needs phi_file");
    auto [x, v] = read_two_columns(base / file->second);
    return YoungFunction::tabulated(std::move(x), std::move(v));
  }
  throw ConfigError("unknown Young function '" + phi + "'");
}

PhiConcave make_concave(const std::string& phi, std::optional<double> param,
                        const std::map<std::string, std::string>& e, const std::filesystem::path& base) {
  if (phi == "sqrt") return PhiConcave::power_root(0.5);
  if (phi == "linear") return PhiConcave::power_root(1.0);
  if (phi == "power_root") return PhiConcave::power_root(param.value_or(0.5));
  if (phi == "tabulated") {
    auto file = e.find("phi_file");
    if (file == e.end()) throw ConfigError("tabulated phi needs phi_file");
    auto [t, v] = read_two_columns(base / file->second);
    return PhiConcave::tabulated(std::move(t), std::move(v));
  }
  throw ConfigError("unknown concave function '" + phi + "'");
}

SeminormSpec make_inner(const std::string& kind, std::optional<double> param) {
  if (kind == "lp") return SeminormSpec::lp(param.value_or(1.0));
  if (kind == "marcinkiewicz") return SeminormSpec::marcinkiewicz(PhiConcave::power_root(param.value_or(0.5)));
  if (kind == "lorentz") return SeminormSpec::lorentz(PhiConcave::power_root(param.value_or(0.5)));
  if (kRiskKinds.count(kind)) return SeminormSpec::risk(make_risk(kind, param));
  throw ConfigError("unknown inner seminorm '" + kind + "'");
}

}  // namespace

SeminormSpec NormConfig::seminorm(std::size_t atoms) const {
  if (is_risk()) return SeminormSpec::risk(risk());
  if (kind_ == "lp") return SeminormSpec::lp(require_number(entries_, "p"));
  if (kind_ == "luxemburg")
    return SeminormSpec::luxemburg(MusielakFamily::uniform(atoms, make_young(entries_, base_dir_)));
  if (kind_ == "marcinkiewicz" || kind_ == "lorentz") {
    const PhiConcave phi =
        make_concave(value_or(entries_, "phi", "sqrt"), optional_number(entries_, "phi_param"), entries_, base_dir_);
    return kind_ == "marcinkiewicz" ? SeminormSpec::marcinkiewicz(phi) : SeminormSpec::lorentz(phi);
  }
  if (kind_ == "gen_orlicz") {
    return SeminormSpec::gen_orlicz(make_young(entries_, base_dir_),
                                    make_inner(value_or(entries_, "inner_kind", "lp"),
                                               optional_number(entries_, "inner_param")));
  }
  if (kind_ == "custom") {
    const std::string name = value_or(entries_, "name", "");
    if (name == "signed_mean") return signed_mean_seminorm();
    if (name == "conditional_max") {
      if (atoms < 2) return SeminormSpec::lp(1.0);
      return conditional_max_seminorm(FiniteProbSpace::uniform(atoms), {0});
    }
    throw ConfigError("unknown custom spec '" + name + "'");
  }
  throw ConfigError("unknown kind '" + kind_ + "'");
}

std::optional<ModularSpec> NormConfig::modular(std::size_t atoms) const {
  if (is_risk()) return ModularSpec{risk()};
  if (kind_ == "luxemburg") return ModularSpec{MusielakFamily::uniform(atoms, make_young(entries_, base_dir_))};
  if (kind_ == "gen_orlicz") {
    return ModularSpec{GenOrliczPair{make_young(entries_, base_dir_),
                                     make_inner(value_or(entries_, "inner_kind", "lp"),
                                                optional_number(entries_, "inner_param"))}};
  }
  return std::nullopt;
}

}  // namespace kothe::io
