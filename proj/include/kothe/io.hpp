#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kothe/duality.hpp"

namespace kothe::io {

/// Malformed scenario or table input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed config text that does not describe a valid spec.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Atoms with named value columns, read from CSV.
struct Scenario {
  FiniteProbSpace space;
  std::vector<std::string> names;
  std::vector<Rv> columns;
  std::vector<std::string> warnings;

  /// Named column; an empty name selects the only (or first) column.
  const Rv& column(const std::string& name) const;
};

/// CSV with a header row. A leading "prob" column gives the weights (uniform otherwise).
/// Weights summing to 1 within 1e-9 are accepted; within 1e-6 they are renormalized with a
/// warning; anything else is rejected.
Scenario read_scenario(std::istream& in);
Scenario read_scenario_file(const std::filesystem::path& path);

/// Equal-weight space with `n` atoms and one column "x" of standard normal draws.
Scenario random_scenario(std::size_t n, std::uint64_t seed);

/// Flat key=value configuration describing a seminorm or a risk measure.
///
/// Keys: kind, p, phi, phi_param, phi_file, level, theta, inner_kind, inner_param, name.
class NormConfig {
 public:
  static NormConfig parse(std::istream& in, const std::filesystem::path& base_dir = {});
  static NormConfig parse_file(const std::filesystem::path& path);

  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::string& kind() const { return kind_; }

  /// True when the config names a risk measure (avar, entropic, or a custom risk).
  bool is_risk() const;
  RiskMeasureSpec risk() const;

  /// The seminorm on a space with `atoms` atoms; a risk measure yields its risk norm.
  SeminormSpec seminorm(std::size_t atoms) const;

  /// The modular behind a Luxemburg-type seminorm, when there is one.
  std::optional<ModularSpec> modular(std::size_t atoms) const;

 private:
  std::map<std::string, std::string> entries_;
  std::string kind_;
  std::filesystem::path base_dir_;
};

}  // namespace kothe::io
