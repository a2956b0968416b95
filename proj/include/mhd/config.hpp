#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mhd/solver.hpp"

namespace mhd {

enum class Scenario { theorem1, theorem2, remark2, frozen_in, stability_decay, custom };

const char* to_string(Scenario s);
/// Accepts "frozen-in"/"frozen_in" and "stability"/"stability-decay". Throws ConfigError otherwise.
Scenario scenario_from_string(const std::string& name);

/// Everything a scenario run needs. Defaults are the desk-scale parameters.
struct ExperimentConfig {
  Scenario scenario = Scenario::custom;
  SimConfig sim;
  TaylorSpec nm{4, 4};
  TaylorSpec n2{1, 1};
  double delta = 1e-3;
  double T = 2.0;  // horizon; runs use it in place of sim.t_end
  int r = 3;       // Sobolev index of reported errors
  int topology_cadence = 0;  // signature every k-th diagnostics record, 0 = off
  int seed_grid = 0;
  std::string expect;  // expected verdict; empty = scenario default
  // custom runs: field specs (see parse_field_spec)
  std::string initial_u = "zero";
  std::string initial_b = "taylor:1,1";
  // frozen-in
  int frozen_seeds = 8;  // lattice side
  double line_arclength = 2.0;
  // stability
  double rate_tol = 0.1;
  bool halving_check = true;

  /// Scenario defaults at desk scale.
  static ExperimentConfig defaults(Scenario s);
  /// Throws ConfigError naming the offending field.
  void validate() const;
  std::string expected_verdict() const;
};

/// Reads a config from JSON text, starting from the scenario defaults.
/// `origin` names the source in error messages; parse errors carry line:column.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
/// Throws ConfigError naming the path when the file is missing.
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Sum of terms joined by '+': "zero", "taylor:n,m[,amp]", "tilde1[:amp]".
SpectralField2D parse_field_spec(const std::string& spec, const TorusGrid& grid);

}  // namespace mhd
