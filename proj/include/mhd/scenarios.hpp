#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mhd/config.hpp"
#include "mhd/topology.hpp"

namespace mhd {

struct RunArtifacts {
  std::vector<DiagnosticsRecord> diagnostics;
  MHDState final_state{SpectralField2D(TorusGrid(8)), SpectralField2D(TorusGrid(8)), 0.0};
  double wall_seconds = 0.0;
};

/// Outcome of the theorem1, theorem2 and remark2 constructions.
struct ReconnectionReport {
  std::string scenario;
  std::string verdict;  // "reconnection" or "no-reconnection"
  TopologySignature signature_t0;
  TopologySignature signature_T;
  TopologySignature target;  // signature of the field b~(T) should approach
  Verdict comparison = Verdict::indistinguishable;
  std::optional<double> c1_distance;  // ||b~(T) - target field||_{C^1}
  std::optional<double> hr_error;     // ||b~(T) - target field||_{H^r}
  // forced runs: solver against the closed form at every snapshot
  std::vector<double> snapshot_times;
  std::vector<double> oracle_rel_error;
  std::vector<double> velocity_l2;
  // remark2
  std::optional<double> exact_error;
  std::optional<double> bound;
  std::optional<bool> within_bound;
  RunArtifacts run;
};

struct FrozenInReport {
  std::string verdict;  // "pass" or "fail"
  double frozen_error = 0.0;
  double hausdorff = 0.0;
  int n_seeds = 0;
  std::vector<Point> line_b0;      // integral line of b0
  std::vector<Point> line_pushed;  // its image under the flow map
  std::vector<Point> line_bT;      // integral line of b(T) from the pushed seed
  RunArtifacts run;
};

struct StabilityReport {
  std::string verdict;  // "pass" or "fail"
  double sigma = 0.0;
  double slope = 0.0;        // fitted d log Q / dt over [T/2, T]
  double slope_limit = 0.0;  // -2 sigma (1 - rate_tol)
  double q0 = 0.0;
  double q0_expected = 0.0;  // delta^2 ||tilde T1||^2_{H^r}
  bool monotone_late = false;
  std::vector<double> times, q, envelope;
  std::vector<double> halving_ratio;  // Q(delta/2) / Q(delta); empty when disabled
  double max_halving_deviation = 0.0;  // max |4 ratio - 1| over t > 0
  RunArtifacts run;
};

ReconnectionReport run_theorem1(const ExperimentConfig& cfg);
ReconnectionReport run_theorem2(const ExperimentConfig& cfg);
ReconnectionReport run_remark2(const ExperimentConfig& cfg);
FrozenInReport run_frozen_in(const ExperimentConfig& cfg);
StabilityReport run_stability_decay(const ExperimentConfig& cfg);
RunArtifacts run_custom(const ExperimentConfig& cfg);

nlohmann::json to_json(const ReconnectionReport& r);
nlohmann::json to_json(const FrozenInReport& r);
nlohmann::json to_json(const StabilityReport& r);

/// Any scenario, reduced to what the CLI and sweeps need.
struct ScenarioOutcome {
  std::string verdict;
  std::string expected;
  nlohmann::json report;  // includes the resolved config
  RunArtifacts run;
  // series for plot emission: name -> columns
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> tables;
  bool as_expected() const { return verdict == expected; }
};

ScenarioOutcome run_scenario(const ExperimentConfig& cfg);

/// Least-squares slope of log(y) against t over samples with t in [t0, t1].
double fit_log_slope(const std::vector<double>& t, const std::vector<double>& y, double t0, double t1);

}  // namespace mhd
