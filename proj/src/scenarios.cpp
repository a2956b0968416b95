#include "mhd/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "mhd/errors.hpp"
#include "mhd/io.hpp"
#include "mhd/oracles.hpp"

namespace mhd {

using nlohmann::json;

namespace {

TopologyTolerances tolerances(const ExperimentConfig& cfg) {
  TopologyTolerances tol;
  tol.seed_grid = cfg.seed_grid;
  return tol;
}

// Keeps the records, attaches signatures at the topology cadence and forwards snapshots.
class ScenarioSink : public DiagnosticSink {
 public:
  ScenarioSink(const ExperimentConfig& cfg, std::function<void(const MHDState&)> on_snapshot)
      : cadence_(cfg.topology_cadence), tol_(tolerances(cfg)), on_snapshot_(std::move(on_snapshot)) {}

  void record(const DiagnosticsRecord& r) override { records.push_back(r); }
  void snapshot(const MHDState& s) override {
    if (cadence_ > 0 && !records.empty() && records.back().t == s.t &&
        (records.size() - 1) % static_cast<std::size_t>(cadence_) == 0)
      records.back().signature = analyze_topology(s.b, tol_).signature;
    if (on_snapshot_) on_snapshot_(s);
  }

  std::vector<DiagnosticsRecord> records;

 private:
  int cadence_;
  TopologyTolerances tol_;
  std::function<void(const MHDState&)> on_snapshot_;
};

RunArtifacts run_sim(const ExperimentConfig& cfg, SimConfig sim, MHDState init,
                     std::function<void(const MHDState&)> on_snapshot = {}) {
  sim.t_end = cfg.T;
  const auto forcing = make_forcing(sim.forcing, sim.grid(), sim.eta);
  ScenarioSink sink(cfg, std::move(on_snapshot));
  const auto start = std::chrono::steady_clock::now();
  RunArtifacts art;
  art.final_state = simulate(sim, std::move(init), forcing.get(), sink);
  art.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  art.diagnostics = std::move(sink.records);
  return art;
}

TopologySignature signature_of(const SpectralField2D& f, const TopologyTolerances& tol) {
  return analyze_topology(f, tol).signature;
}

bool matches_target(const TopologySignature& s, const TopologySignature& target) {
  return s.structurally_stable && s.n_saddles == target.n_saddles && s.n_centers == target.n_centers &&
         s.hetero_connections == 0;
}

void forced_comparison(ReconnectionReport& rep, const ForcedOracle& oracle, const MHDState& s) {
  const auto exact = oracle.exact_b(s.t);
  rep.snapshot_times.push_back(s.t);
  rep.oracle_rel_error.push_back(l2_norm(s.b - exact) / l2_norm(exact));
  rep.velocity_l2.push_back(l2_norm(s.u));
}

}  // namespace

double fit_log_slope(const std::vector<double>& t, const std::vector<double>& y, double t0, double t1) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 - 1e-12 || t[i] > t1 + 1e-12) continue;
    if (!(y[i] > 0.0)) throw InputError("log-slope fit needs positive samples");
    const double ly = std::log(y[i]);
    n += 1;
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
  }
  if (n < 2) throw InputError("log-slope fit needs at least two samples in the window");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ReconnectionReport run_theorem1(const ExperimentConfig& cfg) {
  cfg.validate();
  const TorusGrid grid = cfg.sim.grid();
  const double N = std::sqrt(static_cast<double>(cfg.nm.eigenvalue()));
  const double eta = cfg.sim.eta;
  const auto tol = tolerances(cfg);
  const auto b0 = make_taylor(cfg.nm, 1.0 / N, grid) + make_tilde_t1(grid, cfg.delta);

  ReconnectionReport rep;
  rep.scenario = "theorem1";
  SimConfig sim = cfg.sim;
  sim.forcing.kind = ForcingKind::none;
  rep.run = run_sim(cfg, sim, {SpectralField2D(grid), b0, 0.0});

  // rescale so that the surviving low mode has unit amplitude; without a
  // perturbation undo the decay of the high mode instead
  const double scale = cfg.delta > 0.0 ? std::exp(eta * cfg.T) / cfg.delta
                                       : N * std::exp(eta * N * N * cfg.T);
  const auto b_tilde = rep.run.final_state.b * scale;
  const auto t1 = make_tilde_t1(grid);
  rep.signature_t0 = signature_of(b0, tol);
  rep.signature_T = signature_of(b_tilde, tol);
  rep.target = signature_of(t1, tol);
  rep.comparison = signatures_equivalent(rep.signature_t0, rep.signature_T);
  if (cfg.delta > 0.0) {
    rep.c1_distance = c1_norm(b_tilde - t1);
    rep.hr_error = sobolev_norm(b_tilde - t1, cfg.r);
  }
  const bool reconnected = rep.comparison == Verdict::distinct && matches_target(rep.signature_T, rep.target);
  rep.verdict = reconnected ? "reconnection" : "no-reconnection";
  return rep;
}

ReconnectionReport run_theorem2(const ExperimentConfig& cfg) {
  cfg.validate();
  const TorusGrid grid = cfg.sim.grid();
  const double eta = cfg.sim.eta;
  const auto tol = tolerances(cfg);
  const ForcedOracle oracle(cfg.nm, cfg.n2, eta, grid);

  ReconnectionReport rep;
  rep.scenario = "theorem2";
  SimConfig sim = cfg.sim;
  sim.forcing.kind = ForcingKind::theorem2;
  rep.run = run_sim(cfg, sim, {SpectralField2D(grid), oracle.high(), 0.0},
                    [&](const MHDState& s) { forced_comparison(rep, oracle, s); });

  const auto b_tilde = rep.run.final_state.b * (eta * oracle.eigenvalue_low());
  const auto target = make_taylor(cfg.n2, 1.0, grid);
  rep.signature_t0 = signature_of(oracle.high(), tol);
  rep.signature_T = signature_of(b_tilde, tol);
  rep.target = signature_of(target, tol);
  rep.comparison = signatures_equivalent(rep.signature_t0, rep.signature_T);
  rep.c1_distance = c1_norm(b_tilde - target);
  rep.hr_error = sobolev_norm(b_tilde - target, cfg.r);
  rep.verdict = rep.comparison == Verdict::distinct ? "reconnection" : "no-reconnection";
  return rep;
}

ReconnectionReport run_remark2(const ExperimentConfig& cfg) {
  cfg.validate();
  const TorusGrid grid = cfg.sim.grid();
  const double eta = cfg.sim.eta;
  const double N = std::sqrt(static_cast<double>(cfg.nm.eigenvalue()));
  const auto tol = tolerances(cfg);
  const auto oracle = ForcedOracle::with_tilde_t1(cfg.nm, eta, grid);

  ReconnectionReport rep;
  rep.scenario = "remark2";
  SimConfig sim = cfg.sim;
  sim.forcing.kind = ForcingKind::remark2;
  rep.run = run_sim(cfg, sim, {SpectralField2D(grid), oracle.high(), 0.0},
                    [&](const MHDState& s) { forced_comparison(rep, oracle, s); });

  const auto b_tilde = rep.run.final_state.b * eta;
  const auto t1 = make_tilde_t1(grid);
  rep.signature_t0 = signature_of(oracle.high(), tol);
  rep.signature_T = signature_of(b_tilde, tol);
  rep.target = signature_of(t1, tol);
  rep.comparison = signatures_equivalent(rep.signature_t0, rep.signature_T);
  rep.c1_distance = c1_norm(b_tilde - t1);
  rep.hr_error = sobolev_norm(b_tilde - t1, cfg.r);
  rep.exact_error = remark2_exact_error(cfg.nm, cfg.r, eta, cfg.T, grid);
  rep.bound = remark2_error_bound(N, cfg.r, eta, cfg.T);
  rep.within_bound = *rep.exact_error <= *rep.bound;
  const bool reconnected = rep.comparison == Verdict::distinct && matches_target(rep.signature_T, rep.target);
  rep.verdict = reconnected ? "reconnection" : "no-reconnection";
  return rep;
}

FrozenInReport run_frozen_in(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sim.eta != 0.0) throw ConfigError("frozen-in scenario needs eta = 0");
  const TorusGrid grid = cfg.sim.grid();
  const auto u0 = parse_field_spec(cfg.initial_u, grid);
  const auto b0 = parse_field_spec(cfg.initial_b, grid);

  FrozenInReport rep;
  std::vector<MHDState> states;
  rep.run = run_sim(cfg, cfg.sim, {u0, b0, 0.0}, [&](const MHDState& s) { states.push_back(s); });

  const auto seeds = seed_lattice(cfg.frozen_seeds);
  rep.n_seeds = static_cast<int>(seeds.size());
  rep.frozen_error = verify_frozen_in(states, 0.0, seeds, cfg.T, cfg.sim.dt);

  // transport one integral line of b0, started where b0 is strongest among the seeds
  const FieldEvaluator e0(b0);
  Point start = seeds.front();
  double best = -1.0;
  for (const auto& p : seeds) {
    const Vec2 v = e0.value(p);
    if (std::hypot(v[0], v[1]) > best) best = std::hypot(v[0], v[1]), start = p;
  }
  const double h = 1e-2;
  rep.line_b0 = trace_integral_line(b0, start, cfg.line_arclength, h).points;
  rep.line_pushed = flow_map(states, rep.line_b0, cfg.T, cfg.sim.dt).images;
  double length = 0.0;
  for (std::size_t i = 0; i + 1 < rep.line_pushed.size(); ++i) {
    const Vec2 d = torus_delta(rep.line_pushed[i], rep.line_pushed[i + 1]);
    length += std::hypot(d[0], d[1]);
  }
  rep.line_bT = trace_integral_line(rep.run.final_state.b, rep.line_pushed.front(), length, h).points;
  rep.hausdorff = hausdorff_distance(rep.line_pushed, rep.line_bT);
  rep.verdict = rep.frozen_error < 1e-3 && rep.hausdorff < 5e-3 ? "pass" : "fail";
  return rep;
}

StabilityReport run_stability_decay(const ExperimentConfig& cfg) {
  cfg.validate();
  const TorusGrid grid = cfg.sim.grid();
  const double N = std::sqrt(static_cast<double>(cfg.nm.eigenvalue()));
  const auto w0 = make_taylor(cfg.nm, 1.0 / N, grid);
  SimConfig sim = cfg.sim;
  sim.forcing.kind = ForcingKind::none;

  auto trajectory = [&](double delta, RunArtifacts* keep) {
    std::vector<MHDState> states;
    auto art = run_sim(cfg, sim, {SpectralField2D(grid), w0 + make_tilde_t1(grid, delta), 0.0},
                       [&](const MHDState& s) { states.push_back(s); });
    if (keep) *keep = std::move(art);
    return states;
  };
  auto difference = [&](const std::vector<MHDState>& a, const std::vector<MHDState>& b) {
    if (a.size() != b.size()) throw InputError("stability runs emitted different snapshot counts");
    std::vector<double> q;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double v = sobolev_norm(a[i].u - b[i].u, cfg.r), hh = sobolev_norm(a[i].b - b[i].b, cfg.r);
      q.push_back(v * v + hh * hh);
    }
    return q;
  };

  StabilityReport rep;
  const auto reference = trajectory(0.0, nullptr);
  const auto perturbed = trajectory(cfg.delta, &rep.run);
  for (const auto& s : reference) rep.times.push_back(s.t);
  rep.q = difference(perturbed, reference);

  rep.sigma = default_sigma(cfg.sim.nu, cfg.sim.eta);
  const StabilityBound bound{rep.sigma, cfg.r, cfg.delta, N, 1.0};
  for (double t : rep.times) rep.envelope.push_back(stability_envelope(bound, t));
  rep.q0 = rep.q.front();
  const double t1_norm = sobolev_norm(make_tilde_t1(grid), cfg.r);
  rep.q0_expected = cfg.delta * cfg.delta * t1_norm * t1_norm;
  rep.slope_limit = -2.0 * rep.sigma * (1.0 - cfg.rate_tol);
  rep.slope = fit_log_slope(rep.times, rep.q, 0.5 * cfg.T, cfg.T);
  rep.monotone_late = true;
  for (std::size_t i = 1; i < rep.times.size(); ++i)
    if (rep.times[i - 1] >= 0.5 * cfg.T && rep.q[i] >= rep.q[i - 1]) rep.monotone_late = false;

  bool halving_ok = true;
  if (cfg.halving_check) {
    const auto q_half = difference(trajectory(0.5 * cfg.delta, nullptr), reference);
    for (std::size_t i = 0; i < rep.q.size(); ++i) {
      rep.halving_ratio.push_back(q_half[i] / rep.q[i]);
      if (rep.times[i] > 0.0)
        rep.max_halving_deviation = std::max(rep.max_halving_deviation, std::abs(4.0 * rep.halving_ratio.back() - 1.0));
    }
    halving_ok = rep.max_halving_deviation <= 0.05;
  }
  rep.verdict = rep.slope <= rep.slope_limit && halving_ok ? "pass" : "fail";
  return rep;
}

RunArtifacts run_custom(const ExperimentConfig& cfg) {
  cfg.validate();
  const TorusGrid grid = cfg.sim.grid();
  return run_sim(cfg, cfg.sim, {parse_field_spec(cfg.initial_u, grid), parse_field_spec(cfg.initial_b, grid), 0.0});
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({p.x, p.y});
  return a;
}

std::vector<std::vector<double>> point_table(const std::vector<Point>& pts) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : pts) rows.push_back({p.x, p.y});
  return rows;
}

json run_json(const RunArtifacts& run) {
  return {{"wall_seconds", run.wall_seconds},
          {"final_time", run.final_state.t},
          {"records", run.diagnostics.size()},
          {"final", run.diagnostics.empty() ? json(nullptr) : to_json(run.diagnostics.back())}};
}

}  // namespace

json to_json(const ReconnectionReport& r) {
  json j = {{"scenario", r.scenario},
            {"verdict", r.verdict},
            {"signature_t0", to_json(r.signature_t0)},
            {"signature_T", to_json(r.signature_T)},
            {"target_signature", to_json(r.target)},
            {"comparison", to_string(r.comparison)},
            {"c1_distance", optional_json(r.c1_distance)},
            {"hr_error", optional_json(r.hr_error)},
            {"run", run_json(r.run)}};
  if (!r.snapshot_times.empty()) {
    double worst = 0.0, umax = 0.0;
    for (double e : r.oracle_rel_error) worst = std::max(worst, e);
    for (double u : r.velocity_l2) umax = std::max(umax, u);
    j["oracle"] = {{"times", r.snapshot_times},
                   {"rel_l2_error", r.oracle_rel_error},
                   {"velocity_l2", r.velocity_l2},
                   {"max_rel_l2_error", worst},
                   {"max_velocity_l2", umax}};
  }
  if (r.exact_error) {
    j["exact_error"] = *r.exact_error;
    j["bound"] = *r.bound;
    j["within_bound"] = *r.within_bound;
  }
  return j;
}

json to_json(const FrozenInReport& r) {
  return {{"scenario", "frozen-in"},
          {"verdict", r.verdict},
          {"frozen_error", r.frozen_error},
          {"hausdorff", r.hausdorff},
          {"n_seeds", r.n_seeds},
          {"line_b0", points_json(r.line_b0)},
          {"line_pushed", points_json(r.line_pushed)},
          {"line_bT", points_json(r.line_bT)},
          {"run", run_json(r.run)}};
}

json to_json(const StabilityReport& r) {
  return {{"scenario", "stability"},
          {"verdict", r.verdict},
          {"sigma", r.sigma},
          {"slope", r.slope},
          {"slope_limit", r.slope_limit},
          {"q0", r.q0},
          {"q0_expected", r.q0_expected},
          {"monotone_late", r.monotone_late},
          {"times", r.times},
          {"q", r.q},
          {"envelope", r.envelope},
          {"halving_ratio", r.halving_ratio},
          {"max_halving_deviation", r.max_halving_deviation},
          {"run", run_json(r.run)}};
}

ScenarioOutcome run_scenario(const ExperimentConfig& cfg) {
  ScenarioOutcome out;
  out.expected = cfg.expected_verdict();
  auto diag_table = [](const RunArtifacts& run) {
    std::vector<std::vector<double>> rows;
    for (const auto& d : run.diagnostics) rows.push_back({d.t, d.energy_u, d.energy_b, d.cross_helicity});
    return rows;
  };
  auto reconnection = [&](ReconnectionReport rep) {
    out.verdict = rep.verdict;
    out.report = to_json(rep);
    if (!rep.snapshot_times.empty()) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < rep.snapshot_times.size(); ++i)
        rows.push_back({rep.snapshot_times[i], rep.oracle_rel_error[i], rep.velocity_l2[i]});
      out.tables.emplace_back("oracle", std::move(rows));
    }
    out.run = std::move(rep.run);
  };
  switch (cfg.scenario) {
    case Scenario::theorem1: reconnection(run_theorem1(cfg)); break;
    case Scenario::theorem2: reconnection(run_theorem2(cfg)); break;
    case Scenario::remark2: reconnection(run_remark2(cfg)); break;
    case Scenario::frozen_in: {
      auto rep = run_frozen_in(cfg);
      out.verdict = rep.verdict;
      out.report = to_json(rep);
      out.tables.emplace_back("line_b0", point_table(rep.line_b0));
      out.tables.emplace_back("line_pushed", point_table(rep.line_pushed));
      out.tables.emplace_back("line_bT", point_table(rep.line_bT));
      out.run = std::move(rep.run);
      break;
    }
    case Scenario::stability_decay: {
      auto rep = run_stability_decay(cfg);
      out.verdict = rep.verdict;
      out.report = to_json(rep);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < rep.times.size(); ++i)
        rows.push_back({rep.times[i], rep.q[i], rep.envelope[i],
                        rep.halving_ratio.empty() ? 0.0 : rep.halving_ratio[i]});
      out.tables.emplace_back("stability", std::move(rows));
      out.run = std::move(rep.run);
      break;
    }
    case Scenario::custom:
      out.run = run_custom(cfg);
      out.verdict = "completed";
      out.report = {{"scenario", "custom"}, {"verdict", out.verdict}, {"run", run_json(out.run)}};
      break;
  }
  out.tables.insert(out.tables.begin(), {"diagnostics", diag_table(out.run)});
  out.report["expected_verdict"] = out.expected;
  out.report["config"] = to_json(cfg);
  return out;
}

}  // namespace mhd
