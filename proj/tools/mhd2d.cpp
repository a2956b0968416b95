// mhd2d: command line front end for the solver, topology analyzer and scenarios.
#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mhd/config.hpp"
#include "mhd/errors.hpp"
#include "mhd/io.hpp"
#include "mhd/scenarios.hpp"
#include "mhd/topology.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mhd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitMismatch = 2;

struct Globals {
  std::string config;
  std::string out;
  int seed_grid = 0;
  int threads = 0;
  bool emit_plots = false;
};

fs::path output_root(const Globals& g) {
  if (!g.out.empty()) return g.out;
  if (const char* env = std::getenv("MHD_OUT_DIR"); env && *env) return env;
  return "mhd_out";
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw ConfigError("cannot read config file " + p.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Config for a scenario subcommand: the file may omit "scenario", but may not contradict it.
ExperimentConfig scenario_config(const Globals& g, Scenario s) {
  ExperimentConfig cfg = ExperimentConfig::defaults(s);
  if (!g.config.empty()) {
    std::string text = read_file(g.config);
    json j = json::parse(text, nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      if (!j.contains("scenario")) {
        j["scenario"] = to_string(s);
        text = j.dump();
      } else if (j["scenario"].is_string() && scenario_from_string(j["scenario"].get<std::string>()) != s) {
        throw ConfigError(g.config + ": field 'scenario': config is for " + j["scenario"].get<std::string>() +
                          ", command is " + to_string(s));
      }
    }
    cfg = parse_config(text, g.config);
  }
  if (g.seed_grid > 0) cfg.seed_grid = g.seed_grid;
  return cfg;
}

void emit_plots(const fs::path& dir, const ScenarioOutcome& out) {
  const fs::path plots = dir / "plots";
  fs::create_directories(plots);
  std::ostringstream gp;
  gp << "# gnuplot -p plots/plot.gp (run from the output directory)\n";
  gp << "set terminal pngcairo size 900,600\n";
  for (const auto& [name, rows] : out.tables) {
    std::ostringstream dat;
    dat << std::setprecision(17);
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) dat << (i ? " " : "") << row[i];
      dat << '\n';
    }
    write_text(plots / (name + ".dat"), dat.str());
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    gp << "set output 'plots/" << name << ".png'\n";
    gp << "set title '" << name << "'\n";
    const bool logscale = name == "stability" || name == "oracle";
    gp << (logscale ? "set logscale y\n" : "unset logscale y\n");
    gp << "plot ";
    for (std::size_t c = 2; c <= cols; ++c)
      gp << (c > 2 ? ", " : "") << "'plots/" << name << ".dat' using 1:" << c << " with "
         << (name.rfind("line_", 0) == 0 ? "points pt 7 ps 0.3" : "linespoints") << " title 'col " << c << "'";
    gp << "\n";
  }
  write_text(plots / "plot.gp", gp.str());
}

void write_outputs(const fs::path& dir, const ScenarioOutcome& out, const ExperimentConfig& cfg, bool plots) {
  fs::create_directories(dir);
  write_text(dir / "report.json", out.report.dump(2) + "\n");
  {
    std::ofstream nd(dir / "diagnostics.ndjson");
    write_ndjson(nd, out.run.diagnostics);
  }
  if (out.run.final_state.grid().resolution() == cfg.sim.resolution)
    write_snapshot(dir / "final.snap", make_snapshot(out.run.final_state, cfg.sim.nu, cfg.sim.eta));
  if (plots) emit_plots(dir, out);
}

int run_one(const Globals& g, Scenario s) {
  const ExperimentConfig cfg = scenario_config(g, s);
  const fs::path dir = output_root(g);
  const auto out = run_scenario(cfg);
  write_outputs(dir, out, cfg, g.emit_plots);
  std::cout << to_string(s) << ": verdict " << out.verdict << " (expected " << out.expected << "), report "
            << (dir / "report.json").string() << "\n";
  return out.as_expected() ? kExitOk : kExitMismatch;
}

SpectralField2D load_field(const std::string& spec, const std::string& snapshot, const std::string& component,
                           int resolution) {
  if (!snapshot.empty()) return read_snapshot(fs::path(snapshot)).field(component);
  return parse_field_spec(spec, TorusGrid(resolution));
}

int run_gen_field(const Globals& g, const std::string& spec, int resolution, const std::string& name) {
  const auto f = parse_field_spec(spec, TorusGrid(resolution));
  const fs::path dir = output_root(g);
  fs::create_directories(dir);
  Snapshot snap;
  snap.resolution = resolution;
  snap.fields = {name};
  snap.data = {f.components()};
  write_snapshot(dir / "field.snap", snap);
  const json report = {{"field", spec},
                       {"resolution", resolution},
                       {"name", name},
                       {"l2_norm", l2_norm(f)},
                       {"c1_norm", c1_norm(f)},
                       {"snapshot", (dir / "field.snap").string()}};
  write_text(dir / "report.json", report.dump(2) + "\n");
  std::cout << "wrote " << (dir / "field.snap").string() << "\n";
  return kExitOk;
}

int run_topology(const Globals& g, const std::string& spec, const std::string& snapshot, const std::string& component,
                 int resolution, int expect_points) {
  const auto f = load_field(spec, snapshot, component, resolution);
  TopologyTolerances tol;
  tol.seed_grid = g.seed_grid;
  const auto a = analyze_topology(f, tol);
  json pts = json::array();
  for (const auto& p : a.critical.points)
    pts.push_back({{"x", p.position.x},
                   {"y", p.position.y},
                   {"kind", to_string(p.kind)},
                   {"det", p.det},
                   {"residual", p.residual}});
  json failures = json::array();
  for (const auto& s : a.critical.failures) failures.push_back({{"x", s.seed.x}, {"y", s.seed.y}, {"residual", s.residual}});
  json report = {{"field", snapshot.empty() ? spec : snapshot + ":" + component},
                 {"resolution", f.resolution()},
                 {"c1_norm", a.critical.c1},
                 {"critical_points", pts},
                 {"newton_failures", failures},
                 {"connections",
                  {{"hetero", a.connections.hetero}, {"self", a.connections.self}, {"non_connecting", a.connections.non_connecting}}},
                 {"signature", to_json(a.signature)}};
  const fs::path dir = output_root(g);
  fs::create_directories(dir);
  write_text(dir / "report.json", report.dump(2) + "\n");
  if (g.emit_plots) {
    ScenarioOutcome out;
    std::vector<std::vector<double>> saddles, centers;
    for (const auto& p : a.critical.points)
      (p.kind == PointKind::saddle ? saddles : centers).push_back({p.position.x, p.position.y});
    out.tables = {{"saddles", saddles}, {"centers", centers}};
    emit_plots(dir, out);
  }
  std::cout << a.signature.n_points() << " critical points (" << a.signature.n_saddles << " saddles, "
            << a.signature.n_centers << " centers, " << a.signature.n_degenerate << " degenerate), hetero "
            << a.signature.hetero_connections << ", structurally stable "
            << (a.signature.structurally_stable ? "yes" : "no") << "\n";
  if (expect_points >= 0 && expect_points != a.signature.n_points()) return kExitMismatch;
  return kExitOk;
}

int run_simulate(const Globals& g, const std::string& init_u, const std::string& init_b) {
  ExperimentConfig cfg = g.config.empty() ? ExperimentConfig::defaults(Scenario::custom) : load_config(g.config);
  if (cfg.scenario != Scenario::custom)
    throw ConfigError(g.config + ": field 'scenario': simulate runs custom configs; use the " +
                      std::string(to_string(cfg.scenario)) + " command");
  if (!init_u.empty()) cfg.initial_u = init_u;
  if (!init_b.empty()) cfg.initial_b = init_b;
  const auto out = run_scenario(cfg);
  const fs::path dir = output_root(g);
  write_outputs(dir, out, cfg, g.emit_plots);
  std::cout << "simulated to t = " << out.run.final_state.t << ", outputs in " << dir.string() << "\n";
  return kExitOk;
}

// Cartesian product over "vary" (dotted keys into the base config), run concurrently.
int run_sweep(const Globals& g) {
  if (g.config.empty()) throw ConfigError("sweep needs --config");
  const std::string text = read_file(g.config);
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(g.config + ": " + e.what());
  }
  if (!spec.is_object() || !spec.contains("base") || !spec["base"].is_object())
    throw ConfigError(g.config + ": field 'base': expected an object");
  std::vector<json> configs{spec["base"]};
  if (spec.contains("vary")) {
    if (!spec["vary"].is_object()) throw ConfigError(g.config + ": field 'vary': expected an object");
    for (const auto& [key, values] : spec["vary"].items()) {
      if (!values.is_array() || values.empty())
        throw ConfigError(g.config + ": field 'vary." + key + "': expected a non-empty array");
      std::string ptr = "/" + key;
      std::replace(ptr.begin(), ptr.end(), '.', '/');
      std::vector<json> next;
      for (const auto& c : configs)
        for (const auto& v : values) {
          json n = c;
          n[json::json_pointer(ptr)] = v;
          next.push_back(std::move(n));
        }
      configs = std::move(next);
    }
  }
  // validate everything before starting any run
  std::vector<ExperimentConfig> parsed;
  for (std::size_t i = 0; i < configs.size(); ++i)
    parsed.push_back(parse_config(configs[i].dump(), g.config + " run " + std::to_string(i)));

  const fs::path root = output_root(g);
  fs::create_directories(root);
  const int workers = std::max(1, std::min<int>(g.threads > 0 ? g.threads : 1, static_cast<int>(parsed.size())));
  std::vector<json> summary(parsed.size());
  std::vector<int> codes(parsed.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  std::mutex log;
  auto worker = [&] {
    omp_set_num_threads(1);
    for (std::size_t i; (i = next++) < parsed.size();) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%03zu", i);
      const fs::path dir = root / name;
      try {
        const auto out = run_scenario(parsed[i]);
        write_outputs(dir, out, parsed[i], g.emit_plots);
        codes[i] = out.as_expected() ? kExitOk : kExitMismatch;
        summary[i] = {{"run", name}, {"verdict", out.verdict}, {"expected", out.expected}, {"config", to_json(parsed[i])}};
      } catch (const std::exception& e) {
        codes[i] = kExitFailure;
        summary[i] = {{"run", name}, {"error", e.what()}, {"config", to_json(parsed[i])}};
      }
      std::lock_guard lock(log);
      std::cout << name << ": " << (summary[i].contains("error") ? "error " + summary[i]["error"].get<std::string>()
                                                                 : summary[i]["verdict"].get<std::string>())
                << "\n";
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  write_text(root / "summary.json", json(summary).dump(2) + "\n");
  if (std::count(codes.begin(), codes.end(), kExitFailure)) return kExitFailure;
  if (std::count(codes.begin(), codes.end(), kExitMismatch)) return kExitMismatch;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D incompressible MHD on the torus: simulation, topology and reconnection scenarios"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--out", g.out, "output directory (default $MHD_OUT_DIR or ./mhd_out)");
  app.add_option("--seed-grid", g.seed_grid, "critical point seed grid size (>= field resolution)")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", g.threads, "OpenMP threads, or concurrent runs for sweep")->check(CLI::NonNegativeNumber);
  app.add_flag("--emit-plots", g.emit_plots, "write plot data and a gnuplot script");

  std::string field_spec = "taylor:1,1", snapshot, component = "b", name = "b", init_u, init_b;
  int resolution = 64, expect_points = -1;

  auto* gen = app.add_subcommand("gen-field", "write a field built from a spec to a snapshot");
  gen->add_option("--field", field_spec, "e.g. taylor:4,4,0.177+tilde1:1e-3")->required();
  gen->add_option("--resolution", resolution, "grid size M");
  gen->add_option("--name", name, "field name in the snapshot");

  auto* sim = app.add_subcommand("simulate", "run a custom simulation");
  sim->add_option("--initial-u", init_u, "velocity field spec");
  sim->add_option("--initial-b", init_b, "magnetic field spec");

  auto* topo = app.add_subcommand("topology", "critical points and signature of a field");
  topo->add_option("--field", field_spec, "field spec");
  topo->add_option("--snapshot", snapshot, "read the field from a snapshot instead");
  topo->add_option("--component", component, "field name inside the snapshot");
  topo->add_option("--resolution", resolution, "grid size M for --field");
  topo->add_option("--expect-points", expect_points, "exit 2 unless this many critical points are found");

  const std::pair<const char*, Scenario> scenarios[] = {{"theorem1", Scenario::theorem1},
                                                        {"theorem2", Scenario::theorem2},
                                                        {"remark2", Scenario::remark2},
                                                        {"frozen-in", Scenario::frozen_in},
                                                        {"stability", Scenario::stability_decay}};
  std::vector<std::pair<CLI::App*, Scenario>> scenario_cmds;
  for (const auto& [cmd, s] : scenarios) scenario_cmds.emplace_back(app.add_subcommand(cmd, std::string("run the ") + cmd + " scenario"), s);
  auto* sweep = app.add_subcommand("sweep", "run a grid of configs concurrently");
  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (g.threads > 0 && !sweep->parsed()) omp_set_num_threads(g.threads);
    if (gen->parsed()) return run_gen_field(g, field_spec, resolution, name);
    if (sim->parsed()) return run_simulate(g, init_u, init_b);
    if (topo->parsed()) return run_topology(g, field_spec, snapshot, component, resolution, expect_points);
    if (sweep->parsed()) return run_sweep(g);
    for (const auto& [cmd, s] : scenario_cmds)
      if (cmd->parsed()) return run_one(g, s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
