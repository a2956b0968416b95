#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mhd/config.hpp"
#include "mhd/errors.hpp"
#include "mhd/io.hpp"
#include "mhd/scenarios.hpp"
#include "test_helpers.hpp"

using namespace mhd;

namespace {

bool same_bits(const Spectrum& a, const Spectrum& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(Complex)) == 0;
}

ExperimentConfig small(Scenario s) {
  auto cfg = ExperimentConfig::defaults(s);
  cfg.sim.resolution = 32;
  cfg.sim.dt = 1e-2;
  cfg.sim.output_cadence = 10;
  cfg.nm = cfg.sim.forcing.nm = {3, 3};
  cfg.T = 1.0;
  return cfg;
}

nlohmann::json without_timing(nlohmann::json j) {
  j["run"].erase("wall_seconds");
  return j;
}

}  // namespace

TEST_CASE("snapshot round trip is bit exact") {
  const TorusGrid g(16);
  const MHDState s{testing::random_field(g, 5, 1), testing::random_field(g, 5, 2), 0.1 + 0.2};
  const auto snap = make_snapshot(s, 0.3, 1.0 / 3.0);
  std::stringstream buf;
  write_snapshot(buf, snap);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "MHD2");
  CHECK(bytes[4] == 1);  // little-endian int32 version
  CHECK(bytes[5] == 0);

  std::stringstream in(bytes);
  const auto back = read_snapshot(in);
  CHECK(back.time == snap.time);
  CHECK(back.nu == snap.nu);
  CHECK(back.eta == snap.eta);
  CHECK(back.resolution == 16);
  CHECK(back.fields == std::vector<std::string>{"u", "b"});
  for (int f = 0; f < 2; ++f)
    for (int c = 0; c < 2; ++c) CHECK(same_bits(back.data[f][c], snap.data[f][c]));
  const auto state = to_state(back);
  CHECK(state.u.identical(s.u));
  CHECK(state.b.identical(s.b));

  std::stringstream again;
  write_snapshot(again, back);
  CHECK(again.str() == bytes);
}

TEST_CASE("damaged snapshots are rejected") {
  const TorusGrid g(8);
  std::stringstream buf;
  write_snapshot(buf, make_snapshot(MHDState::zero(g), 0.0, 0.0));
  std::string bytes = buf.str();
  SUBCASE("truncated") {
    std::stringstream in(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_snapshot(in), InputError);
  }
  SUBCASE("bad magic") {
    bytes[0] = 'X';
    std::stringstream in(bytes);
    CHECK_THROWS_AS(read_snapshot(in), InputError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(read_snapshot(std::filesystem::path("/nonexistent/x.snap")), InputError); }
  SUBCASE("absent field") {
    std::stringstream in(bytes);
    CHECK_THROWS_AS(read_snapshot(in).field("p"), InputError);
  }
}

TEST_CASE("NDJSON diagnostics parse back losslessly") {
  const TorusGrid g(16);
  std::vector<DiagnosticsRecord> recs;
  for (int i = 0; i < 3; ++i) {
    MHDState s{testing::random_field(g, 4, 10 + i), testing::random_field(g, 4, 20 + i), 0.1 * i};
    recs.push_back(make_diagnostics(s, 3));
  }
  recs[1].signature = TopologySignature{4, 4, 0, 8, 0, false};
  std::stringstream buf;
  write_ndjson(buf, recs);
  int lines = 0;
  for (char c : buf.str()) lines += c == '\n';
  CHECK(lines == 3);
  const auto back = read_ndjson(buf);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(back[i] == recs[i]);

  std::stringstream bad("{\"t\": 1}\n");
  CHECK_THROWS_AS(read_ndjson(bad), InputError);
}

TEST_CASE("config parsing") {
  SUBCASE("scenario defaults") {
    const auto c = parse_config(R"({"scenario": "theorem1"})");
    CHECK(c.scenario == Scenario::theorem1);
    CHECK(c.nm == TaylorSpec{4, 4});
    CHECK(c.delta == 1e-3);
    CHECK(c.T == 2.0);
    CHECK(c.sim.resolution == 128);
    CHECK(c.sim.nu == 0.5);
    CHECK(c.sim.t_end == 2.0);
    const auto f = parse_config(R"({"scenario": "frozen-in"})");
    CHECK(f.sim.eta == 0.0);
    CHECK(f.initial_b == "tilde1");
  }
  SUBCASE("overrides") {
    const auto c = parse_config(R"({"scenario": "theorem2", "sim": {"resolution": 64, "dt": 0.002},
                                    "n": [3, 2], "n2": [1, 2], "T": 1.5, "expect": "no-reconnection"})");
    CHECK(c.sim.resolution == 64);
    CHECK(c.sim.dt == 0.002);
    CHECK(c.nm == TaylorSpec{3, 2});
    CHECK(c.sim.forcing.nm == TaylorSpec{3, 2});
    CHECK(c.sim.forcing.n2 == TaylorSpec{1, 2});
    CHECK(c.sim.forcing.kind == ForcingKind::theorem2);
    CHECK(c.sim.t_end == 1.5);
    CHECK(c.expected_verdict() == "no-reconnection");
  }
  SUBCASE("field diagnostics") {
    auto message = [](const std::string& text) {
      try {
        parse_config(text, "cfg.json");
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message(R"({"sim": {"dt": "fast"}})").find("'sim.dt'") != std::string::npos);
    CHECK(message(R"({"sim": {"tdend": 1}})").find("'sim.tdend': unknown key") != std::string::npos);
    CHECK(message(R"({"n": [1]})").find("'n'") != std::string::npos);
    CHECK(message(R"({"scenario": "theorem9"})").find("'scenario'") != std::string::npos);
    CHECK(message(R"({"delta": -1})").find("'delta'") != std::string::npos);
    CHECK(message("{\n  \"T\": 1,\n  \"r\": }").find("cfg.json:3:") != std::string::npos);
    CHECK(message(R"({"scenario": "frozen-in", "sim": {"eta": 0.1}})").find("'sim.eta'") != std::string::npos);
    CHECK(message(R"({"scenario": "theorem2", "n": [1, 1], "n2": [2, 2]})").find("'n2'") != std::string::npos);
  }
  SUBCASE("missing file names the path") {
    try {
      load_config("/nonexistent/t2.json");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/t2.json") != std::string::npos);
    }
  }
  SUBCASE("resolved config round trips") {
    auto c = ExperimentConfig::defaults(Scenario::remark2);
    c.delta = 0.25;
    c.sim.forcing.custom.push_back({TaylorForce::Target::velocity, true, {1, 1}, 0.5});
    const auto j = to_json(c);
    CHECK(to_json(parse_config(j.dump())) == j);
  }
}

TEST_CASE("field specs") {
  const TorusGrid g(32);
  CHECK(parse_field_spec("taylor:2,3", g).identical(make_taylor({2, 3}, 1.0, g)));
  CHECK(parse_field_spec("tilde1:0.5", g).identical(make_tilde_t1(g, 0.5)));
  const auto sum = parse_field_spec("taylor:4,4,0.25 + tilde1:1e-3", g);
  CHECK(l2_norm(sum - make_taylor({4, 4}, 0.25, g) - make_tilde_t1(g, 1e-3)) == 0.0);
  CHECK(parse_field_spec("tilde1:1e+0", g).identical(make_tilde_t1(g)));
  CHECK(l2_norm(parse_field_spec("zero", g)) == 0.0);
  CHECK_THROWS_AS(parse_field_spec("taylor:1", g), ConfigError);
  CHECK_THROWS_AS(parse_field_spec("taylor:1,x", g), ConfigError);
  CHECK_THROWS_AS(parse_field_spec("vortex", g), ConfigError);
  CHECK_THROWS_AS(parse_field_spec("taylor:20,1", g), ConfigError);
  CHECK_THROWS_AS(parse_field_spec("", g), ConfigError);
}

TEST_CASE("log slope fit") {
  std::vector<double> t, y;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 * std::exp(-0.9 * t.back()));
  }
  CHECK(fit_log_slope(t, y, 1.0, 2.0) == doctest::Approx(-0.9).epsilon(1e-12));
  CHECK_THROWS_AS(fit_log_slope(t, y, 5.0, 6.0), InputError);
}

TEST_CASE("theorem1 scenario edge cases") {
  SUBCASE("T = 0 compares the field with itself") {
    auto cfg = small(Scenario::theorem1);
    cfg.T = 0.0;
    const auto rep = run_theorem1(cfg);
    CHECK(rep.verdict == "no-reconnection");
    CHECK(rep.signature_t0 == rep.signature_T);
  }
  SUBCASE("no perturbation, no change of topology") {
    auto cfg = small(Scenario::theorem1);
    cfg.delta = 0.0;
    const auto rep = run_theorem1(cfg);
    CHECK(rep.verdict == "no-reconnection");
    CHECK(rep.signature_T.n_points() == rep.signature_t0.n_points());
    CHECK_FALSE(rep.c1_distance.has_value());
  }
  SUBCASE("small desk run reconnects") {
    const auto rep = run_theorem1(small(Scenario::theorem1));
    CHECK(rep.signature_t0.n_points() >= 72);
    CHECK(rep.verdict == "reconnection");
  }
}

TEST_CASE("forced scenarios at small scale") {
  SUBCASE("theorem2") {
    auto cfg = small(Scenario::theorem2);
    const auto rep = run_theorem2(cfg);
    CHECK(rep.verdict == "reconnection");
    CHECK(rep.signature_t0.n_points() == 72);
    CHECK(rep.signature_T.n_points() == 8);
    for (double e : rep.oracle_rel_error) CHECK(e < 1e-6);
    for (double u : rep.velocity_l2) CHECK(u < 1e-8);
    cfg.T = 2.0;
    CHECK(*run_theorem2(cfg).hr_error < *rep.hr_error);
  }
  SUBCASE("remark2") {
    const auto rep = run_remark2(small(Scenario::remark2));
    CHECK(rep.verdict == "reconnection");
    CHECK(rep.signature_T.n_saddles == 2);
    CHECK(rep.signature_T.structurally_stable);
    CHECK(rep.exact_error.has_value());
    CHECK(*rep.hr_error == doctest::Approx(*rep.exact_error).epsilon(1e-6));
  }
}

TEST_CASE("frozen-in scenario") {
  auto cfg = small(Scenario::frozen_in);
  cfg.T = 0.0;
  const auto rep = run_frozen_in(cfg);
  CHECK(rep.frozen_error == 0.0);
  CHECK(rep.hausdorff < 1e-6);  // chord length vs traced arclength
  CHECK(rep.verdict == "pass");
  cfg.sim.eta = 0.1;
  CHECK_THROWS_AS(run_frozen_in(cfg), ConfigError);
}

TEST_CASE("stability scenario starts from the perturbation") {
  auto cfg = small(Scenario::stability_decay);
  cfg.halving_check = false;
  const auto rep = run_stability_decay(cfg);
  CHECK(rep.q0 == doctest::Approx(rep.q0_expected).epsilon(1e-12));
  CHECK(rep.halving_ratio.empty());
  CHECK(rep.slope < 0.0);
}

TEST_CASE("scenario runs are deterministic") {
  const auto cfg = small(Scenario::theorem2);
  const auto a = run_scenario(cfg), b = run_scenario(cfg);
  CHECK(without_timing(a.report) == without_timing(b.report));
  CHECK(a.run.final_state.b.identical(b.run.final_state.b));
  CHECK(a.report["config"] == to_json(cfg));
}

TEST_CASE("shipped configs load") {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(MHD_SOURCE_DIR "/configs")) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    const auto j = nlohmann::json::parse(std::ifstream(e.path()));
    if (j.contains("base"))
      CHECK_NOTHROW(parse_config(j["base"].dump()));
    else
      CHECK_NOTHROW(load_config(e.path()));
    ++n;
  }
  CHECK(n >= 7);
}
