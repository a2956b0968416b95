#include "mhd/config.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "mhd/errors.hpp"

namespace mhd {

using nlohmann::json;

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::theorem1: return "theorem1";
    case Scenario::theorem2: return "theorem2";
    case Scenario::remark2: return "remark2";
    case Scenario::frozen_in: return "frozen-in";
    case Scenario::stability_decay: return "stability";
    case Scenario::custom: return "custom";
  }
  return "?";
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "theorem1") return Scenario::theorem1;
  if (name == "theorem2") return Scenario::theorem2;
  if (name == "remark2") return Scenario::remark2;
  if (name == "frozen-in" || name == "frozen_in") return Scenario::frozen_in;
  if (name == "stability" || name == "stability-decay" || name == "stability_decay")
    return Scenario::stability_decay;
  if (name == "custom") return Scenario::custom;
  throw ConfigError("unknown scenario '" + name + "'");
}

ExperimentConfig ExperimentConfig::defaults(Scenario s) {
  ExperimentConfig c;
  c.scenario = s;
  c.sim.nu = 0.5;
  c.sim.eta = 0.5;
  c.sim.resolution = 128;
  c.sim.dt = 1e-3;
  c.sim.output_cadence = 100;
  switch (s) {
    case Scenario::theorem2: c.sim.forcing.kind = ForcingKind::theorem2; break;
    case Scenario::remark2: c.sim.forcing.kind = ForcingKind::remark2; break;
    case Scenario::frozen_in:
      c.sim.nu = 0.1;
      c.sim.eta = 0.0;
      c.T = 0.25;
      c.sim.output_cadence = 10;
      c.initial_u = "zero";
      c.initial_b = "tilde1";
      break;
    case Scenario::custom: c.T = 1.0; break;
    default: break;
  }
  c.sim.forcing.nm = c.nm;
  c.sim.forcing.n2 = c.n2;
  c.sim.t_end = c.T;
  return c;
}

std::string ExperimentConfig::expected_verdict() const {
  if (!expect.empty()) return expect;
  switch (scenario) {
    case Scenario::theorem1:
    case Scenario::theorem2:
    case Scenario::remark2: return "reconnection";
    case Scenario::frozen_in:
    case Scenario::stability_decay: return "pass";
    case Scenario::custom: return "completed";
  }
  return "";
}

void ExperimentConfig::validate() const {
  sim.validate();
  if (delta < 0.0) throw ConfigError("field 'delta': must be >= 0");
  if (T < 0.0) throw ConfigError("field 'T': must be >= 0");
  if (r < 0 || r > 8) throw ConfigError("field 'r': must lie in [0, 8]");
  if (topology_cadence < 0) throw ConfigError("field 'topology_cadence': must be >= 0");
  if (seed_grid < 0) throw ConfigError("field 'seed_grid': must be >= 0");
  if (frozen_seeds < 1) throw ConfigError("field 'frozen_in.seeds': must be >= 1");
  if (line_arclength <= 0.0) throw ConfigError("field 'frozen_in.line_arclength': must be > 0");
  if (rate_tol < 0.0 || rate_tol >= 1.0) throw ConfigError("field 'stability.rate_tol': must lie in [0, 1)");
  if (scenario == Scenario::frozen_in && sim.eta != 0.0)
    throw ConfigError("field 'sim.eta': the frozen-in scenario needs eta = 0");
  if (scenario == Scenario::stability_decay && (sim.nu <= 0.0 || sim.eta <= 0.0))
    throw ConfigError("field 'sim': the stability scenario needs nu > 0 and eta > 0");
  if ((scenario == Scenario::theorem2 || scenario == Scenario::remark2) && sim.eta <= 0.0)
    throw ConfigError("field 'sim.eta': forced scenarios need eta > 0");
  if (scenario == Scenario::theorem2 && n2.eigenvalue() >= nm.eigenvalue())
    throw ConfigError("field 'n2': need n2^2 + m2^2 < n^2 + m^2");
}

namespace {

// Typed access to one JSON object with the dotted path kept for messages.
class Reader {
 public:
  Reader(const json& j, std::string path, const std::string& origin) : j_(j), path_(std::move(path)), origin_(origin) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(origin_ + ": field '" + full(key) + "': " + what);
  }
  std::string full(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }
  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
    }
  }
  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<int>();
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }
  void pair(const std::string& key, TaylorSpec& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer())
        fail(key, "expected [n, m] with integer entries");
      out = {(*v)[0].get<int>(), (*v)[1].get<int>()};
      if (out.n < 1 || out.m < 1) fail(key, "mode numbers must be >= 1");
    }
  }
  std::optional<Reader> object(const std::string& key) {
    if (const json* v = find(key)) return Reader(*v, full(key), origin_);
    return std::nullopt;
  }
  const json* raw(const std::string& key) { return find(key); }
  const std::string& origin() const { return origin_; }
  void no_unknown_keys() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(k, "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::string origin_;
  std::set<std::string> seen_;
};

ForcingKind forcing_kind(const std::string& s, const Reader& r) {
  if (s == "none") return ForcingKind::none;
  if (s == "theorem2") return ForcingKind::theorem2;
  if (s == "remark2") return ForcingKind::remark2;
  if (s == "custom") return ForcingKind::custom;
  r.fail("kind", "expected none, theorem2, remark2 or custom");
}

const char* forcing_name(ForcingKind k) {
  switch (k) {
    case ForcingKind::none: return "none";
    case ForcingKind::theorem2: return "theorem2";
    case ForcingKind::remark2: return "remark2";
    case ForcingKind::custom: return "custom";
  }
  return "?";
}

void read_forcing(Reader& r, ForcingSpec& f) {
  std::string kind = forcing_name(f.kind);
  r.string("kind", kind);
  f.kind = forcing_kind(kind, r);
  if (const json* terms = r.raw("terms")) {
    if (!terms->is_array()) r.fail("terms", "expected an array");
    f.custom.clear();
    for (std::size_t i = 0; i < terms->size(); ++i) {
      Reader t((*terms)[i], r.full("terms[" + std::to_string(i) + "]"), r.origin());
      TaylorForce tf;
      std::string target = "magnetic", field = "taylor";
      t.string("target", target);
      t.string("field", field);
      t.pair("mode", tf.spec);
      t.number("amplitude", tf.amplitude);
      t.no_unknown_keys();
      if (target != "magnetic" && target != "velocity") t.fail("target", "expected magnetic or velocity");
      if (field != "taylor" && field != "tilde1") t.fail("field", "expected taylor or tilde1");
      tf.target = target == "magnetic" ? TaylorForce::Target::magnetic : TaylorForce::Target::velocity;
      tf.tilde_t1 = field == "tilde1";
      f.custom.push_back(tf);
    }
  }
  r.no_unknown_keys();
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ":" + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  Reader root(j, "", origin);
  std::string scenario = "custom";
  root.string("scenario", scenario);
  ExperimentConfig c;
  try {
    c = ExperimentConfig::defaults(scenario_from_string(scenario));
  } catch (const ConfigError& e) {
    root.fail("scenario", e.what());
  }

  if (auto sim = root.object("sim")) {
    sim->number("nu", c.sim.nu);
    sim->number("eta", c.sim.eta);
    sim->integer("resolution", c.sim.resolution);
    sim->number("dt", c.sim.dt);
    sim->integer("output_cadence", c.sim.output_cadence);
    sim->boolean("dealias", c.sim.dealias);
    sim->integer("diagnostics_rmax", c.sim.diagnostics_rmax);
    if (auto f = sim->object("forcing")) read_forcing(*f, c.sim.forcing);
    sim->no_unknown_keys();
  }
  root.pair("n", c.nm);
  root.pair("n2", c.n2);
  root.number("delta", c.delta);
  root.number("T", c.T);
  root.integer("r", c.r);
  root.integer("topology_cadence", c.topology_cadence);
  root.integer("seed_grid", c.seed_grid);
  root.string("expect", c.expect);
  if (auto init = root.object("initial")) {
    init->string("u", c.initial_u);
    init->string("b", c.initial_b);
    init->no_unknown_keys();
  }
  if (auto fz = root.object("frozen_in")) {
    fz->integer("seeds", c.frozen_seeds);
    fz->number("line_arclength", c.line_arclength);
    fz->no_unknown_keys();
  }
  if (auto st = root.object("stability")) {
    st->number("rate_tol", c.rate_tol);
    st->boolean("halving_check", c.halving_check);
    st->no_unknown_keys();
  }
  root.no_unknown_keys();

  c.sim.t_end = c.T;
  c.sim.forcing.nm = c.nm;
  c.sim.forcing.n2 = c.n2;
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.string());
}

json to_json(const ExperimentConfig& c) {
  json terms = json::array();
  for (const auto& t : c.sim.forcing.custom)
    terms.push_back({{"target", t.target == TaylorForce::Target::magnetic ? "magnetic" : "velocity"},
                     {"field", t.tilde_t1 ? "tilde1" : "taylor"},
                     {"mode", {t.spec.n, t.spec.m}},
                     {"amplitude", t.amplitude}});
  return {{"scenario", to_string(c.scenario)},
          {"sim",
           {{"nu", c.sim.nu},
            {"eta", c.sim.eta},
            {"resolution", c.sim.resolution},
            {"dt", c.sim.dt},
            {"output_cadence", c.sim.output_cadence},
            {"dealias", c.sim.dealias},
            {"diagnostics_rmax", c.sim.diagnostics_rmax},
            {"forcing", {{"kind", forcing_name(c.sim.forcing.kind)}, {"terms", terms}}}}},
          {"n", {c.nm.n, c.nm.m}},
          {"n2", {c.n2.n, c.n2.m}},
          {"delta", c.delta},
          {"T", c.T},
          {"r", c.r},
          {"topology_cadence", c.topology_cadence},
          {"seed_grid", c.seed_grid},
          {"expect", c.expected_verdict()},
          {"initial", {{"u", c.initial_u}, {"b", c.initial_b}}},
          {"frozen_in", {{"seeds", c.frozen_seeds}, {"line_arclength", c.line_arclength}}},
          {"stability", {{"rate_tol", c.rate_tol}, {"halving_check", c.halving_check}}}};
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

double number_in(const std::string& s, const std::string& term) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(s.substr(used)) != "") throw ConfigError("bad number '" + s + "' in field term '" + term + "'");
  return v;
}

int integer_in(const std::string& s, const std::string& term) {
  const double v = number_in(s, term);
  if (v != static_cast<int>(v)) throw ConfigError("expected an integer in field term '" + term + "'");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep, bool keep_exponent = false) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // keep the sign of an exponent such as 1e+3 inside its number
    const bool exponent = keep_exponent && i > 0 && (s[i - 1] == 'e' || s[i - 1] == 'E') && i > 1 &&
                          std::isdigit(static_cast<unsigned char>(s[i - 2]));
    if (s[i] == sep && !exponent) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += s[i];
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

SpectralField2D parse_field_spec(const std::string& spec, const TorusGrid& grid) {
  SpectralField2D sum(grid);
  if (trim(spec).empty()) throw ConfigError("empty field spec");
  for (const auto& raw : split(spec, '+', true)) {
    const std::string term = trim(raw);
    const auto colon = term.find(':');
    const std::string head = term.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : term.substr(colon + 1);
    if (head == "zero" && args.empty()) continue;
    if (head == "tilde1") {
      sum = sum + make_tilde_t1(grid, args.empty() ? 1.0 : number_in(args, term));
    } else if (head == "taylor") {
      const auto parts = split(args, ',');
      if (parts.size() != 2 && parts.size() != 3)
        throw ConfigError("field term '" + term + "': expected taylor:n,m[,amp]");
      const TaylorSpec ts{integer_in(parts[0], term), integer_in(parts[1], term)};
      if (ts.n < 1 || ts.m < 1) throw ConfigError("field term '" + term + "': n and m must be >= 1");
      sum = sum + make_taylor(ts, parts.size() == 3 ? number_in(parts[2], term) : 1.0, grid);
    } else {
      throw ConfigError("unknown field term '" + term + "' (use zero, taylor:n,m[,amp], tilde1[:amp])");
    }
  }
  return sum;
}

}  // namespace mhd
