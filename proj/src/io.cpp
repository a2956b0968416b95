#include "mhd/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "mhd/errors.hpp"

namespace mhd {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'M', 'H', 'D', '2'};

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw InputError("snapshot truncated");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

SpectralField2D Snapshot::field(const std::string& name) const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i] == name) return SpectralField2D::from_coefficients(TorusGrid(resolution), data[i]);
  throw InputError("snapshot has no field '" + name + "'");
}

Snapshot make_snapshot(const MHDState& s, double nu, double eta) {
  Snapshot snap;
  snap.time = s.t;
  snap.nu = nu;
  snap.eta = eta;
  snap.resolution = s.grid().resolution();
  snap.fields = {"u", "b"};
  snap.data = {s.u.components(), s.b.components()};
  return snap;
}

MHDState to_state(const Snapshot& snap) { return {snap.field("u"), snap.field("b"), snap.time}; }

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  if (snap.fields.size() != snap.data.size()) throw MisuseError("snapshot field names and data differ in count");
  const std::size_t n = static_cast<std::size_t>(snap.resolution) * snap.resolution;
  const json header = {{"format_version", Snapshot::kFormatVersion},
                       {"time", snap.time},
                       {"nu", snap.nu},
                       {"eta", snap.eta},
                       {"resolution", snap.resolution},
                       {"fields", snap.fields}};
  const std::string text = header.dump();
  os.write(kMagic, 4);
  put_le<std::int32_t>(os, Snapshot::kFormatVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(text.size()));
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& f : snap.data)
    for (const auto& comp : f) {
      if (comp.size() != n) throw MisuseError("snapshot payload length differs from resolution^2");
      for (const auto& c : comp) {
        put_le(os, c.real());
        put_le(os, c.imag());
      }
    }
  if (!os) throw InputError("snapshot write failed");
}

Snapshot read_snapshot(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw InputError("not an MHD2 snapshot");
  const auto version = get_le<std::int32_t>(is);
  if (version != Snapshot::kFormatVersion)
    throw InputError("unsupported snapshot version " + std::to_string(version));
  const auto len = get_le<std::uint32_t>(is);
  std::string text(len, '\0');
  if (!is.read(text.data(), len)) throw InputError("snapshot header truncated");
  Snapshot snap;
  try {
    const json h = json::parse(text);
    snap.time = h.at("time").get<double>();
    snap.nu = h.at("nu").get<double>();
    snap.eta = h.at("eta").get<double>();
    snap.resolution = h.at("resolution").get<int>();
    snap.fields = h.at("fields").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad snapshot header: ") + e.what());
  }
  if (snap.resolution < 8 || snap.resolution % 2 != 0) throw InputError("bad snapshot resolution");
  const std::size_t n = static_cast<std::size_t>(snap.resolution) * snap.resolution;
  for (std::size_t f = 0; f < snap.fields.size(); ++f) {
    std::array<Spectrum, 2> d;
    for (auto& comp : d) {
      comp.resize(n);
      for (auto& c : comp) {
        const double re = get_le<double>(is);
        c = {re, get_le<double>(is)};
      }
    }
    snap.data.push_back(std::move(d));
  }
  return snap;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open " + path.string() + " for writing");
  write_snapshot(os, snap);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open snapshot " + path.string());
  return read_snapshot(is);
}

json to_json(const TopologySignature& s) {
  return {{"n_saddles", s.n_saddles},
          {"n_centers", s.n_centers},
          {"n_degenerate", s.n_degenerate},
          {"n_points", s.n_points()},
          {"hetero_connections", s.hetero_connections},
          {"self_connections", s.self_connections},
          {"structurally_stable", s.structurally_stable}};
}

TopologySignature signature_from_json(const json& j) {
  TopologySignature s;
  s.n_saddles = j.at("n_saddles").get<int>();
  s.n_centers = j.at("n_centers").get<int>();
  s.n_degenerate = j.at("n_degenerate").get<int>();
  s.hetero_connections = j.at("hetero_connections").get<int>();
  s.self_connections = j.at("self_connections").get<int>();
  s.structurally_stable = j.at("structurally_stable").get<bool>();
  return s;
}

json to_json(const DiagnosticsRecord& r) {
  json j = {{"t", r.t},
            {"energy_u", r.energy_u},
            {"energy_b", r.energy_b},
            {"cross_helicity", r.cross_helicity},
            {"sobolev_u", r.sobolev_u},
            {"sobolev_b", r.sobolev_b}};
  j["signature"] = r.signature ? to_json(*r.signature) : json(nullptr);
  return j;
}

DiagnosticsRecord diagnostics_from_json(const json& j) {
  DiagnosticsRecord r;
  r.t = j.at("t").get<double>();
  r.energy_u = j.at("energy_u").get<double>();
  r.energy_b = j.at("energy_b").get<double>();
  r.cross_helicity = j.at("cross_helicity").get<double>();
  r.sobolev_u = j.at("sobolev_u").get<std::vector<double>>();
  r.sobolev_b = j.at("sobolev_b").get<std::vector<double>>();
  if (j.contains("signature") && !j["signature"].is_null()) r.signature = signature_from_json(j["signature"]);
  return r;
}

void write_ndjson(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
  for (const auto& r : records) os << to_json(r).dump() << '\n';
}

std::vector<DiagnosticsRecord> read_ndjson(std::istream& is) {
  std::vector<DiagnosticsRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(diagnostics_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw InputError("diagnostics line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void NdjsonSink::record(const DiagnosticsRecord& r) { os_ << to_json(r).dump() << '\n'; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot open " + path.string() + " for writing");
  os << text;
}

}  // namespace mhd
