#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mhd/solver.hpp"

namespace mhd {

/// Binary field dump: "MHD2", int32 version, uint32 header length, JSON
/// header, then per named field two little-endian complex<double> arrays of
/// resolution^2 entries in FFT index order.
struct Snapshot {
  static constexpr int kFormatVersion = 1;

  double time = 0.0;
  double nu = 0.0;
  double eta = 0.0;
  int resolution = 0;
  std::vector<std::string> fields;
  std::vector<std::array<Spectrum, 2>> data;

  /// Named field as a SpectralField2D (validated). Throws InputError when absent.
  SpectralField2D field(const std::string& name) const;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

Snapshot make_snapshot(const MHDState& s, double nu, double eta);
/// Needs fields "u" and "b".
MHDState to_state(const Snapshot& snap);

void write_snapshot(std::ostream& os, const Snapshot& snap);
Snapshot read_snapshot(std::istream& is);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

nlohmann::json to_json(const TopologySignature& s);
TopologySignature signature_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DiagnosticsRecord& r);
DiagnosticsRecord diagnostics_from_json(const nlohmann::json& j);

/// One JSON object per line.
void write_ndjson(std::ostream& os, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_ndjson(std::istream& is);

/// Streams records to an NDJSON file as they arrive; snapshots are ignored.
class NdjsonSink : public DiagnosticSink {
 public:
  explicit NdjsonSink(std::ostream& os) : os_(os) {}
  void record(const DiagnosticsRecord& r) override;

 private:
  std::ostream& os_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mhd
