#pragma once

namespace mhd {

/// Computable topological invariants of a field's integral lines.
struct TopologySignature {
  int n_saddles = 0;
  int n_centers = 0;
  int n_degenerate = 0;
  int hetero_connections = 0;
  int self_connections = 0;
  bool structurally_stable = false;

  int n_points() const noexcept { return n_saddles + n_centers + n_degenerate; }
  friend bool operator==(const TopologySignature&, const TopologySignature&) = default;
};

}  // namespace mhd
