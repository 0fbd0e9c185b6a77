#pragma once

// Zero locus of an eigensection as an embedded graph.

#include "z2eig/pipeline.hpp"

namespace z2eig {

enum class NodeKind { Branch, Critical };

struct ZeroNode {
  Vec3 position;
  NodeKind kind = NodeKind::Branch;
  int degree = 0;
  int point = -1;   // configuration index for branch nodes
  int vertex = -1;  // representative mesh vertex
};

struct ZeroEdge {
  int from = -1, to = -1;     // node indices; both -1 for a closed loop without nodes
  std::vector<Vec3> polyline;
  /// Per polyline point: the mesh edge carrying it, or -(v + 1) for a point
  /// at mesh vertex v.
  std::vector<int> carriers;
};

struct ZeroGraph {
  std::vector<ZeroNode> nodes;
  std::vector<ZeroEdge> edges;
  int components = 0;
  int cycles = 0;  // first Betti number

  int branch_nodes() const;
  int critical_nodes() const;
};

struct NodalParams {
  double eps_z = 1e-6;         // near-zero threshold relative to max |f|
  bool perturbation_check = true;  // re-read degrees at 10 eps_z
};

/// Marching-triangles extraction in the local trivialization of each
/// triangle. Branch points are always nodes; near-zero vertices are merged
/// into nodes and suppressed when they are plain joints. Throws
/// UnresolvedNode when a degree has the wrong parity or changes under the
/// perturbation check.
ZeroGraph extract_zero_graph(const Problem& problem, const Vector& f, const NodalParams& params = {});

struct EulerCharacteristic {
  int combinatorial = 0;  // V - E
  int closed_form = 0;    // 2n + |c| - sum_p (2n_p + 1)/2 - sum_c m_c
  bool agree() const { return combinatorial == closed_form; }
};

EulerCharacteristic euler_characteristic(const ZeroGraph& graph, std::size_t config_size);

struct VanishingCensus {
  int vanishing = 0;   // branch nodes of degree 1 (n_p = 0)
  int required = 0;    // n + 1 for the ground state, max(0, n + 1 - k) for the k-th
  bool has_cycles = false;
  bool pass = false;
  std::vector<int> orders;  // (degree - 1) / 2 per configuration point
};

/// `k` is the 1-based index of the eigensection within the spectrum.
VanishingCensus vanishing_census(const ZeroGraph& graph, std::size_t config_size, int k = 1);

}  // namespace z2eig
