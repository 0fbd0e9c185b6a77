#pragma once

// Cut system, sign cochain and the twisted stiffness / mass pencil.

#include "z2eig/mesh.hpp"

#include <Eigen/Sparse>

#include <cstdint>
#include <vector>

namespace z2eig {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Vertex path v_0 ... v_m along mesh edges joining two configuration points.
struct CutPath {
  int point_a = -1, point_b = -1;  // configuration indices
  std::vector<int> vertices;       // mesh vertices, front() and back() are flagged
};

struct CutSystem {
  std::vector<CutPath> paths;
  /// Edges whose sign is flipped, i.e. edges dual-crossing some path.
  std::vector<int> crossing_edges;
  /// Configuration index paired with each point.
  std::vector<int> partner;
};

/// Greedy nearest-pair matching joined by hop-shortest vertex paths that
/// avoid earlier paths and other configuration points. `order_seed` shuffles
/// the pairing order on retries. Throws MatchingFailed when no order works.
CutSystem build_cut_system(const Configuration& config, const SphericalMesh& mesh, std::uint64_t order_seed = 0);

struct SignCochain {
  std::vector<signed char> sigma;  // per mesh edge

  int operator[](int e) const { return sigma[e]; }
  /// Product of signs along a closed vertex loop.
  int holonomy(const SphericalMesh& mesh, const std::vector<int>& loop) const;
};

/// Sign cochain of a cut system: at every interior vertex of a path the edges
/// leaving to the left of the path are flipped. Checks flatness on triangles
/// free of configuration points and monodromy -1 around each configuration
/// point; throws HolonomyViolation otherwise.
SignCochain edge_signs(const CutSystem& cut, const SphericalMesh& mesh);

/// All-plus cochain for the untwisted control.
SignCochain trivial_signs(const SphericalMesh& mesh);

struct AssemblyOptions {
  /// Additional vertices held at zero.
  std::vector<int> extra_pinned;
  /// Keep configuration vertices free (untwisted control on a twisted mesh).
  bool pin_configuration = true;
};

struct TwistedOperators {
  SparseMatrix stiffness;  // free x free, symmetric
  Vector mass;             // lumped, free
  std::vector<int> free_to_vertex;
  std::vector<int> vertex_to_free;  // -1 for pinned vertices
  double negative_weight_fraction = 0.0;

  int size() const { return static_cast<int>(mass.size()); }
  /// Extends free values by zero to all mesh vertices.
  Vector to_vertices(const Vector& f) const;
  Vector to_free(const Vector& vertex_values) const;
};

TwistedOperators assemble(const SphericalMesh& mesh, const SignCochain& signs, const AssemblyOptions& opts = {});

double energy(const Vector& f, const TwistedOperators& ops);
double mass_norm2(const Vector& f, const TwistedOperators& ops);
/// f^T S f + f^T M f.
double hilbert_norm(const Vector& f, const TwistedOperators& ops);
/// f^T S f / f^T M f. Throws ZeroSection.
double rayleigh(const Vector& f, const TwistedOperators& ops);

}  // namespace z2eig
