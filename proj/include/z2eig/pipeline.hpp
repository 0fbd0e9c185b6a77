#pragma once

// Mesh, cut, signs and operators for one configuration, kept together.

#include "z2eig/eigensolver.hpp"

namespace z2eig {

struct ProblemParams {
  MeshParams mesh;
  std::uint64_t cut_seed = 0;
  /// Extra pinned vertices, for pinning experiments.
  std::vector<int> extra_pinned;
};

class Problem {
 public:
  /// Twisted problem for an even configuration.
  static Problem build(const Configuration& config, const ProblemParams& params = {});
  /// Plain Laplacian on a mesh conforming to `config` (which may be empty);
  /// no signs, nothing pinned.
  static Problem untwisted(const Configuration& config, const ProblemParams& params = {});
  /// Twisted problem on a given mesh with a given cut.
  static Problem from_parts(Configuration config, SphericalMesh mesh, CutSystem cut, const ProblemParams& params = {});

  /// The configuration moved by exp(t nu), realized by rotating the mesh near
  /// each moving point: same vertices, edges, cut and signs. The rotation
  /// is rigid within a quarter of half the nearest-neighbour distance and
  /// fades out smoothly beyond it.
  Problem morphed(const ConfigTangent& nu, double t) const;

  const Configuration& config() const noexcept { return config_; }
  const SphericalMesh& mesh() const noexcept { return mesh_; }
  const CutSystem& cut() const noexcept { return cut_; }
  const SignCochain& signs() const noexcept { return signs_; }
  const TwistedOperators& ops() const noexcept { return ops_; }
  const ProblemParams& params() const noexcept { return params_; }
  bool twisted() const noexcept { return twisted_; }

  std::vector<EigenPair> solve(int k, const SolverOptions& opts = {}, SolveReport* report = nullptr) const;
  Vector vertex_values(const Vector& f) const { return ops_.to_vertices(f); }

 private:
  void finish();

  Configuration config_;
  SphericalMesh mesh_;
  CutSystem cut_;
  SignCochain signs_;
  TwistedOperators ops_;
  ProblemParams params_;
  bool twisted_ = true;
};

/// Rotation of x about unit `axis` by `angle` (right-hand rule).
Vec3 rotate_about(const Vec3& x, const Vec3& axis, double angle);

}  // namespace z2eig
