#include "z2eig/pipeline.hpp"

#include "z2eig/error.hpp"

#include <cmath>

namespace z2eig {

Vec3 rotate_about(const Vec3& x, const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return c * x + s * axis.cross(x) + (1.0 - c) * axis.dot(x) * axis;
}

Problem Problem::build(const Configuration& config, const ProblemParams& params) {
  if (config.size() == 0) throw Error(ErrorCode::InvalidInput, "twisted problem needs at least one pair");
  SphericalMesh mesh = build_mesh(config, params.mesh);
  CutSystem cut = build_cut_system(config, mesh, params.cut_seed);
  return from_parts(config, std::move(mesh), std::move(cut), params);
}

Problem Problem::from_parts(Configuration config, SphericalMesh mesh, CutSystem cut, const ProblemParams& params) {
  Problem p;
  p.config_ = std::move(config);
  p.mesh_ = std::move(mesh);
  p.cut_ = std::move(cut);
  p.params_ = params;
  p.signs_ = edge_signs(p.cut_, p.mesh_);
  p.finish();
  return p;
}

Problem Problem::untwisted(const Configuration& config, const ProblemParams& params) {
  Problem p;
  p.config_ = config;
  p.params_ = params;
  p.twisted_ = false;
  p.mesh_ = build_mesh(config, params.mesh);
  p.cut_.partner.assign(config.size(), -1);
  p.signs_ = trivial_signs(p.mesh_);
  p.finish();
  return p;
}

void Problem::finish() {
  AssemblyOptions ao;
  ao.extra_pinned = params_.extra_pinned;
  ao.pin_configuration = twisted_;
  ops_ = assemble(mesh_, signs_, ao);
}

Problem Problem::morphed(const ConfigTangent& nu, double t) const {
  if (nu.v.size() != config_.size()) throw Error(ErrorCode::InvalidInput, "tangent size does not match configuration");
  std::vector<Vec3> verts = mesh_.vertices();
  for (std::size_t k = 0; k < config_.size(); ++k) {
    const double len = nu.v[k].norm();
    if (len == 0.0) continue;
    const Vec3& p = config_[k];
    const Vec3 axis = p.cross(nu.v[k] / len).normalized();
    const double radius = 0.5 * config_.nearest_distance(k);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const double w = chi(geodesic_distance(mesh_.vertices()[i], p) / radius);
      if (w > 0.0) verts[i] = rotate_about(mesh_.vertices()[i], axis, w * t * len).normalized();
    }
  }
  Problem q;
  q.config_ = displace(config_, nu, t);
  q.mesh_ = mesh_.displaced(verts);
  q.cut_ = cut_;
  q.signs_ = signs_;
  q.params_ = params_;
  q.twisted_ = twisted_;
  q.finish();
  return q;
}

std::vector<EigenPair> Problem::solve(int k, const SolverOptions& opts, SolveReport* report) const {
  return lowest_eigenpairs(ops_, k, opts, report);
}

}  // namespace z2eig
