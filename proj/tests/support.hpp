#pragma once

// Small meshes shared by the unit tests.

#include "z2eig/experiments.hpp"
#include "z2eig/pipeline.hpp"

namespace testing {

inline z2eig::ProblemParams small_mesh(int background = 4000, int depth = 2) {
  z2eig::ProblemParams p;
  p.mesh.background_count = background;
  p.mesh.grade_depth = depth;
  return p;
}

/// Antipodal pair on a 12k / depth 3 mesh, built once.
inline const z2eig::Problem& antipodal_problem() {
  static const z2eig::Problem p = z2eig::Problem::build(z2eig::c2_configuration(z2eig::kPi), small_mesh(12000, 3));
  return p;
}

inline const std::vector<z2eig::EigenPair>& antipodal_pairs() {
  static const auto pairs = antipodal_problem().solve(6);
  return pairs;
}

}  // namespace testing
