#pragma once

// Mesh-independent trivializations. A geometric cut is a union of great
// arcs pairing the configuration points; sections are compared across meshes
// after being rewritten in the trivialization that flips sign exactly across
// these arcs.

#include "z2eig/pipeline.hpp"

#include <functional>
#include <optional>

namespace z2eig {

struct GreatArc {
  Vec3 a, b;
  Vec3 normal;   // unit normal of the carrying great circle, a x b direction
  double length; // radians, in (0, pi]
};

/// Minor arc from a to b. For (nearly) antipodal endpoints the half circle
/// through `via` is used.
GreatArc great_arc(const Vec3& a, const Vec3& b, const Vec3& via = Vec3(1.0, 0.0, 0.0));

using GeometricCut = std::vector<GreatArc>;

/// One arc per pair of the mesh cut.
GeometricCut geometric_cut(const Configuration& config, const CutSystem& cut, const Vec3& via = Vec3(1.0, 0.0, 0.0));

/// Parity of the number of arcs crossed by the chord from x to y.
bool crosses(const GeometricCut& cut, const Vec3& x, const Vec3& y);

/// Locates the triangle containing the radial projection of a point.
class PointLocator {
 public:
  explicit PointLocator(const SphericalMesh& mesh);
  /// Triangle index and barycentric weights. Always succeeds on a closed mesh.
  std::pair<int, Vec3> locate(const Vec3& x) const;

 private:
  const SphericalMesh* mesh_;
  int grid_ = 1;
  std::vector<std::vector<int>> cells_;
  int cell_index(const Vec3& x) const;
};

/// Per-vertex signs t with t_i t_j sigma_ij = -1 exactly on the edges whose
/// chord crosses the geometric cut (0 on pinned vertices). Throws
/// HolonomyViolation when the two trivializations are not gauge equivalent.
std::vector<signed char> geometric_gauge(const Problem& problem, const GeometricCut& cut);

/// Evaluates a section anywhere on S^2 in the geometric-cut trivialization by
/// linear interpolation inside the containing triangle.
class SectionSampler {
 public:
  SectionSampler(const Problem& problem, const GeometricCut& cut, const Vector& f);
  double operator()(const Vec3& x) const;
  /// Vertex values in the geometric trivialization.
  const Vector& aligned() const noexcept { return aligned_; }

 private:
  const Problem* problem_;
  GeometricCut cut_;
  PointLocator locator_;
  Vector aligned_;
};

/// Transfers a section from one problem to another through the geometric
/// trivializations `from_cut` and `to_cut`; values at pinned vertices of the
/// target are dropped.
Vector transfer(const Problem& from, const GeometricCut& from_cut, const Vector& f, const Problem& to,
                const GeometricCut& to_cut);

/// Samples a function given in the geometric trivialization onto the free
/// vertices of a problem.
Vector sample_section(const Problem& problem, const GeometricCut& cut, const std::function<double(const Vec3&)>& g);

}  // namespace z2eig
