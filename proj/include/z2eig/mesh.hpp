#pragma once

// Spherical Delaunay meshes conforming to a configuration.

#include "z2eig/geometry.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace z2eig {

using Triangle = std::array<int, 3>;

/// Convex hull of points on the unit sphere (equivalently their spherical
/// Delaunay triangulation). Triangles are oriented counter-clockwise seen from
/// outside. Throws MeshDegenerate if fewer than four points or if the hull
/// does not have the topology of a sphere.
std::vector<Triangle> spherical_delaunay(const std::vector<Vec3>& points, std::uint64_t seed = 7);

/// Golden-spiral points on S^2.
std::vector<Vec3> fibonacci_points(int count);

struct MeshParams {
  int background_count = 30000;
  int grade_depth = 4;
  double grade_radius = 0.25;
  double min_angle_deg = 5.0;
  /// Applied to the background points only; used for equivariance checks.
  Mat3 rotation = Mat3::Identity();
  std::uint64_t seed = 7;
};

struct Edge {
  int a = -1, b = -1;                // a < b
  std::array<int, 2> tri{-1, -1};    // incident triangles
  std::array<int, 2> opp{-1, -1};    // vertex opposite the edge in tri[k]
  double cot_weight = 0.0;           // (cot alpha + cot beta) / 2
  double length = 0.0;               // geodesic length
};

struct MeshQuality {
  double min_angle_deg = 0.0;
  double min_edge = 0.0;
  double max_edge = 0.0;
  int negative_weights = 0;
};

/// Neighbour of a vertex in its counter-clockwise star.
struct StarEntry {
  int vertex;
  int edge;
};

class SphericalMesh {
 public:
  /// Builds connectivity and geometry. `config_vertex[k]` is the mesh vertex
  /// of configuration point k.
  static SphericalMesh from_triangulation(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                                          std::vector<int> config_vertex);

  /// Same connectivity with moved vertices.
  SphericalMesh displaced(const std::vector<Vec3>& new_vertices) const;

  const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& vertex_area() const noexcept { return vertex_area_; }
  const std::vector<double>& triangle_area() const noexcept { return triangle_area_; }
  /// Configuration index of each vertex, -1 for background vertices.
  const std::vector<int>& flag() const noexcept { return flag_; }
  bool flagged(int v) const { return flag_[v] >= 0; }
  const std::vector<int>& config_vertex() const noexcept { return config_vertex_; }
  /// Counter-clockwise (outward normal) ordered star of v.
  const std::vector<StarEntry>& star(int v) const { return stars_[v]; }
  /// Edge index joining a and b, or -1.
  int find_edge(int a, int b) const;
  /// Edge index for local edge k (v[k], v[k+1]) of triangle t.
  int triangle_edge(int t, int k) const { return tri_edges_[t][k]; }
  const MeshQuality& quality() const noexcept { return quality_; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t triangle_count() const noexcept { return triangles_.size(); }
  int euler_characteristic() const {
    return static_cast<int>(vertices_.size()) - static_cast<int>(edges_.size()) +
           static_cast<int>(triangles_.size());
  }
  /// Mean length of edges at v.
  double local_size(int v) const;

 private:
  void compute_geometry();

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<double> vertex_area_;
  std::vector<double> triangle_area_;
  std::vector<int> flag_;
  std::vector<int> config_vertex_;
  std::vector<std::vector<StarEntry>> stars_;
  MeshQuality quality_;
};

/// Delaunay mesh of the configuration plus Fibonacci background points,
/// followed by graded refinement: at round k every edge of a triangle within
/// grade_radius 2^-k of a configuration point is split at its midpoint and
/// the triangulation is rebuilt. Throws MeshDegenerate when the minimum angle
/// falls below params.min_angle_deg.
SphericalMesh build_mesh(const Configuration& config, const MeshParams& params = {});

/// Spherical triangle area (solid angle).
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace z2eig
