#include "z2eig/mesh.hpp"

#include "z2eig/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace z2eig {

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double cot_at(const Vec3& apex, const Vec3& p, const Vec3& q) {
  const Vec3 u = p - apex, v = q - apex;
  return u.dot(v) / u.cross(v).norm();
}

double angle_at(const Vec3& apex, const Vec3& p, const Vec3& q) {
  const Vec3 u = p - apex, v = q - apex;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

}  // namespace

SphericalMesh SphericalMesh::from_triangulation(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                                                std::vector<int> config_vertex) {
  SphericalMesh m;
  m.vertices_ = std::move(vertices);
  m.triangles_ = std::move(triangles);
  m.config_vertex_ = std::move(config_vertex);
  const int nv = static_cast<int>(m.vertices_.size());
  m.flag_.assign(nv, -1);
  for (std::size_t k = 0; k < m.config_vertex_.size(); ++k) m.flag_[m.config_vertex_[k]] = static_cast<int>(k);

  std::unordered_map<std::uint64_t, int> index;
  index.reserve(m.triangles_.size() * 2);
  m.tri_edges_.resize(m.triangles_.size());
  for (std::size_t t = 0; t < m.triangles_.size(); ++t) {
    const auto& tr = m.triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tr[k], b = tr[(k + 1) % 3], c = tr[(k + 2) % 3];
      auto [it, fresh] = index.try_emplace(edge_key(a, b), static_cast<int>(m.edges_.size()));
      if (fresh) {
        Edge e;
        e.a = std::min(a, b);
        e.b = std::max(a, b);
        m.edges_.push_back(e);
      }
      Edge& e = m.edges_[it->second];
      const int slot = e.tri[0] < 0 ? 0 : 1;
      if (e.tri[slot] >= 0) throw Error(ErrorCode::MeshDegenerate, "edge shared by more than two triangles");
      e.tri[slot] = static_cast<int>(t);
      e.opp[slot] = c;
      m.tri_edges_[t][k] = it->second;
    }
  }
  for (const auto& e : m.edges_)
    if (e.tri[1] < 0) throw Error(ErrorCode::MeshDegenerate, "triangulation has a boundary edge");

  // counter-clockwise stars: in triangle (a, b, c) the neighbour after b around a is c
  std::vector<std::unordered_map<int, int>> next(nv);
  for (const auto& tr : m.triangles_)
    for (int k = 0; k < 3; ++k) next[tr[k]][tr[(k + 1) % 3]] = tr[(k + 2) % 3];
  m.stars_.resize(nv);
  for (int v = 0; v < nv; ++v) {
    if (next[v].empty()) throw Error(ErrorCode::MeshDegenerate, "isolated vertex " + std::to_string(v));
    int first = next[v].begin()->first;
    for (const auto& kv : next[v]) first = std::min(first, kv.first);
    int w = first;
    do {
      m.stars_[v].push_back({w, index.at(edge_key(v, w))});
      auto it = next[v].find(w);
      if (it == next[v].end()) throw Error(ErrorCode::MeshDegenerate, "vertex link is not a cycle");
      w = it->second;
    } while (w != first && m.stars_[v].size() <= next[v].size());
    if (m.stars_[v].size() != next[v].size())
      throw Error(ErrorCode::MeshDegenerate, "vertex " + std::to_string(v) + " is not a manifold point");
  }
  m.compute_geometry();
  if (m.euler_characteristic() != 2)
    throw Error(ErrorCode::MeshDegenerate, "Euler characteristic " + std::to_string(m.euler_characteristic()));
  return m;
}

SphericalMesh SphericalMesh::displaced(const std::vector<Vec3>& new_vertices) const {
  if (new_vertices.size() != vertices_.size()) throw Error(ErrorCode::InvalidInput, "vertex count mismatch");
  SphericalMesh m = *this;
  m.vertices_ = new_vertices;
  m.compute_geometry();
  return m;
}

void SphericalMesh::compute_geometry() {
  vertex_area_.assign(vertices_.size(), 0.0);
  triangle_area_.assign(triangles_.size(), 0.0);
  quality_ = {};
  double min_angle = kPi;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tr = triangles_[t];
    const Vec3 &a = vertices_[tr[0]], &b = vertices_[tr[1]], &c = vertices_[tr[2]];
    const double area = spherical_triangle_area(a, b, c);
    if (!(area > 0.0)) throw Error(ErrorCode::MeshDegenerate, "triangle " + std::to_string(t) + " is inverted");
    triangle_area_[t] = area;
    for (int k = 0; k < 3; ++k) vertex_area_[tr[k]] += area / 3.0;
    min_angle = std::min({min_angle, angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)});
  }
  double lmin = kPi, lmax = 0.0;
  for (auto& e : edges_) {
    e.length = geodesic_distance(vertices_[e.a], vertices_[e.b]);
    lmin = std::min(lmin, e.length);
    lmax = std::max(lmax, e.length);
    e.cot_weight = 0.0;
    for (int s = 0; s < 2; ++s) e.cot_weight += 0.5 * cot_at(vertices_[e.opp[s]], vertices_[e.a], vertices_[e.b]);
    if (e.cot_weight < 0.0) ++quality_.negative_weights;
  }
  quality_.min_angle_deg = min_angle * 180.0 / kPi;
  quality_.min_edge = lmin;
  quality_.max_edge = lmax;
}

int SphericalMesh::find_edge(int a, int b) const {
  for (const auto& s : stars_[a])
    if (s.vertex == b) return s.edge;
  return -1;
}

double SphericalMesh::local_size(int v) const {
  double s = 0.0;
  for (const auto& e : stars_[v]) s += edges_[e.edge].length;
  return s / static_cast<double>(stars_[v].size());
}

SphericalMesh build_mesh(const Configuration& config, const MeshParams& params) {
  if (params.background_count < 500) throw Error(ErrorCode::InvalidInput, "background_count must be at least 500");
  if (params.grade_depth < 0) throw Error(ErrorCode::InvalidInput, "grade_depth must be non-negative");
  if (!(params.grade_radius > 0.0)) throw Error(ErrorCode::InvalidInput, "grade_radius must be positive");

  std::vector<Vec3> pts;
  std::vector<int> config_vertex;
  for (std::size_t k = 0; k < config.size(); ++k) {
    config_vertex.push_back(static_cast<int>(pts.size()));
    pts.push_back(config[k]);
  }
  // background points crowding a configuration point would only make slivers
  const double h0 = std::sqrt(4.0 * kPi / params.background_count);
  for (const Vec3& b : fibonacci_points(params.background_count)) {
    const Vec3 q = (params.rotation * b).normalized();
    bool keep = true;
    for (std::size_t k = 0; k < config.size() && keep; ++k) keep = geodesic_distance(q, config[k]) >= 0.3 * h0;
    if (keep) pts.push_back(q);
  }

  std::vector<Triangle> tris = spherical_delaunay(pts, params.seed);
  for (int round = 0; round < params.grade_depth; ++round) {
    const double cos_radius = std::cos(params.grade_radius * std::ldexp(1.0, -round));
    std::unordered_map<std::uint64_t, int> split;
    std::vector<Vec3> added;
    for (const auto& tr : tris) {
      bool near = false;
      for (int k = 0; k < 3 && !near; ++k)
        for (std::size_t c = 0; c < config.size() && !near; ++c)
          near = pts[tr[k]].dot(config[c]) > cos_radius;
      if (!near) continue;
      for (int k = 0; k < 3; ++k) {
        const int a = tr[k], b = tr[(k + 1) % 3];
        if (split.try_emplace(edge_key(a, b), 0).second) added.push_back((pts[a] + pts[b]).normalized());
      }
    }
    if (added.empty()) break;
    pts.insert(pts.end(), added.begin(), added.end());
    tris = spherical_delaunay(pts, params.seed + round + 1);
  }

  SphericalMesh mesh = SphericalMesh::from_triangulation(std::move(pts), std::move(tris), std::move(config_vertex));
  if (mesh.quality().min_angle_deg < params.min_angle_deg)
    throw Error(ErrorCode::MeshDegenerate,
                "minimum angle " + std::to_string(mesh.quality().min_angle_deg) + " deg below gate");
  return mesh;
}

}  // namespace z2eig
