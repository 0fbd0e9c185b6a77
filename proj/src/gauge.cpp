#include "z2eig/gauge.hpp"

#include "z2eig/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace z2eig {

GreatArc great_arc(const Vec3& a, const Vec3& b, const Vec3& via) {
  GreatArc arc;
  arc.a = a;
  arc.b = b;
  Vec3 n = a.cross(b);
  if (n.norm() < 1e-9) {
    n = a.cross(via);
    if (n.norm() < 1e-9) n = a.cross(Vec3(0.0, 1.0, 0.0));
    if (n.norm() < 1e-9) n = a.cross(Vec3(0.0, 0.0, 1.0));
    n.normalize();
    // the half circle from a through the via side to b
    if (n.cross(a).dot(via) < 0.0) n = -n;
  } else {
    n.normalize();
  }
  arc.normal = n;
  arc.length = std::atan2(n.dot(a.cross(b)), a.dot(b));
  if (arc.length <= 0.0) arc.length += 2.0 * kPi;
  return arc;
}

GeometricCut geometric_cut(const Configuration& config, const CutSystem& cut, const Vec3& via) {
  GeometricCut out;
  for (const auto& p : cut.paths) out.push_back(great_arc(config[p.point_a], config[p.point_b], via));
  return out;
}

namespace {

bool crosses_arc(const GreatArc& arc, const Vec3& x, const Vec3& y) {
  // points within 1e-12 of the carrying plane count as the positive side, so
  // mesh vertices placed exactly on the arc are handled consistently
  const double hx = arc.normal.dot(x), hy = arc.normal.dot(y);
  const bool sx = hx > -1e-12, sy = hy > -1e-12;
  if (sx == sy) return false;
  Vec3 d = (hx * y - hy * x) / (hx - hy);
  const double dn = d.norm();
  if (dn == 0.0) return false;
  d /= dn;
  double ang = std::atan2(arc.normal.dot(arc.a.cross(d)), arc.a.dot(d));
  if (ang < 0.0) ang += 2.0 * kPi;
  return ang <= arc.length;
}

}  // namespace

bool crosses(const GeometricCut& cut, const Vec3& x, const Vec3& y) {
  bool parity = false;
  for (const auto& arc : cut)
    if (crosses_arc(arc, x, y)) parity = !parity;
  return parity;
}

// ---------------------------------------------------------------------------

PointLocator::PointLocator(const SphericalMesh& mesh) : mesh_(&mesh) {
  const double nt = static_cast<double>(mesh.triangle_count());
  grid_ = std::clamp(static_cast<int>(std::sqrt(nt / 24.0)), 1, 160);
  cells_.assign(static_cast<std::size_t>(grid_) * grid_ * grid_, {});
  const double pad = 0.5 * mesh.quality().max_edge * mesh.quality().max_edge + 1e-7;
  const auto& V = mesh.vertices();
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tr = mesh.triangles()[t];
    Vec3 lo = V[tr[0]].cwiseMin(V[tr[1]]).cwiseMin(V[tr[2]]).array() - pad;
    Vec3 hi = V[tr[0]].cwiseMax(V[tr[1]]).cwiseMax(V[tr[2]]).array() + pad;
    int l[3], h[3];
    for (int d = 0; d < 3; ++d) {
      l[d] = std::clamp(static_cast<int>((lo[d] + 1.0) * 0.5 * grid_), 0, grid_ - 1);
      h[d] = std::clamp(static_cast<int>((hi[d] + 1.0) * 0.5 * grid_), 0, grid_ - 1);
    }
    for (int i = l[0]; i <= h[0]; ++i)
      for (int j = l[1]; j <= h[1]; ++j)
        for (int k = l[2]; k <= h[2]; ++k)
          cells_[(static_cast<std::size_t>(i) * grid_ + j) * grid_ + k].push_back(static_cast<int>(t));
  }
}

int PointLocator::cell_index(const Vec3& x) const {
  int c[3];
  for (int d = 0; d < 3; ++d) c[d] = std::clamp(static_cast<int>((x[d] + 1.0) * 0.5 * grid_), 0, grid_ - 1);
  return (c[0] * grid_ + c[1]) * grid_ + c[2];
}

std::pair<int, Vec3> PointLocator::locate(const Vec3& x) const {
  const auto& V = mesh_->vertices();
  int best = -1;
  double margin = -1e300;
  Vec3 weights = Vec3::Zero();
  auto test = [&](int t) {
    const auto& tr = mesh_->triangles()[t];
    Mat3 A;
    A << V[tr[0]], V[tr[1]], V[tr[2]];
    const Vec3 l = A.partialPivLu().solve(x);
    const double m = l.minCoeff();
    if (m > margin) {
      margin = m;
      best = t;
      weights = l / l.sum();
    }
  };
  for (int t : cells_[cell_index(x)]) test(t);
  if (margin < -1e-9)
    for (std::size_t t = 0; t < mesh_->triangle_count(); ++t) test(static_cast<int>(t));
  return {best, weights};
}

// ---------------------------------------------------------------------------

std::vector<signed char> geometric_gauge(const Problem& problem, const GeometricCut& cut) {
  const SphericalMesh& mesh = problem.mesh();
  const auto& ops = problem.ops();
  const int nv = static_cast<int>(mesh.vertex_count());
  std::vector<signed char> t(nv, 0);
  auto link = [&](const Edge& e, int edge_index) {
    const int s = problem.signs()[edge_index] * (crosses(cut, mesh.vertices()[e.a], mesh.vertices()[e.b]) ? -1 : 1);
    return s;
  };
  for (int root = 0; root < nv; ++root) {
    if (ops.vertex_to_free[root] < 0 || t[root] != 0) continue;
    t[root] = 1;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (const auto& s : mesh.star(v)) {
        const int w = s.vertex;
        if (ops.vertex_to_free[w] < 0) continue;
        const signed char want = static_cast<signed char>(t[v] * link(mesh.edges()[s.edge], s.edge));
        if (t[w] == 0) {
          t[w] = want;
          queue.push_back(w);
        }
      }
    }
  }
  for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
    const Edge& ed = mesh.edges()[e];
    if (t[ed.a] == 0 || t[ed.b] == 0) continue;
    if (t[ed.a] * t[ed.b] != link(ed, static_cast<int>(e)))
      throw Error(ErrorCode::HolonomyViolation, "geometric cut is not gauge equivalent to the mesh cut (edge " +
                                                    std::to_string(ed.a) + "-" + std::to_string(ed.b) + ")");
  }
  return t;
}

SectionSampler::SectionSampler(const Problem& problem, const GeometricCut& cut, const Vector& f)
    : problem_(&problem), cut_(cut), locator_(problem.mesh()) {
  const auto t = geometric_gauge(problem, cut);
  aligned_ = problem.vertex_values(f);
  for (Eigen::Index i = 0; i < aligned_.size(); ++i) aligned_[i] *= t[i];
}

double SectionSampler::operator()(const Vec3& x) const {
  const auto [tri, w] = locator_.locate(x);
  const auto& tr = problem_->mesh().triangles()[tri];
  double v = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3& q = problem_->mesh().vertices()[tr[k]];
    const double s = crosses(cut_, x, q) ? -1.0 : 1.0;
    v += w[k] * s * aligned_[tr[k]];
  }
  return v;
}

Vector sample_section(const Problem& problem, const GeometricCut& cut, const std::function<double(const Vec3&)>& g) {
  const auto t = geometric_gauge(problem, cut);
  const auto& ops = problem.ops();
  Vector f(ops.size());
  for (int i = 0; i < ops.size(); ++i) {
    const int v = ops.free_to_vertex[i];
    f[i] = t[v] * g(problem.mesh().vertices()[v]);
  }
  return f;
}

Vector transfer(const Problem& from, const GeometricCut& from_cut, const Vector& f, const Problem& to,
                const GeometricCut& to_cut) {
  SectionSampler sampler(from, from_cut, f);
  return sample_section(to, to_cut, [&](const Vec3& x) { return sampler(x); });
}

}  // namespace z2eig
