// Randomized incremental convex hull for points on the unit sphere.
//
// Every input point is extreme, so each uninserted point can be filed under
// the face crossed by its radial ray. That face is visible from the point,
// which gives the starting face for the visibility search, and when faces die
// their points are refiled among the new cone of faces around the apex.

#include "z2eig/error.hpp"
#include "z2eig/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace z2eig {

namespace {

using Real = long double;

struct P3 {
  Real x, y, z;
};

inline P3 sub(const P3& a, const P3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline P3 cross(const P3& a, const P3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Real dot(const P3& a, const P3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Positive when d lies on the outer side of the plane (a, b, c).
inline Real orient(const P3& a, const P3& b, const P3& c, const P3& d) {
  return dot(cross(sub(b, a), sub(c, a)), sub(d, a));
}

// Smallest of the three triple products deciding whether the ray through q
// passes through the cone over (a, b, c).
inline Real cone_margin(const P3& a, const P3& b, const P3& c, const P3& q) {
  const Real d0 = dot(cross(a, b), q);
  const Real d1 = dot(cross(b, c), q);
  const Real d2 = dot(cross(c, a), q);
  return std::min({d0, d1, d2});
}

struct Face {
  std::array<int, 3> v;
  std::array<int, 3> nb;  // nb[k] lies across edge (v[k], v[k+1])
  bool alive = true;
  int mark = -1;
  std::vector<int> pts;
};

class Hull {
 public:
  explicit Hull(const std::vector<Vec3>& points) {
    p_.reserve(points.size());
    for (const auto& q : points) p_.push_back({q.x(), q.y(), q.z()});
  }

  std::vector<Triangle> run(std::uint64_t seed) {
    const int n = static_cast<int>(p_.size());
    if (n < 4) throw Error(ErrorCode::MeshDegenerate, "need at least four points for a hull");
    std::array<int, 4> t = initial_tetrahedron();
    make_tetrahedron(t);

    std::vector<int> order;
    order.reserve(n);
    for (int i = 0; i < n; ++i)
      if (i != t[0] && i != t[1] && i != t[2] && i != t[3]) order.push_back(i);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    face_of_.assign(n, -1);
    for (int i : order) file_point(i, {0, 1, 2, 3});

    for (int i : order) insert(i);

    std::vector<Triangle> out;
    for (const auto& f : faces_)
      if (f.alive) out.push_back({f.v[0], f.v[1], f.v[2]});
    if (static_cast<long>(out.size()) != 2L * n - 4)
      throw Error(ErrorCode::MeshDegenerate, "hull has " + std::to_string(out.size()) + " faces for " +
                                                 std::to_string(n) + " points");
    return out;
  }

 private:
  std::array<int, 4> initial_tetrahedron() const {
    // Points extreme in four tetrahedral directions enclose the origin for
    // any reasonably spread input.
    const Real s = 1.0L / std::sqrt(3.0L);
    const P3 dirs[4] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    std::array<int, 4> t{};
    for (int k = 0; k < 4; ++k) {
      Real best = -10;
      for (int i = 0; i < static_cast<int>(p_.size()); ++i) {
        const Real d = dot(p_[i], dirs[k]);
        if (d > best) best = d, t[k] = i;
      }
    }
    const P3 o{0, 0, 0};
    Real vol = orient(p_[t[0]], p_[t[1]], p_[t[2]], p_[t[3]]);
    if (vol > 0) std::swap(t[1], t[2]);
    vol = orient(p_[t[0]], p_[t[1]], p_[t[2]], p_[t[3]]);
    // the origin must be strictly inside: negative against every face
    const int fv[4][3] = {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}};
    bool inside = vol < 0;
    for (const auto& f : fv)
      inside = inside && orient(p_[t[f[0]]], p_[t[f[1]]], p_[t[f[2]]], o) < 0;
    if (!inside) throw Error(ErrorCode::MeshDegenerate, "points do not surround the origin");
    return t;
  }

  void make_tetrahedron(const std::array<int, 4>& t) {
    // with orient(t0,t1,t2,t3) < 0, (t0,t1,t2) faces away from t3
    const int fv[4][3] = {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}};
    for (const auto& f : fv) {
      Face face;
      face.v = {t[f[0]], t[f[1]], t[f[2]]};
      faces_.push_back(face);
    }
    link_all({0, 1, 2, 3});
  }

  // Fills neighbour slots among a set of faces by matching opposite edges.
  void link_all(const std::vector<int>& ids) {
    std::unordered_map<std::uint64_t, std::pair<int, int>> half;
    for (int id : ids)
      for (int k = 0; k < 3; ++k) half[key(faces_[id].v[k], faces_[id].v[(k + 1) % 3])] = {id, k};
    for (int id : ids)
      for (int k = 0; k < 3; ++k) {
        auto it = half.find(key(faces_[id].v[(k + 1) % 3], faces_[id].v[k]));
        if (it != half.end()) faces_[id].nb[k] = it->second.first;
      }
  }

  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  void file_point(int i, const std::vector<int>& candidates) {
    int best = -1;
    Real margin = -1e300;
    for (int f : candidates) {
      const auto& v = faces_[f].v;
      const Real m = cone_margin(p_[v[0]], p_[v[1]], p_[v[2]], p_[i]);
      if (m > margin) margin = m, best = f;
    }
    face_of_[i] = best;
    faces_[best].pts.push_back(i);
  }

  void insert(int i) {
    const int start = face_of_[i];
    const P3& q = p_[i];
    // visible region by BFS from the face crossed by the radial ray
    std::vector<int> visible{start};
    faces_[start].mark = i;
    for (std::size_t h = 0; h < visible.size(); ++h) {
      const Face& f = faces_[visible[h]];
      for (int k = 0; k < 3; ++k) {
        const int g = f.nb[k];
        Face& fg = faces_[g];
        if (fg.mark == i) continue;
        if (orient(p_[fg.v[0]], p_[fg.v[1]], p_[fg.v[2]], q) > 0) {
          fg.mark = i;
          visible.push_back(g);
        }
      }
    }
    // horizon edges, kept with the orientation of the visible face
    struct Horizon {
      int a, b, outside;
    };
    std::vector<Horizon> horizon;
    for (int id : visible) {
      const Face& f = faces_[id];
      for (int k = 0; k < 3; ++k)
        if (faces_[f.nb[k]].mark != i) horizon.push_back({f.v[k], f.v[(k + 1) % 3], f.nb[k]});
    }
    std::vector<int> created;
    std::unordered_map<int, int> by_start, by_end;
    for (const auto& h : horizon) {
      Face nf;
      nf.v = {h.a, h.b, i};
      nf.nb = {h.outside, -1, -1};
      const int id = static_cast<int>(faces_.size());
      faces_.push_back(std::move(nf));
      Face& out = faces_[h.outside];
      for (int k = 0; k < 3; ++k)
        if (out.v[k] == h.b && out.v[(k + 1) % 3] == h.a) out.nb[k] = id;
      by_start[h.a] = id;
      by_end[h.b] = id;
      created.push_back(id);
    }
    for (int id : created) {
      Face& f = faces_[id];
      // edge (b, i) borders the new face starting at b; edge (i, a) the one ending at a
      f.nb[1] = by_start.at(f.v[1]);
      f.nb[2] = by_end.at(f.v[0]);
    }
    std::vector<int> orphans;
    for (int id : visible) {
      Face& f = faces_[id];
      f.alive = false;
      for (int j : f.pts)
        if (j != i) orphans.push_back(j);
      f.pts.clear();
      f.pts.shrink_to_fit();
    }
    for (int j : orphans) file_point(j, created);
  }

  std::vector<P3> p_;
  std::vector<Face> faces_;
  std::vector<int> face_of_;
};

}  // namespace

std::vector<Triangle> spherical_delaunay(const std::vector<Vec3>& points, std::uint64_t seed) {
  return Hull(points).run(seed);
}

std::vector<Vec3> fibonacci_points(int count) {
  std::vector<Vec3> pts;
  pts.reserve(count);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

}  // namespace z2eig
