#include "doctest.h"

#include "support.hpp"
#include "z2eig/error.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>

using namespace z2eig;
using testing::small_mesh;

namespace {

std::vector<int> link_loop(const SphericalMesh& mesh, int v) {
  std::vector<int> loop;
  for (const auto& s : mesh.star(v)) loop.push_back(s.vertex);
  return loop;
}

}  // namespace

TEST_CASE("hull of Fibonacci points is a sphere triangulation") {
  const auto pts = fibonacci_points(500);
  CHECK(pts.size() == 500);
  for (const auto& p : pts) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const auto tris = spherical_delaunay(pts);
  CHECK(tris.size() == 2 * 500 - 4);
  for (const auto& t : tris) {
    const Vec3 n = (pts[t[1]] - pts[t[0]]).cross(pts[t[2]] - pts[t[0]]);
    CHECK(n.dot(pts[t[0]] + pts[t[1]] + pts[t[2]]) > 0);  // counter-clockwise from outside
  }
  CHECK_THROWS_AS(spherical_delaunay({Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 0)}), Error);
}

TEST_CASE("conforming mesh geometry") {
  const Configuration c = random_configuration(2, 3);
  const SphericalMesh m = build_mesh(c, small_mesh().mesh);
  CHECK(m.euler_characteristic() == 2);
  for (std::size_t k = 0; k < c.size(); ++k) {
    CHECK((m.vertices()[m.config_vertex()[k]] - c[k]).norm() == 0.0);
    CHECK(m.flag()[m.config_vertex()[k]] == static_cast<int>(k));
  }
  const double area = std::accumulate(m.vertex_area().begin(), m.vertex_area().end(), 0.0);
  CHECK(area == doctest::Approx(4 * kPi).epsilon(1e-10));
  CHECK(m.quality().min_angle_deg >= 5.0);
  CHECK(m.quality().negative_weights == 0);
  // graded refinement makes the mesh finer at the points
  const int v = m.config_vertex()[0];
  CHECK(m.local_size(v) < 0.5 * m.quality().max_edge);
  CHECK(spherical_triangle_area(Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)) == doctest::Approx(kPi / 2));
}

TEST_CASE("sign cochain has monodromy -1 exactly at the points") {
  const Configuration c = random_configuration(2, 5);
  const Problem P = Problem::build(c, small_mesh());
  const auto& mesh = P.mesh();
  for (int v : mesh.config_vertex()) CHECK(P.signs().holonomy(mesh, link_loop(mesh, v)) == -1);
  int checked = 0;
  for (std::size_t v = 0; v < mesh.vertex_count() && checked < 200; v += 7) {
    if (mesh.flagged(static_cast<int>(v))) continue;
    bool near_flag = false;
    for (const auto& s : mesh.star(static_cast<int>(v))) near_flag |= mesh.flagged(s.vertex);
    if (near_flag) continue;
    CHECK(P.signs().holonomy(mesh, link_loop(mesh, static_cast<int>(v))) == 1);
    ++checked;
  }
  CHECK(P.cut().paths.size() == 2);
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(P.cut().partner[P.cut().partner[k]] == static_cast<int>(k));
}

TEST_CASE("quadratic forms") {
  const Configuration empty = make_configuration(std::vector<Vec3>{});
  const Problem U = Problem::untwisted(empty, small_mesh());
  const auto& ops = U.ops();
  const Vector one = Vector::Ones(ops.size());
  CHECK(energy(one, ops) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hilbert_norm(one, ops) == doctest::Approx(4 * kPi).epsilon(1e-10));
  CHECK(rayleigh(one, ops) == doctest::Approx(0.0));
  const Vector zero = Vector::Zero(ops.size());
  CHECK(hilbert_norm(zero, ops) == 0.0);
  CHECK_THROWS_AS(rayleigh(zero, ops), Error);
  Vector f = Vector::Random(ops.size());
  CHECK(hilbert_norm(2 * f, ops) == doctest::Approx(4 * hilbert_norm(f, ops)));
  CHECK(mass_norm2(f, ops) > 0);
}

TEST_CASE("twisted Rayleigh quotients stay above the ground level") {
  const auto& P = testing::antipodal_problem();
  Vector f = Vector::Random(P.ops().size());
  CHECK(rayleigh(f, P.ops()) >= 0.75 * 0.95);
  CHECK(P.ops().size() == static_cast<int>(P.mesh().vertex_count()) - 2);
  // pinned vertices extend by zero
  const Vector fv = P.vertex_values(f);
  for (int v : P.mesh().config_vertex()) CHECK(fv[v] == 0.0);
  CHECK((P.ops().to_free(fv) - f).norm() == 0.0);
}

TEST_CASE("spectrum is independent of the cut and equivariant under rotation") {
  const Configuration c = random_configuration(2, 11);
  ProblemParams a = small_mesh(3000, 2), b = a;
  const Problem Pa = Problem::build(c, a);
  const SphericalMesh& mesh = Pa.mesh();
  // the reversed paths flip the edges on the other side of each path
  CutSystem other = Pa.cut();
  for (auto& path : other.paths) {
    std::swap(path.point_a, path.point_b);
    std::reverse(path.vertices.begin(), path.vertices.end());
  }
  const SignCochain sb = edge_signs(other, mesh);
  REQUIRE(sb.sigma != Pa.signs().sigma);
  const Problem Pb = Problem::from_parts(c, mesh, other, b);
  const auto ea = Pa.solve(4), eb = Pb.solve(4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ea[i].value - eb[i].value) < 1e-10);

  const Mat3 R = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  std::vector<Vec3> rotated;
  for (const auto& p : c.points()) rotated.push_back(R * p.vec());
  ProblemParams r = a;
  r.mesh.rotation = R;
  const auto er = Problem::build(make_configuration(rotated), r).solve(4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ea[i].value - er[i].value) < 1e-10);
}

TEST_CASE("untwisted spectrum converges to the sphere spectrum") {
  const Configuration empty = make_configuration(std::vector<Vec3>{});
  double prev = 1e9;
  for (int n : {1000, 4000, 16000}) {
    const auto e = Problem::untwisted(empty, small_mesh(n, 0)).solve(4);
    const double err = std::abs(e[1].value - 2.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("Hardy quotient is stable under refinement") {
  const Configuration c = c2_configuration(kPi);
  std::vector<double> kappa;
  for (int depth : {2, 3}) {
    const Problem P = Problem::build(c, small_mesh(6000, depth));
    const auto e = P.solve(1);
    const Vector f = P.vertex_values(e[0].vector);
    double s = 0;
    for (std::size_t v = 0; v < P.mesh().vertex_count(); ++v) {
      if (P.mesh().flagged(static_cast<int>(v))) continue;
      double d = kPi;
      for (const auto& p : c.points()) d = std::min(d, geodesic_distance(P.mesh().vertices()[v], p));
      s += P.mesh().vertex_area()[v] * f[v] * f[v] / (d * d);
    }
    kappa.push_back(s / energy(e[0].vector, P.ops()));
  }
  CHECK(kappa[1] == doctest::Approx(kappa[0]).epsilon(0.2));
}
