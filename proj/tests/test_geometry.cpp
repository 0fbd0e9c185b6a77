#include "doctest.h"

#include "z2eig/error.hpp"
#include "z2eig/geometry.hpp"

#include <cmath>
#include <functional>

using namespace z2eig;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("unit vectors") {
  CHECK(code_of([] { UnitVec3::checked(Vec3(1, 0, 1e-5)); }) == ErrorCode::NotUnit);
  const UnitVec3 u = UnitVec3::checked(Vec3(0, 1, 0));
  CHECK(u.y() == 1.0);
  CHECK(UnitVec3::normalized(Vec3(3, 0, 4)).vec().norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("geodesic distance is accurate near 0 and pi") {
  const Vec3 a(0, 0, 1);
  CHECK(geodesic_distance(a, a) == 0.0);
  CHECK(geodesic_distance(a, -a) == doctest::Approx(kPi));
  const double t = 1e-9;
  CHECK(geodesic_distance(a, Vec3(std::sin(t), 0, std::cos(t))) == doctest::Approx(t).epsilon(1e-6));
  const double s = kPi - 1e-7;
  CHECK(geodesic_distance(a, Vec3(std::sin(s), 0, std::cos(s))) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("configurations validate parity and distinctness") {
  CHECK(code_of([] { make_configuration(std::vector<Vec3>{Vec3(0, 0, 1)}); }) == ErrorCode::OddCount);
  CHECK(code_of([] { make_configuration(std::vector<Vec3>{Vec3(0, 0, 1), Vec3(0, 0, 1)}); }) ==
        ErrorCode::DuplicatePoint);
  CHECK(code_of([] { make_configuration(std::vector<Vec3>{Vec3(0, 0, 1.1), Vec3(0, 0, -1)}); }) ==
        ErrorCode::NotUnit);
  const Configuration c = make_configuration(std::vector<Vec3>{Vec3(0, 0, 1), Vec3(1, 0, 0)});
  CHECK(c.pairs() == 1);
  CHECK(c.min_separation() == doctest::Approx(kPi / 2));
  CHECK(make_configuration(std::vector<Vec3>{}).min_separation() == kPi);
}

TEST_CASE("tangent frame is right handed") {
  for (const Vec3& p : {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0.3, -0.4, 0.5).normalized()}) {
    const auto [e1, e2] = tangent_frame(p);
    CHECK(std::abs(e1.dot(p)) < 1e-15);
    CHECK(std::abs(e1.dot(e2)) < 1e-15);
    CHECK((e1.cross(e2) - p).norm() < 1e-14);
  }
}

TEST_CASE("tangents and displacement") {
  const Configuration c = make_configuration(std::vector<Vec3>{Vec3(0, 0, 1), Vec3(0, 0, -1)});
  CHECK_THROWS_AS(make_tangent(c, {Vec3(0, 0, 1), Vec3(0, 0, 0)}), Error);
  const ConfigTangent nu = make_tangent(c, {Vec3(1, 0, 0), Vec3(0, 0, 0)});
  const Configuration d = displace(c, nu, 0.1);
  CHECK(geodesic_distance(d[0], c[0]) == doctest::Approx(0.1));
  CHECK((d[1] - c[1]).norm() == 0.0);
  CHECK((exp_map(c[0], Vec3(kPi / 2, 0, 0)) - Vec3(1, 0, 0)).norm() < 1e-15);
}

TEST_CASE("stereographic chart") {
  const Vec3 p = Vec3(0.2, 0.3, -0.9).normalized();
  const StereoChart ch(p);
  CHECK(std::abs(ch.to_chart(p)) < 1e-15);
  const Vec3 q = Vec3(0.5, -0.1, -0.7).normalized();
  CHECK((ch.from_chart(ch.to_chart(q)) - q).norm() < 1e-13);
  // |dz| = 1 at p
  const double t = 1e-6;
  const Complex dz = ch.to_chart(exp_map(p, t * ch.e1())) / t;
  CHECK(std::abs(dz - Complex(1, 0)) < 1e-6);
  const StereoChart r = ch.rotated(0.4);
  CHECK(std::abs(r.to_chart(q) - std::exp(Complex(0, 0.4)) * ch.to_chart(q)) < 1e-13);
}

TEST_CASE("rotation generators and cutoff") {
  const Vec3 x = Vec3(0.1, 0.7, 0.2).normalized();
  const auto d = rotation_fields(x);
  for (int a = 0; a < 3; ++a) {
    CHECK(std::abs(d[a].dot(x)) < 1e-15);
    CHECK((d[a] - Vec3::Unit(a).cross(x)).norm() < 1e-15);
  }
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(0.25) == 1.0);
  CHECK(chi(0.75) == 0.0);
  CHECK(chi(0.5) == doctest::Approx(0.5));
  const double t = 0.4, h = 1e-6;
  CHECK(chi_derivative(t) == doctest::Approx((chi(t + h) - chi(t - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("bump field is divergence free with the analytic derivative") {
  const Vec3 q = Vec3(0.3, 0.1, 0.9).normalized();
  const BumpField b(q, 0.8, 0.15, 1.3);
  const Vec3 w = (tangent_projector(q) * Vec3(0.2, -0.6, 0)).normalized();
  const Vec3 x = exp_map(q, std::acos(0.82) * w);
  CHECK(b.in_support(x));
  CHECK(std::abs(b.divergence(x)) < 1e-12);
  const auto [e1, e2] = tangent_frame(x);
  const double h = 1e-6;
  for (const Vec3& w : {e1, e2}) {
    const Vec3 num = (b.value(exp_map(x, h * w)) - b.value(exp_map(x, -h * w))) / (2 * h);
    const Vec3 ana = b.covariant_derivative(x) * w;
    CHECK((tangent_projector(x) * num - ana).norm() < 1e-6);
  }
  CHECK(b.value(-q).norm() == 0.0);
}

TEST_CASE("matching field interpolates the tangent") {
  const Configuration c = make_configuration(std::vector<Vec3>{Vec3(0, 0, 1), Vec3(1, 0, 0)});
  const ConfigTangent nu = make_tangent(c, {Vec3(0, 1, 0), Vec3(0, 0, 0)});
  const MatchingField m = matching_field(c, nu);
  CHECK(m.bumps().size() == 1);
  CHECK((m.value(c[0]) - m.multipliers()[0] * nu.v[0]).norm() < 1e-12);
  CHECK(m.multipliers()[0] > 0);
  CHECK(m.value(c[1]).norm() == 0.0);
}
