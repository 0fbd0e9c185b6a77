#include "doctest.h"

#include "support.hpp"
#include "z2eig/error.hpp"
#include "z2eig/lift.hpp"

#include <cmath>

using namespace z2eig;
using testing::small_mesh;

namespace {

// The untwisted problem with the coordinate function x_i as its section.
struct Linear {
  Problem problem;
  Vector f;
};

const Linear& linear_section() {
  static const Linear l = [] {
    Problem P = Problem::untwisted(make_configuration(std::vector<Vec3>{}), small_mesh(8000, 0));
    Vector fv(P.mesh().vertex_count());
    for (std::size_t v = 0; v < P.mesh().vertex_count(); ++v) fv[v] = P.mesh().vertices()[v].y();
    Vector f = P.ops().to_free(fv);
    return Linear{std::move(P), std::move(f)};
  }();
  return l;
}

}  // namespace

TEST_CASE("homogeneity exponent") {
  CHECK(homogeneity_exponent(0.75) == 1.5);
  CHECK(homogeneity_exponent(0.0) == 1.0);
  CHECK(homogeneity_exponent(2.0) == 2.0);
  CHECK(homogeneity_exponent(3.75) == 2.5);
  for (double l : {0.3, 1.7, 8.75}) {
    const double mu = homogeneity_exponent(l);
    CHECK(mu * (mu - 1) == doctest::Approx(l).epsilon(1e-14));
  }
  try {
    homogeneity_exponent(-0.1);
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeEigenvalue);
  }
}

TEST_CASE("degree one harmonic polynomial") {
  const auto& l = linear_section();
  const HarmonicLift lift(l.problem, l.f, 2.0);
  CHECK(lift.mu() == 2.0);
  CHECK(lift.degree() == 0.0);
  // nu = d(x_2) = e_2 everywhere. The cubic fit in the tangent plane misses
  // the quartic terms of the sphere, about radius^4 / 8 = 3e-5.
  const double tol = 1e-4;
  for (const Vec3& x : {Vec3(0.3, 0.5, 0.2), Vec3(-1.2, 0.1, 0.4), Vec3(0, 0, 2)}) {
    CHECK((lift.evaluate(x) - Vec3(0, 1, 0)).norm() < tol);
    CHECK(lift.potential(x) == doctest::Approx(x.y()).epsilon(tol));
  }
  ShellGrid g;
  g.directions = 100;
  const ResidualStudy r = closed_coclosed_residuals(lift, g);
  CHECK(r.coarse.d_residual < tol);
  CHECK(r.coarse.delta_residual < tol);
  CHECK(r.coarse.samples > 0);

  LiftParams printed;
  printed.convention = LiftConvention::AsPrinted;
  const HarmonicLift other(l.problem, l.f, 2.0, printed);
  CHECK(other.degree() == 1.0);
  const Vec3 x(0.3, 0.5, 0.2);
  CHECK(other.evaluate(2.0 * x).norm() == doctest::Approx(2.0 * other.evaluate(x).norm()).epsilon(1e-9));
}

TEST_CASE("lift of the antipodal ground state") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  const HarmonicLift lift(P, e[0].vector, e[0].value);
  const Vec3 x(0.3, 0.5, 0.2);
  for (double c : {0.5, 2.0, 4.0}) {
    const Vec3 a = lift.evaluate(c * x), b = lift.evaluate(x);
    CHECK((a - std::pow(c, lift.degree()) * b).norm() < 1e-9 * b.norm());
  }
  CHECK_THROWS_AS(lift.evaluate(1.5 * P.config()[0] + Vec3(0, 1e-3, 0)), Error);
  CHECK(lift.angle_to_rays(2.0 * P.config()[1]) == doctest::Approx(0.0).epsilon(1e-7));
  // continuity across the cut in the local trivialization
  const Vec3 ref = Vec3(0, 0.3, 1).normalized();
  const Vec3 a = lift.evaluate_near(Vec3(0.01, 0.3, 1).normalized(), ref);
  const Vec3 b = lift.evaluate_near(Vec3(-0.01, 0.3, 1).normalized(), ref);
  CHECK((a - b).norm() < 0.2 * a.norm());
}

TEST_CASE("Hoelder exponent is recorded near a branch ray") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  LiftParams lp;
  lp.interpolation = LiftInterpolation::Linear;
  lp.exclusion = 0.01;
  const HarmonicLift lift(P, e[0].vector, e[0].value, lp);
  const Vec3 dir = (tangent_projector(P.config()[0]) * Vec3(0, 1, 0.3)).normalized();
  const HolderFit h = holder_fit(lift, 0, dir, {0.04, 0.06, 0.09, 0.13, 0.2});
  CHECK(h.angle.size() == 5);
  CHECK(h.exponent < 0.0);
  CHECK(h.exponent > -1.0);
}
