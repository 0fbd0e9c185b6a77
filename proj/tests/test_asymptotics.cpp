#include "doctest.h"

#include "support.hpp"
#include "z2eig/asymptotics.hpp"
#include "z2eig/error.hpp"
#include "z2eig/gauge.hpp"

#include <cmath>
#include <functional>

using namespace z2eig;

namespace {

// Integral of g^2 over S^2 by midpoint quadrature in (theta, phi).
double sphere_l2(const std::function<double(const Vec3&)>& g, int n = 400) {
  double s = 0;
  for (int i = 0; i < n; ++i) {
    const double th = (i + 0.5) * kPi / n;
    for (int j = 0; j < 2 * n; ++j) {
      const double ph = (j + 0.5) * kPi / n;
      const Vec3 x(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      s += g(x) * g(x) * std::sin(th);
    }
  }
  return s * (kPi / n) * (kPi / n);
}

}  // namespace

TEST_CASE("closed-form two-point sections") {
  for (int m : {1, 2}) CHECK(sphere_l2([m](const Vec3& x) { return c2_eigensection(m, 0.3, x); }) ==
                             doctest::Approx(1.0).epsilon(1e-3));
  // sign flip across the cut phi = 0
  const double t = 1e-7;
  const Vec3 above(std::cos(t), std::sin(t), 0), below(std::cos(t), -std::sin(t), 0);
  CHECK(c2_eigensection(1, 0.5, above) == doctest::Approx(-c2_eigensection(1, 0.5, below)).epsilon(1e-5));
}

TEST_CASE("leading coefficient of the antipodal ground state") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  for (int i = 0; i < 2; ++i)
    for (int p = 0; p < 2; ++p) {
      const BranchData b = extract_branch_data(P, e[i].vector, p);
      CHECK(b.n == 0);
      CHECK(std::abs(b.a) == doctest::Approx(std::sqrt(2.0) / kPi).epsilon(0.03));
      CHECK(b.samples >= 30);
      CHECK(std::abs(b.e1.dot(b.p)) < 1e-14);
    }
}

TEST_CASE("coefficients are linear and chart rotation acts by a phase") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  const LocalExpansion L(P, 0);
  const Complex a = L.linear_coefficient(e[0].vector), b = L.linear_coefficient(e[1].vector);
  const Complex ab = L.linear_coefficient(2.0 * e[0].vector - 3.0 * e[1].vector);
  CHECK(std::abs(ab - (2.0 * a - 3.0 * b)) < 1e-10);
  // z -> e^{i beta} z takes a to a e^{-i beta / 2}, up to the sign of the square root
  const double beta = 0.6;
  const LocalExpansion R(P, 0, L.chart().rotated(beta));
  const Complex ar = R.linear_coefficient(e[0].vector);
  const Complex expect = a * std::exp(Complex(0, -beta / 2));
  CHECK(std::min(std::abs(ar - expect), std::abs(ar + expect)) < 0.02 * std::abs(a));
}

TEST_CASE("vanishing class and criticality") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  const VanishingClass vc = classify_vanishing(P, e[0].vector);
  CHECK(vc.vanishing.size() == 2);
  const std::vector<EigenPair> m1(e.begin(), e.begin() + 2), m2(e.begin() + 2, e.begin() + 6);
  const auto c1 = critical_combination(P, m1);
  const auto c2 = critical_combination(P, m2);
  CHECK(c1.minimum / c1.maximum > 0.1);
  CHECK(c2.minimum / c2.maximum < 1e-3);
  CHECK(c2.coefficients.norm() == doctest::Approx(1.0));
  // the critical combination of the upper cluster has n_p >= 1 at both points
  Vector f = Vector::Zero(P.ops().size());
  for (int k = 0; k < 4; ++k) f += c2.coefficients(k) * m2[k].vector;
  for (int p = 0; p < 2; ++p) CHECK(std::abs(LocalExpansion(P, p).linear_coefficient(f)) < 0.01);
}

TEST_CASE("closed form matches the mesh ground state") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  // The closed form uses poles +-z; rotate the section samples accordingly.
  const Mat3 R = Eigen::AngleAxisd(kPi / 2, Vec3(0, 1, 0)).toRotationMatrix();  // +x -> -z
  const GeometricCut cut = geometric_cut(P.config(), P.cut(), Vec3(0, 0, 1));
  // project two closed forms (alpha = 0, pi/2) onto the doublet
  double worst = 0;
  for (double alpha : {0.0, kPi / 2}) {
    const Vector g = sample_section(P, cut, [&](const Vec3& x) { return c2_eigensection(1, alpha, R * x); });
    const auto& m = P.ops().mass;
    const double c0 = g.dot(m.asDiagonal() * e[0].vector), c1 = g.dot(m.asDiagonal() * e[1].vector);
    const double gg = g.dot(m.asDiagonal() * g);
    worst = std::max(worst, 1.0 - (c0 * c0 + c1 * c1) / gg);
  }
  CHECK(worst < 0.01);
}
