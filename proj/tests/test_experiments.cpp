#include "doctest.h"

#include "support.hpp"
#include "z2eig/error.hpp"
#include "z2eig/gauge.hpp"

#include <cmath>

using namespace z2eig;
using testing::small_mesh;

TEST_CASE("two-point reference spectra") {
  const auto a = c2_antipodal_spectrum(3);
  REQUIRE(a.size() == 3);
  CHECK(a[0].value == 0.75);
  CHECK(a[0].multiplicity == 2);
  CHECK(a[1].value == 3.75);
  CHECK(a[1].multiplicity == 4);
  CHECK(a[2].value == 8.75);
  const auto c = c2_coincident_spectrum(2);
  CHECK(c[0].value == 0.0);
  CHECK(c[0].multiplicity == 1);
  CHECK(c[1].value == 2.0);
  CHECK(c[1].multiplicity == 3);
  CHECK(c[2].multiplicity == 5);
}

TEST_CASE("two-point configurations and separations") {
  const Configuration c = c2_configuration(0.4);
  CHECK(geodesic_distance(c[0], c[1]) == doctest::Approx(0.4));
  CHECK(c[0].z() == doctest::Approx(std::cos(0.2)));
  const auto s = c2_separations(10, 0.05);
  REQUIRE(s.size() == 10);
  CHECK(s.front() == doctest::Approx(kPi));
  CHECK(s.back() == doctest::Approx(0.05));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] / s[i - 1] == doctest::Approx(s[1] / s[0]));
}

TEST_CASE("random configurations") {
  const Configuration a = random_configuration(3, 7), b = random_configuration(3, 7);
  CHECK(a.size() == 6);
  CHECK(a.min_separation() >= 0.5);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() == 0.0);
  const ConfigTangent t = random_tangent(a, 1);
  CHECK(t.norm() == doctest::Approx(1.0));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(t.v[i].dot(a[i])) < 1e-12);
}

TEST_CASE("packing configurations") {
  for (double R : {0.7, 0.5}) {
    const PackingConfig p = packing_config(R);
    CHECK(p.config.size() == 2 * p.centers.size());
    for (std::size_t i = 0; i < p.centers.size(); ++i)
      for (std::size_t j = i + 1; j < p.centers.size(); ++j) CHECK(geodesic_distance(p.centers[i], p.centers[j]) >= R);
    for (std::size_t i = 0; i < p.centers.size(); ++i) {
      CHECK(geodesic_distance(p.config[2 * i], p.centers[i]) == doctest::Approx(R / 8));
      CHECK(geodesic_distance(p.config[2 * i + 1], p.centers[i]) == doctest::Approx(R / 8));
    }
    const double n = static_cast<double>(p.centers.size());
    CHECK(n >= 1.0 / (p.count_constant * R * R));
    CHECK(n <= p.count_constant / (R * R));
  }
}

TEST_CASE("pair insertion geometry and cutoff") {
  const Configuration base = c2_configuration(kPi);
  const Vec3 x = Vec3(0, 0.6, 0.8);
  const Configuration c = insert_pair(base, x, 0.1, 1.0);
  REQUIRE(c.size() == 4);
  CHECK(geodesic_distance(c[2], c[3]) == doctest::Approx(0.1));
  CHECK(geodesic_distance(c[2], x) == doctest::Approx(0.05));
  CHECK((c[0] - base[0]).norm() == 0.0);
  CHECK(log_cutoff(c, c[2], 0.001) == 0.0);
  CHECK(log_cutoff(c, -x, 0.001) == 1.0);
}

TEST_CASE("platonic configurations") {
  CHECK(platonic_configuration("tetrahedron").size() == 4);
  CHECK(platonic_configuration("cube").size() == 8);
  CHECK(platonic_configuration("icosahedron").size() == 12);
  CHECK_THROWS_AS(platonic_configuration("octagon"), Error);
  const Configuration t = platonic_configuration("tetrahedron");
  CHECK(t.min_separation() == doctest::Approx(std::acos(-1.0 / 3.0)));
}

TEST_CASE("short spectral flow tracks two branches") {
  SpectralFlowParams fp;
  fp.problem = small_mesh(6000, 3);
  fp.branches = 2;
  const auto bc = spectral_flow_c2({kPi, 2.5, 2.0}, fp);
  REQUIRE(bc.values.rows() == 3);
  // one branch falls and one rises as the points approach
  CHECK(bc.values(2, 0) < bc.values(0, 0));
  CHECK(bc.values(2, 1) > bc.values(0, 1));
  for (double o : bc.step_overlap) CHECK(o >= 0.7);
}

TEST_CASE("coalescence at coarse resolution") {
  CoalesceParams cp;
  cp.problem = small_mesh(8000, 3);
  const CoalesceStudy st = coalesce_study(c2_configuration(kPi), {0.2, 0.1}, cp);
  REQUIRE(st.rows.size() == 2);
  CHECK(st.E_base == doctest::Approx(0.75).epsilon(0.01));
  for (const auto& r : st.rows) {
    CHECK(r.E > st.E_base);
    CHECK(r.transferred >= r.E * (1 - 1e-9));
  }
  CHECK(st.rows[1].gap < st.rows[0].gap);
}
