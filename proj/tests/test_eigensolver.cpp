#include "doctest.h"

#include "support.hpp"
#include "z2eig/error.hpp"

#include <cmath>

using namespace z2eig;
using testing::small_mesh;

TEST_CASE("Lanczos agrees with the dense reference") {
  const Problem P = Problem::build(random_configuration(1, 2), small_mesh(600, 1));
  const auto sparse = P.solve(6);
  const auto dense = dense_eigenpairs(P.ops(), 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(sparse[i].value - dense[i].value) < 1e-8 * std::max(1.0, dense[i].value));
    CHECK(sparse[i].residual < 1e-7);
  }
}

TEST_CASE("eigenpairs are mass orthonormal and sorted") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  const auto& m = P.ops().mass;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) CHECK(e[i].value >= e[i - 1].value);
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = e[i].vector.dot(m.asDiagonal() * e[j].vector);
      CHECK(g == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
    }
    CHECK(residual(P.ops(), e[i]) == doctest::Approx(e[i].residual).epsilon(1e-6));
  }
}

TEST_CASE("LOBPCG reaches the same values") {
  const Problem P = Problem::build(c2_configuration(2.0), small_mesh(3000, 2));
  SolverOptions o;
  o.method = SolverMethod::Lobpcg;
  SolveReport rep;
  const auto a = P.solve(4, o, &rep);
  CHECK(rep.method_used == SolverMethod::Lobpcg);
  const auto b = P.solve(4);
  for (int i = 0; i < 4; ++i) CHECK(a[i].value == doctest::Approx(b[i].value).epsilon(1e-7));
}

TEST_CASE("solves are deterministic") {
  const Problem P = Problem::build(random_configuration(2, 8), small_mesh(3000, 2));
  const auto a = P.solve(5), b = P.solve(5);
  for (int i = 0; i < 5; ++i) CHECK(a[i].value == b[i].value);
}

TEST_CASE("antipodal spectrum clusters") {
  const auto& e = testing::antipodal_pairs();
  const auto cl = cluster_multiplicities_relative(values_of(e));
  REQUIRE(cl.size() == 2);
  CHECK(cl[0].multiplicity() == 2);
  CHECK(cl[1].multiplicity() == 4);
  CHECK(cl[0].value == doctest::Approx(0.75).epsilon(0.01));
  CHECK(cl[1].value == doctest::Approx(3.75).epsilon(0.01));
}

TEST_CASE("gap clustering") {
  const auto a = cluster_multiplicities({0.0, 2.0, 2.0001, 2.0002, 6.0}, 0.01);
  REQUIRE(a.size() == 3);
  CHECK(a[1].multiplicity() == 3);
  CHECK(a[1].members == std::vector<int>{1, 2, 3});
  CHECK(cluster_multiplicities({}, 0.1).empty());
  const auto r = cluster_multiplicities_relative({0.75, 0.76, 3.70, 3.75, 3.80, 3.85}, 0.08);
  REQUIRE(r.size() == 2);
  CHECK(r[1].multiplicity() == 4);
}
