#include "doctest.h"

#include "support.hpp"
#include "z2eig/error.hpp"
#include "z2eig/nodal.hpp"

using namespace z2eig;
using testing::small_mesh;

TEST_CASE("zero graph of the antipodal ground state") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  const ZeroGraph g = extract_zero_graph(P, e[0].vector);
  CHECK(g.branch_nodes() == 2);
  CHECK(g.critical_nodes() == 0);
  CHECK(g.cycles == 0);
  for (const auto& n : g.nodes) CHECK(n.degree == 1);
  // one zero arc joining the two points
  REQUIRE(g.edges.size() == 1);
  CHECK(g.components == 1);
  const auto chi = euler_characteristic(g, 2);
  CHECK(chi.agree());
  CHECK(chi.combinatorial == 1);
  const auto census = vanishing_census(g, 2);
  CHECK(census.pass);
  CHECK(census.vanishing == 2);
  CHECK(census.required == 2);
  CHECK(census.orders == std::vector<int>{0, 0});
  for (const auto& ed : g.edges)
    for (const auto& q : ed.polyline) CHECK(q.norm() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("higher eigensections have lower census requirements") {
  const auto& P = testing::antipodal_problem();
  const auto& e = testing::antipodal_pairs();
  const ZeroGraph g = extract_zero_graph(P, e[2].vector);
  const auto census = vanishing_census(g, 2, 3);
  CHECK(census.required == 0);
  CHECK(census.pass);
  CHECK(euler_characteristic(g, 2).agree());
}

TEST_CASE("random ground states") {
  for (std::uint64_t seed : {3u, 4u}) {
    const Configuration c = random_configuration(2, seed);
    const Problem P = Problem::build(c, small_mesh(6000, 3));
    const auto e = P.solve(1);
    const ZeroGraph g = extract_zero_graph(P, e[0].vector);
    const auto census = vanishing_census(g, c.size());
    CHECK(census.vanishing >= 3);
    CHECK_FALSE(census.has_cycles);
    CHECK(euler_characteristic(g, c.size()).agree());
  }
}

TEST_CASE("closed form of the Euler characteristic") {
  // two branch nodes of degree 3 joined by three arcs plus one critical node
  ZeroGraph g;
  g.nodes.push_back({Vec3(0, 0, 1), NodeKind::Branch, 3, 0, -1});
  g.nodes.push_back({Vec3(0, 0, -1), NodeKind::Branch, 3, 1, -1});
  for (int k = 0; k < 3; ++k) g.edges.push_back({0, 1, {}, {}});
  g.components = 1;
  g.cycles = 2;
  const auto chi = euler_characteristic(g, 2);
  CHECK(chi.combinatorial == -1);
  CHECK(chi.agree());
}
