#include "doctest.h"

#include "support.hpp"
#include "z2eig/error.hpp"
#include "z2eig/io.hpp"
#include "z2eig/studies.hpp"

#include <cstdlib>
#include <filesystem>

using namespace z2eig;
using testing::small_mesh;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("z2eig_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

ErrorCode parse_code(const std::string& text) {
  try {
    parse_configuration(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("configuration files") {
  const Configuration c = parse_configuration(R"({"points": [[0, 0, 1], [1, 0, 0]]})");
  CHECK(c.size() == 2);
  const Configuration d = parse_configuration(configuration_json(c).dump());
  CHECK((d[1] - c[1]).norm() == 0.0);
  CHECK(parse_code("{") == ErrorCode::InvalidInput);
  CHECK(parse_code(R"({"pts": []})") == ErrorCode::InvalidInput);
  CHECK(parse_code(R"({"points": [[0, 0, 1]]})") == ErrorCode::OddCount);
  CHECK(parse_code(R"({"points": [[0, 0, 1], [0, 0, 2]]})") == ErrorCode::NotUnit);
  CHECK(parse_code(R"({"points": [[0, 0, 1], [0, 0]]})") == ErrorCode::InvalidInput);
  CHECK(parse_code(R"({"points": [[0, 0, 1], [0, 0, 1]]})") == ErrorCode::DuplicatePoint);
  try {
    load_configuration("/nonexistent/file.json");
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("spectrum json") {
  std::vector<EigenPair> p(3);
  p[0].value = 0.75;
  p[1].value = 0.7501;
  p[2].value = 3.75;
  const Json j = spectrum_json(p);
  CHECK(j["clusters"].size() == 2);
  CHECK(j["clusters"][0]["multiplicity"] == 2);
  CHECK(spectrum_values(j) == std::vector<double>{0.75, 0.7501, 3.75});
  Json bad = j;
  bad["eigenvalues"] = "x";
  CHECK_THROWS_AS(spectrum_values(bad), Error);
}

TEST_CASE("mesh round trip") {
  const fs::path d = scratch_dir("mesh");
  const Problem P = Problem::build(random_configuration(1, 4), small_mesh(1500, 1));
  const std::string off = (d / "mesh.off").string();
  write_mesh(P, off);
  CHECK(fs::exists(off + ".json"));
  const SphericalMesh m = read_mesh(off);
  REQUIRE(m.vertex_count() == P.mesh().vertex_count());
  for (std::size_t v = 0; v < m.vertex_count(); ++v) CHECK((m.vertices()[v] - P.mesh().vertices()[v]).norm() == 0.0);
  CHECK(m.triangles() == P.mesh().triangles());
  CHECK(m.config_vertex() == P.mesh().config_vertex());
  const Json side = Json::parse(read_text(off + ".json"));
  CHECK(side["negative_edges"].size() == P.cut().crossing_edges.size());
}

TEST_CASE("mesh cache returns the same mesh") {
  const fs::path d = scratch_dir("cache");
  setenv("Z2EIG_CACHE_DIR", d.c_str(), 1);
  const Configuration c = random_configuration(1, 6);
  const MeshParams mp = small_mesh(1500, 1).mesh;
  const SphericalMesh a = cached_mesh(c, mp);
  CHECK(std::distance(fs::directory_iterator(d), fs::directory_iterator()) > 0);
  const SphericalMesh b = cached_mesh(c, mp);
  const SphericalMesh r = build_mesh(c, mp);
  unsetenv("Z2EIG_CACHE_DIR");
  CHECK(a.triangles() == b.triangles());
  CHECK(a.triangles() == r.triangles());
  for (std::size_t v = 0; v < a.vertex_count(); ++v) CHECK((a.vertices()[v] - b.vertices()[v]).norm() == 0.0);
}

TEST_CASE("digests, tables and manifests") {
  CHECK(hex_digest(fnv1a("")) == "cbf29ce484222325");
  CHECK(hex_digest(fnv1a("a")) == "af63dc4c8601ec8c");
  const fs::path d = scratch_dir("manifest");
  write_text((d / "in.txt").string(), "a");
  CHECK(file_digest((d / "in.txt").string()) == "af63dc4c8601ec8c");
  CsvTable t({"x", "n", "s"});
  t.add({0.1, 3LL, std::string("ok")});
  CHECK(t.str() == "x,n,s\n0.10000000000000001,3,ok\n");
  RunManifest m;
  m.command = "solve";
  m.seed = 5;
  m.version = version_string();
  m.input_digests["in.txt"] = file_digest((d / "in.txt").string());
  m.outputs = {"spectrum.json"};
  m.write(d.string());
  const Json j = Json::parse(read_text((d / "manifest.json").string()));
  CHECK(j["command"] == "solve");
  CHECK(j["seed"] == 5);
  CHECK(j["input_digests"]["in.txt"] == "af63dc4c8601ec8c");
}

TEST_CASE("study parameter validation") {
  CHECK_THROWS_AS(run_study("nope", Json::object()), Error);
  CHECK_THROWS_AS(run_study("sweep_c2", {{"stepz", 3}}), Error);
  CHECK_THROWS_AS(run_study("sweep_c2", {{"mesh", {{"depth", 20}}}}), Error);
  CHECK_THROWS_AS(run_study("gradcheck", {{"n", "one"}}), Error);
  try {
    run_study("lift", {{"points", {{0, 0, 1}, {0, 0, -1}}}, {"lambda", -1.0}});
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeEigenvalue);
  }
}

TEST_CASE("nodal study output") {
  const Json r = run_study("nodal", {{"random_pairs", 1}, {"seed", 2}, {"mesh", {{"background", 4000}, {"depth", 2}}}});
  CHECK(r["assertions"]["census"] == true);
  CHECK(r["assertions"]["euler_closed_form"] == true);
  CHECK(r["summary"]["chi"] == r["summary"]["chi_closed_form"]);
  CHECK(r["nodes"].size() >= 2);
}
