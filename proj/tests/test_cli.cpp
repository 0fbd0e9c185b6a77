// Runs the command-line tool end to end.

#include "doctest.h"
#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "z2eig_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(Z2EIG_CLI) + " " + args + " > " + (kWork / "last.log").string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string read(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p;
}

struct Setup {
  Setup() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    write("antipodal.json", R"({"points": [[1, 0, 0], [-1, 0, 0]]})");
    write("odd.json", R"({"points": [[0, 0, 1]]})");
  }
};

const Setup& setup() {
  static const Setup s;
  return s;
}

}  // namespace

TEST_CASE("solve writes spectrum, sections, branch report and manifest") {
  setup();
  const std::string base = (kWork / "antipodal.json").string() + " -k 6 --background 8000 --refine 3 --out ";
  REQUIRE(run("solve " + base + (kWork / "s1").string()) == 0);
  for (const char* f : {"mesh.off", "mesh.off.json", "spectrum.json", "sections.csv", "branch.json", "manifest.json"})
    CHECK(fs::exists(kWork / "s1" / f));
  const Json sp = Json::parse(read(kWork / "s1" / "spectrum.json"));
  REQUIRE(sp["clusters"].size() == 2);
  CHECK(sp["clusters"][0]["multiplicity"] == 2);
  CHECK(sp["clusters"][1]["multiplicity"] == 4);
  CHECK(sp["clusters"][0]["value"].get<double>() == doctest::Approx(0.75).epsilon(0.02));
  CHECK(sp["clusters"][1]["value"].get<double>() == doctest::Approx(3.75).epsilon(0.02));
  const Json m = Json::parse(read(kWork / "s1" / "manifest.json"));
  CHECK(m["command"] == "solve");
  CHECK(m["input_digests"].size() == 1);
  CHECK(m["outputs"].size() == 5);
  // deterministic rerun
  REQUIRE(run("solve " + base + (kWork / "s2").string()) == 0);
  CHECK(read(kWork / "s1" / "spectrum.json") == read(kWork / "s2" / "spectrum.json"));
  CHECK(read(kWork / "s1" / "sections.csv") == read(kWork / "s2" / "sections.csv"));
}

TEST_CASE("input errors exit with 2") {
  setup();
  CHECK(run("solve " + (kWork / "odd.json").string() + " --out " + (kWork / "odd").string()) == 2);
  CHECK(read(kWork / "last.log").find("OddCount") != std::string::npos);
  CHECK(run("solve " + (kWork / "missing.json").string()) == 2);
  CHECK(run("solve") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("gradcheck --trials zero") == 2);
  // a tampered spectrum file with a negative eigenvalue
  write("tampered.json", R"({"eigenvalues": [-0.5, 0.75], "residuals": [0, 0], "clusters": []})");
  CHECK(run("lift --points " + (kWork / "antipodal.json").string() + " --spectrum " +
            (kWork / "tampered.json").string() + " --out " + (kWork / "lift").string()) == 2);
  CHECK(read(kWork / "last.log").find("NegativeEigenvalue") != std::string::npos);
}

TEST_CASE("nodal writes the zero graph") {
  setup();
  REQUIRE(run("nodal --points " + (kWork / "antipodal.json").string() +
              " --background 6000 --refine 2 --assert --out " + (kWork / "nodal").string()) == 0);
  const Json g = Json::parse(read(kWork / "nodal" / "graph.json"));
  CHECK(g["summary"]["chi"] == g["summary"]["chi_closed_form"]);
  CHECK(fs::exists(kWork / "nodal" / "manifest.json"));
}

TEST_CASE("gradcheck table and assertion") {
  setup();
  REQUIRE(run("gradcheck --n 1 --trials 2 --assert --out " + (kWork / "grad").string()) == 0);
  const std::string csv = read(kWork / "grad" / "gradcheck.csv");
  CHECK(csv.rfind("config,direction,formula,fd,rel_error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("failed assertions exit with 4") {
  setup();
  // a short sweep stops far from the separation the assertions refer to
  const std::string args = "sweep-c2 --steps 3 --last 1.0 --branches 2 --background 6000 --refine 2 --out " +
                           (kWork / "sweep").string();
  CHECK(run(args) == 0);
  CHECK(run(args + " --assert") == 4);
  CHECK(fs::exists(kWork / "sweep" / "branches.csv"));
}
