// Command-line front end. Exit codes: 0 success, 2 invalid input, 3 numerical
// failure, 4 failed assertion (with --assert).

#include "z2eig.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAssert = 4;

struct Failure {
  int exit_code;
  std::string message;
};

void check(int status, const char* stage) {
  if (status == Z2EIG_OK) return;
  const int code = z2eig_status_is_input_error(status) ? kExitInput : kExitNumeric;
  throw Failure{code, std::string(stage) + ": " + z2eig_last_error()};
}

struct Common {
  int background = -1;
  int refine = -1;
  std::string out;
  bool assert_results = false;
  int threads = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--background", c.background, "Fibonacci background points");
  app->add_option("--refine", c.refine, "graded refinement depth");
  app->add_option("--out", c.out, "output directory");
  app->add_flag("--assert", c.assert_results, "exit 4 when an acceptance assertion fails");
  app->add_option("--threads", c.threads, "worker threads (1 is deterministic)")->check(CLI::Range(1, 1024));
}

Json mesh_block(const Common& c) {
  Json m = Json::object();
  if (c.background > 0) m["background"] = c.background;
  if (c.refine >= 0) m["depth"] = c.refine;
  return m;
}

std::string out_dir(const Common& c, const std::string& command) {
  const std::string d = c.out.empty() ? "out/" + command : c.out;
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw Failure{kExitInput, "cannot create output directory '" + d + "'"};
  return d;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Failure{kExitInput, "cannot write '" + path + "'"};
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string digest(const std::string& path) {
  char d[17];
  check(z2eig_file_digest(path.c_str(), d), "digest");
  return d;
}

void write_manifest(const std::string& dir, const std::string& command, const Json& params,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
  Json digests = Json::object();
  for (const auto& in : inputs) digests[in] = digest(in);
  Json seed = params.contains("seed") ? params["seed"] : Json(0);
  const Json m{{"command", command},
               {"parameters", params},
               {"seed", seed},
               {"version", z2eig_version()},
               {"input_digests", digests},
               {"outputs", outputs}};
  write_file((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

Json run(const std::string& name, const Json& params) {
  char* text = nullptr;
  check(z2eig_run_study(name.c_str(), params.dump().c_str(), &text), name.c_str());
  Json r = Json::parse(text);
  z2eig_string_free(text);
  return r;
}

int finish(const Common& c, const Json& result) {
  int failed = 0;
  if (result.contains("assertions"))
    for (const auto& [k, v] : result["assertions"].items()) {
      std::printf("%s %s\n", v.get<bool>() ? "PASS" : "FAIL", k.c_str());
      if (!v.get<bool>()) ++failed;
    }
  return c.assert_results && failed ? kExitAssert : 0;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Failure{kExitInput, "cannot parse number '" + item + "'"};
    }
  }
  return v;
}

// ---------------------------------------------------------------------------

int cmd_solve(const Common& c, const std::string& points, int k) {
  z2eig_mesh_options mo;
  z2eig_mesh_options_default(&mo);
  if (c.background > 0) mo.background_count = c.background;
  if (c.refine >= 0) mo.grade_depth = c.refine;
  z2eig_problem* p = nullptr;
  check(z2eig_problem_from_file(points.c_str(), &mo, 1, &p), "mesh");
  std::unique_ptr<z2eig_problem, void (*)(z2eig_problem*)> hold(p, z2eig_problem_destroy);
  size_t npts = 0, nv = 0, nt = 0, nf = 0;
  check(z2eig_problem_info(p, &npts, &nv, &nt, &nf), "mesh");
  z2eig_solver_options so;
  z2eig_solver_options_default(&so);
  z2eig_spectrum* s = nullptr;
  check(z2eig_solve(p, k, &so, &s), "eigensolver");
  std::unique_ptr<z2eig_spectrum, void (*)(z2eig_spectrum*)> hold_s(s, z2eig_spectrum_destroy);
  const std::string dir = out_dir(c, "solve");

  const std::string mesh = (fs::path(dir) / "mesh.off").string();
  const std::string spectrum = (fs::path(dir) / "spectrum.json").string();
  const std::string sections = (fs::path(dir) / "sections.csv").string();
  const std::string branch = (fs::path(dir) / "branch.json").string();
  check(z2eig_problem_write_mesh(p, mesh.c_str()), "mesh export");
  check(z2eig_spectrum_write_json(s, spectrum.c_str()), "spectrum export");

  std::vector<double> xyz(3 * nv);
  check(z2eig_problem_vertices(p, xyz.data(), xyz.size()), "sections");
  std::vector<std::vector<double>> f(k, std::vector<double>(nv));
  for (int i = 0; i < k; ++i) check(z2eig_spectrum_vertex_values(s, i, f[i].data(), nv), "sections");
  std::string csv = "vertex,x,y,z";
  for (int i = 0; i < k; ++i) csv += ",f" + std::to_string(i);
  csv += "\n";
  for (size_t v = 0; v < nv; ++v) {
    csv += std::to_string(v) + "," + num(xyz[3 * v]) + "," + num(xyz[3 * v + 1]) + "," + num(xyz[3 * v + 2]);
    for (int i = 0; i < k; ++i) csv += "," + num(f[i][v]);
    csv += "\n";
  }
  write_file(sections, csv);

  Json report = Json::array();
  for (int i = 0; i < k; ++i) {
    Json per = Json::array();
    for (size_t q = 0; q < npts; ++q) {
      int n = 0;
      double re = 0, im = 0, res = 0;
      const int st = z2eig_branch_data(s, i, static_cast<int>(q), &n, &re, &im, &res);
      if (st == Z2EIG_OK)
        per.push_back({{"point", q}, {"n_p", n}, {"re_a", re}, {"im_a", im}, {"residual", res}});
      else
        per.push_back({{"point", q}, {"error", z2eig_last_error()}});
    }
    double value = 0;
    check(z2eig_spectrum_value(s, i, &value, nullptr), "branch report");
    report.push_back({{"index", i}, {"eigenvalue", value}, {"points", per}});
  }
  write_file(branch, report.dump(2) + "\n");
  const Json params{{"points_file", points}, {"num_eigs", k}, {"mesh", mesh_block(c)}, {"seed", so.seed}};
  write_manifest(dir, "solve", params, {points}, {mesh, mesh + ".json", spectrum, sections, branch});
  std::printf("%zu vertices, %zu free\n", nv, nf);
  for (int i = 0; i < k; ++i) {
    double v = 0, r = 0;
    check(z2eig_spectrum_value(s, i, &v, &r), "spectrum");
    std::printf("lambda_%d = %.8f  (residual %.1e)\n", i, v, r);
  }
  return 0;
}

int cmd_study(const Common& c, const std::string& command, const std::string& study, Json params,
              const std::vector<std::string>& inputs) {
  params["mesh"] = mesh_block(c);
  if (params["mesh"].empty()) params.erase("mesh");
  const Json r = run(study, params);
  const std::string dir = out_dir(c, command);
  std::vector<std::string> outputs;
  static const std::map<std::string, std::pair<std::string, std::string>> names{
      {"sweep_c2", {"branches.json", "branches.csv"}}, {"gradcheck", {"gradcheck.json", "gradcheck.csv"}},
      {"flow", {"flow.json", "flow.csv"}},             {"packing", {"packing.json", "packing.csv"}},
      {"coalesce", {"coalesce.json", "coalesce.csv"}}, {"nodal", {"graph.json", ""}},
      {"lift", {"lift.json", "lift_samples.csv"}}};
  const auto& [json_name, csv_name] = names.at(study);
  const std::string json_path = (fs::path(dir) / json_name).string();
  write_file(json_path, r.dump(2) + "\n");
  outputs.push_back(json_path);

  // plot-ready tables
  std::string csv;
  if (study == "sweep_c2") {
    csv = "separation";
    const size_t B = r["branches"][0].size();
    for (size_t b = 0; b < B; ++b) csv += ",branch" + std::to_string(b);
    csv += ",overlap\n";
    for (size_t i = 0; i < r["separations"].size(); ++i) {
      csv += num(r["separations"][i].get<double>());
      for (size_t b = 0; b < B; ++b) csv += "," + num(r["branches"][i][b].get<double>());
      const auto& ov = r["step_overlap"];
      csv += "," + (i < ov.size() ? num(ov[i].get<double>()) : std::string("")) + "\n";
    }
  } else if (study == "gradcheck") {
    csv = "config,direction,formula,fd,rel_error\n";
    for (const auto& row : r["rows"])
      csv += std::to_string(row["config"].get<std::uint64_t>()) + "," + std::to_string(row["direction"].get<std::uint64_t>()) +
             "," + num(row["formula"].get<double>()) + "," + num(row["fd"].get<double>()) + "," +
             num(row["rel_error"].get<double>()) + "\n";
  } else if (study == "flow") {
    csv = "step,lambda0,lambda1,lambda2,gradient_norm,multiplicity,step_length\n";
    int i = 0;
    for (const auto& st : r["steps"]) {
      csv += std::to_string(i++);
      for (size_t k = 0; k < 3; ++k)
        csv += "," + (k < st["spectrum"].size() ? num(st["spectrum"][k].get<double>()) : std::string(""));
      csv += "," + num(st["gradient_norm"].get<double>()) + "," + std::to_string(st["multiplicity"].get<int>()) + "," +
             num(st["step"].get<double>()) + "\n";
    }
  } else if (study == "packing") {
    csv = "R,points,vertices,E,ER2,E_over_n,untwisted\n";
    for (const auto& row : r["rows"])
      csv += num(row["R"].get<double>()) + "," + std::to_string(row["points"].get<int>()) + "," +
             std::to_string(row["vertices"].get<int>()) + "," + num(row["E"].get<double>()) + "," +
             num(row["ER2"].get<double>()) + "," + num(row["E_over_n"].get<double>()) + "," +
             num(row["untwisted"].get<double>()) + "\n";
  } else if (study == "coalesce") {
    csv = "separation,E,gap,transferred\n";
    for (const auto& row : r["rows"])
      csv += num(row["separation"].get<double>()) + "," + num(row["E"].get<double>()) + "," +
             num(row["gap"].get<double>()) + "," + num(row["transferred"].get<double>()) + "\n";
  } else if (study == "lift") {
    csv = "x,y,z,nu1,nu2,nu3,norm\n";
    for (const auto& s : r["samples"]) {
      for (size_t k = 0; k < s.size(); ++k) csv += (k ? "," : "") + num(s[k].get<double>());
      csv += "\n";
    }
  }
  if (!csv.empty()) {
    const std::string csv_path = (fs::path(dir) / csv_name).string();
    write_file(csv_path, csv);
    outputs.push_back(csv_path);
  }
  write_manifest(dir, command, params, inputs, outputs);
  return finish(c, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalues of the Laplacian on Z/2 twisted bundles over the sphere"};
  app.require_subcommand(1);
  Common common;

  std::string points;
  int num_eigs = 6;
  auto* solve = app.add_subcommand("solve", "mesh, solve and export one configuration");
  solve->add_option("points", points, "configuration JSON")->required();
  solve->add_option("--num-eigs,-k", num_eigs, "number of eigenpairs")->check(CLI::Range(1, 200));
  add_common(solve, common);

  int n = 1, trials = 10;
  std::uint64_t seed = 1;
  double h = 1e-3;
  auto* grad = app.add_subcommand("gradcheck", "gradient formula against finite differences");
  grad->add_option("--n", n, "pairs per configuration")->check(CLI::Range(1, 10));
  grad->add_option("--trials", trials, "random configurations")->check(CLI::Range(1, 1000));
  grad->add_option("--seed", seed, "first seed");
  grad->add_option("--fd-step", h, "finite-difference step (radians)");
  add_common(grad, common);

  double separation = 1.0, step = 0.05;
  int max_iters = 60;
  auto* flow = app.add_subcommand("flow", "retracted gradient ascent of the lowest eigenvalue");
  auto* flow_pts = flow->add_option("--points", points, "start configuration JSON");
  flow->add_option("--separation", separation, "C2 start separation when no points are given");
  flow->add_option("--step", step, "largest point displacement per step");
  flow->add_option("--max-iters", max_iters, "iteration cap");
  add_common(flow, common);

  int steps = 10, branches = 6;
  double last = 0.05;
  auto* sweep = app.add_subcommand("sweep-c2", "spectral flow of the two-point configuration");
  sweep->add_option("--steps", steps, "separations from pi down to --last")->check(CLI::Range(2, 400));
  sweep->add_option("--last", last, "smallest separation");
  sweep->add_option("--branches", branches, "tracked branches")->check(CLI::Range(1, 20));
  add_common(sweep, common);

  std::string radii = "0.7,0.5,0.35";
  auto* pack = app.add_subcommand("packing", "eigenvalue of R-packed pair configurations");
  pack->add_option("--radii", radii, "comma-separated radii");
  add_common(pack, common);

  std::string separations = "0.2,0.1,0.05,0.02";
  double orientation = 1.5707963267948966;
  auto* coal = app.add_subcommand("coalesce", "pair insertion into the antipodal configuration");
  coal->add_option("--separations", separations, "comma-separated pair separations");
  coal->add_option("--orientation", orientation, "pair direction angle in the tangent frame");
  add_common(coal, common);

  int index = 0, random_pairs = 0;
  auto* nodal = app.add_subcommand("nodal", "zero graph of an eigensection");
  nodal->add_option("--points", points, "configuration JSON");
  nodal->add_option("--random-pairs", random_pairs, "use a random configuration with this many pairs");
  nodal->add_option("--seed", seed, "seed of the random configuration");
  nodal->add_option("--index", index, "eigensection index (0 is the ground state)");
  add_common(nodal, common);

  std::string spectrum_file, convention = "harmonic";
  double lambda = NAN, lift_h = 0.05;
  auto* lift = app.add_subcommand("lift", "homogeneous harmonic 1-form of an eigensection");
  lift->add_option("--points", points, "configuration JSON")->required();
  lift->add_option("--spectrum", spectrum_file, "spectrum.json supplying the eigenvalue");
  lift->add_option("--lambda", lambda, "eigenvalue override");
  lift->add_option("--index", index, "eigensection index");
  lift->add_option("--convention", convention, "harmonic or as_printed");
  lift->add_option("--fd-step", lift_h, "coarse finite-difference step");
  add_common(lift, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    check(z2eig_set_threads(common.threads), "threads");
    if (*solve) return cmd_solve(common, points, num_eigs);
    if (*grad)
      return cmd_study(common, "gradcheck", "gradcheck", {{"n", n}, {"trials", trials}, {"seed", seed}, {"h", h}}, {});
    if (*flow) {
      Json p{{"step", step}, {"max_iters", max_iters}};
      std::vector<std::string> in;
      if (*flow_pts) p["points_file"] = points, in.push_back(points);
      else p["separation"] = separation;
      return cmd_study(common, "flow", "flow", p, in);
    }
    if (*sweep)
      return cmd_study(common, "sweep-c2", "sweep_c2", {{"steps", steps}, {"last", last}, {"branches", branches}}, {});
    if (*pack) return cmd_study(common, "packing", "packing", {{"radii", parse_list(radii)}}, {});
    if (*coal)
      return cmd_study(common, "coalesce", "coalesce",
                       {{"separations", parse_list(separations)}, {"orientation", orientation}}, {});
    if (*nodal) {
      Json p{{"index", index}};
      std::vector<std::string> in;
      if (random_pairs > 0) p["random_pairs"] = random_pairs, p["seed"] = seed;
      else if (!points.empty()) p["points_file"] = points, in.push_back(points);
      else throw Failure{kExitInput, "nodal needs --points or --random-pairs"};
      return cmd_study(common, "nodal", "nodal", p, in);
    }
    if (*lift) {
      Json p{{"points_file", points}, {"index", index}, {"convention", convention}, {"h", lift_h}};
      std::vector<std::string> in{points};
      if (!spectrum_file.empty()) p["spectrum_file"] = spectrum_file, in.push_back(spectrum_file);
      if (!std::isnan(lambda)) p["lambda"] = lambda;
      return cmd_study(common, "lift", "lift", p, in);
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return 0;
}
