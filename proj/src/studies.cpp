#include "z2eig/studies.hpp"

#include "z2eig/error.hpp"

#include <cmath>
#include <set>

namespace z2eig {

namespace {

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw Error(ErrorCode::InvalidInput, "unknown key '" + k + "' in " + where);
}

template <class T>
T get(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, std::string("parameter '") + key + "' has the wrong type");
  }
}

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json points_json(const Configuration& c) { return configuration_json(c)["points"]; }

std::vector<double> get_list(const Json& j, const char* key, std::vector<double> fallback) {
  return get<std::vector<double>>(j, key, std::move(fallback));
}

const Json kEmpty = Json::object();

const Json& block(const Json& params, const char* key) { return params.contains(key) ? params.at(key) : kEmpty; }

}  // namespace

ProblemParams problem_params_from_json(const Json& params, const MeshParams& defaults) {
  ProblemParams p;
  p.mesh = defaults;
  const Json& m = block(params, "mesh");
  check_keys(m, "mesh", {"background", "depth", "grade_radius", "min_angle_deg", "seed", "cut_seed"});
  p.mesh.background_count = get(m, "background", p.mesh.background_count);
  p.mesh.grade_depth = get(m, "depth", p.mesh.grade_depth);
  p.mesh.grade_radius = get(m, "grade_radius", p.mesh.grade_radius);
  p.mesh.min_angle_deg = get(m, "min_angle_deg", p.mesh.min_angle_deg);
  p.mesh.seed = get<std::uint64_t>(m, "seed", p.mesh.seed);
  p.cut_seed = get<std::uint64_t>(m, "cut_seed", p.cut_seed);
  if (p.mesh.grade_depth < 0 || p.mesh.grade_depth > 8) throw Error(ErrorCode::InvalidInput, "depth must lie in [0, 8]");
  return p;
}

SolverOptions solver_options_from_json(const Json& params) {
  SolverOptions o;
  const Json& s = block(params, "solver");
  check_keys(s, "solver", {"tol", "shift", "seed", "max_restarts", "fallback"});
  o.tol = get(s, "tol", o.tol);
  o.shift = get(s, "shift", o.shift);
  o.seed = get<std::uint64_t>(s, "seed", o.seed);
  o.max_restarts = get(s, "max_restarts", o.max_restarts);
  o.fallback = get(s, "fallback", o.fallback);
  if (!(o.tol > 0.0)) throw Error(ErrorCode::InvalidInput, "solver tol must be positive");
  return o;
}

Configuration configuration_from_json(const Json& params) {
  if (params.contains("points")) return parse_configuration(Json{{"points", params.at("points")}}.dump());
  if (params.contains("points_file")) return load_configuration(get<std::string>(params, "points_file", ""));
  throw Error(ErrorCode::InvalidInput, "parameters need \"points\" or \"points_file\"");
}

namespace {

Json study_sweep_c2(const Json& p) {
  check_keys(p, "sweep_c2", {"steps", "last", "branches", "min_overlap", "mesh", "solver"});
  SpectralFlowParams fp;
  fp.problem = problem_params_from_json(p);
  fp.solver = solver_options_from_json(p);
  fp.branches = get(p, "branches", 6);
  fp.min_overlap = get(p, "min_overlap", 0.7);
  const int steps = get(p, "steps", 10);
  const double last = get(p, "last", 0.05);
  if (steps < 2) throw Error(ErrorCode::InvalidInput, "steps must be at least 2");
  const auto seps = c2_separations(steps, last);
  const BranchCurves bc = spectral_flow_c2(seps, fp);
  Json values = Json::array();
  for (Eigen::Index i = 0; i < bc.values.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index b = 0; b < bc.values.cols(); ++b) row.push_back(bc.values(i, b));
    values.push_back(row);
  }
  const Eigen::Index L = bc.values.rows() - 1;
  const double lower = bc.values.row(L).minCoeff();
  double near2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index b = 0; b < bc.values.cols(); ++b)
    if (std::abs(bc.values(L, b) - 2.0) < std::abs(near2 - 2.0)) near2 = bc.values(L, b);
  return Json{{"separations", bc.separations},
              {"branches", values},
              {"step_overlap", bc.step_overlap},
              {"swaps", bc.swaps},
              {"sorted", bc.sorted},
              {"lowest_at_last", lower},
              {"nearest_two_at_last", near2},
              {"assertions",
               {{"lower_branch_at_most_0.1", lower <= 0.1},
                {"branch_within_10pct_of_2", std::abs(near2 - 2.0) <= 0.2}}}};
}

Json study_gradcheck(const Json& p) {
  check_keys(p, "gradcheck", {"n", "trials", "seed", "h", "min_separation", "mesh", "solver"});
  const int n = get(p, "n", 1);
  const int trials = get(p, "trials", 10);
  const std::uint64_t seed = get<std::uint64_t>(p, "seed", 1);
  const double h = get(p, "h", 1e-3);
  const double sep = get(p, "min_separation", 0.5);
  if (n < 1 || trials < 1) throw Error(ErrorCode::InvalidInput, "n and trials must be positive");
  MeshParams md;
  md.background_count = 20000;
  md.grade_depth = 3;
  const ProblemParams pp = problem_params_from_json(p, md);
  const SolverOptions so = solver_options_from_json(p);
  Json rows = Json::array();
  double worst = 0.0;
  std::uint64_t s = seed;
  int skipped = 0;
  for (int t = 0; t < trials;) {
    if (skipped > 4 * trials) throw Error(ErrorCode::DegenerateCluster, "too many degenerate draws");
    const Configuration c = random_configuration(n, s, sep);
    const ConfigTangent nu = random_tangent(c, s + 1000003);
    const std::uint64_t used = s++;
    GradientCheck g;
    try {
      g = gradient_check(Problem::build(c, pp), nu, h, so);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateCluster) {
        ++skipped;
        continue;
      }
      throw;
    }
    worst = std::max(worst, g.rel_error);
    rows.push_back({{"config", used},
                    {"direction", used + 1000003},
                    {"eigenvalue", g.eigenvalue},
                    {"formula", g.formula},
                    {"fd", g.fd},
                    {"rel_error", g.rel_error},
                    {"points", points_json(c)}});
    ++t;
  }
  return Json{{"rows", rows}, {"max_rel_error", worst}, {"assertions", {{"all_within_5pct", worst <= 0.05}}}};
}

Json study_flow(const Json& p) {
  check_keys(p, "flow", {"points", "points_file", "separation", "step", "max_iters", "grad_tol", "mult_tol", "mesh", "solver"});
  AscentParams ap;
  MeshParams md;
  md.background_count = 20000;
  md.grade_depth = 3;
  ap.problem = problem_params_from_json(p, md);
  ap.solver = solver_options_from_json(p);
  ap.step = get(p, "step", ap.step);
  ap.max_iters = get(p, "max_iters", ap.max_iters);
  ap.grad_tol = get(p, "grad_tol", ap.grad_tol);
  ap.mult_tol = get(p, "mult_tol", ap.mult_tol);
  const Configuration start =
      p.contains("separation") ? c2_configuration(get(p, "separation", 1.0)) : configuration_from_json(p);
  const FlowTrajectory tr = flow_ascent(start, ap);
  Json steps = Json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const auto& st = tr.steps[i];
    if (i > 0 && st.spectrum[0] < tr.steps[i - 1].spectrum[0] - 1e-9) monotone = false;
    steps.push_back({{"points", points_json(st.config)},
                     {"spectrum", st.spectrum},
                     {"gradient_norm", st.gradient_norm},
                     {"multiplicity", st.multiplicity},
                     {"step", st.step}});
  }
  return Json{{"steps", steps},
              {"reason", termination_name(tr.reason)},
              {"assertions", {{"lowest_eigenvalue_nondecreasing", monotone}}}};
}

Json study_packing(const Json& p) {
  check_keys(p, "packing", {"radii", "grade_radius_factor", "untwisted_control", "mesh", "solver"});
  PackingParams pk;
  MeshParams md;
  md.background_count = pk.background_count;
  md.grade_depth = pk.grade_depth;
  const ProblemParams pp = problem_params_from_json(p, md);
  pk.background_count = pp.mesh.background_count;
  pk.grade_depth = pp.mesh.grade_depth;
  pk.grade_radius_factor = get(p, "grade_radius_factor", pk.grade_radius_factor);
  pk.solver = solver_options_from_json(p);
  const auto radii = get_list(p, "radii", {0.7, 0.5, 0.35});
  const auto rows = packing_eigenvalue_study(radii, pk, get(p, "untwisted_control", true));
  Json out = Json::array();
  bool increasing = true;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0 && radii[i] < radii[i - 1] && !(r.E > rows[i - 1].E)) increasing = false;
    lo = std::min(lo, r.ER2);
    hi = std::max(hi, r.ER2);
    out.push_back({{"R", r.R}, {"points", r.points}, {"vertices", r.vertices}, {"E", r.E}, {"ER2", r.ER2},
                   {"E_over_n", r.E_over_n}, {"untwisted", r.untwisted}});
  }
  return Json{{"rows", out},
              {"ER2_band", hi / lo},
              {"assertions", {{"E_increasing_as_R_decreases", increasing}, {"ER2_within_factor_3", hi <= 3.0 * lo}}}};
}

Json study_coalesce(const Json& p) {
  check_keys(p, "coalesce", {"separations", "orientation", "cutoff_scale", "identity_separation", "mesh", "solver"});
  CoalesceParams cp;
  cp.problem = problem_params_from_json(p);
  cp.solver = solver_options_from_json(p);
  cp.orientation = get(p, "orientation", cp.orientation);
  cp.cutoff_scale = get(p, "cutoff_scale", cp.cutoff_scale);
  const auto seps = get_list(p, "separations", {0.2, 0.1, 0.05, 0.02});
  const Configuration base = make_configuration(std::vector<Vec3>{Vec3(0, 0, 1), Vec3(0, 0, -1)});
  const CoalesceStudy st = coalesce_study(base, seps, cp);
  Json rows = Json::array();
  bool above = true;
  double gap_last = 0.0, sep_min = kPi;
  for (const auto& r : st.rows) {
    above = above && r.E > 0.75;
    if (r.separation < sep_min) sep_min = r.separation, gap_last = std::abs(r.gap);
    rows.push_back({{"separation", r.separation}, {"E", r.E}, {"gap", r.gap}, {"transferred", r.transferred}});
  }
  Json out{{"E_base", st.E_base}, {"x", vec_json(st.x)}, {"rows", rows}};
  Json asserts{{"E_above_0.75", above}, {"smallest_separation_gap_within_10pct", gap_last <= 0.1}};
  const double s_id = get(p, "identity_separation", 0.05);
  if (s_id > 0.0) {
    const PairInsertion pi = pair_insertion_identity(base, s_id, cp);
    out["identity"] = {{"separation", s_id},
                       {"index", pi.index},
                       {"E_p", pi.E_p},
                       {"E_q", pi.E_q},
                       {"lhs", pi.identity.lhs},
                       {"rhs", pi.identity.rhs},
                       {"overlap", pi.identity.overlap},
                       {"residual", pi.identity.residual},
                       {"signs_match", pi.identity.signs_match}};
    asserts["identity_within_15pct"] = pi.identity.residual <= 0.15 && pi.identity.signs_match;
    asserts["overlap_positive"] = pi.identity.overlap > 0.0;
  }
  out["assertions"] = asserts;
  return out;
}

Json study_nodal(const Json& p) {
  check_keys(p, "nodal", {"points", "points_file", "random_pairs", "seed", "index", "eps_z", "k", "mesh", "solver"});
  MeshParams md;
  md.background_count = 10000;
  md.grade_depth = 3;
  const ProblemParams pp = problem_params_from_json(p, md);
  const Configuration c = p.contains("random_pairs")
                              ? random_configuration(get(p, "random_pairs", 1), get<std::uint64_t>(p, "seed", 1))
                              : configuration_from_json(p);
  const int index = get(p, "index", 0);
  if (index < 0 || index > 50) throw Error(ErrorCode::InvalidInput, "index out of range");
  NodalParams np;
  np.eps_z = get(p, "eps_z", np.eps_z);
  const Problem P = Problem::build(c, pp);
  const auto eig = P.solve(index + 1, solver_options_from_json(p));
  const ZeroGraph g = extract_zero_graph(P, eig[index].vector, np);
  const auto chi = euler_characteristic(g, c.size());
  const auto census = vanishing_census(g, c.size(), index + 1);
  Json out = graph_json(g, c.size());
  out["points"] = points_json(c);
  out["eigenvalue"] = eig[index].value;
  out["census"] = {{"vanishing", census.vanishing}, {"required", census.required}, {"orders", census.orders},
                   {"has_cycles", census.has_cycles}, {"pass", census.pass}};
  out["assertions"] = {{"census", census.pass}, {"euler_closed_form", chi.agree()}};
  return out;
}

Json study_lift(const Json& p) {
  check_keys(p, "lift", {"points", "points_file", "spectrum_file", "lambda", "index", "convention", "exclusion",
                         "mls_radius", "h", "shells", "directions", "samples", "mesh", "solver"});
  MeshParams md;
  md.background_count = 45000;
  md.grade_depth = 2;
  const ProblemParams pp = problem_params_from_json(p, md);
  const int index = get(p, "index", 0);
  if (index < 0 || index > 50) throw Error(ErrorCode::InvalidInput, "index out of range");
  // eigenvalues from a spectrum file are validated before any mesh work
  std::optional<double> lambda;
  if (p.contains("spectrum_file")) {
    const auto vals = spectrum_values(Json::parse(read_text(get<std::string>(p, "spectrum_file", ""))));
    if (index >= static_cast<int>(vals.size())) throw Error(ErrorCode::InvalidInput, "index beyond the spectrum file");
    lambda = vals[index];
  }
  if (p.contains("lambda")) lambda = get(p, "lambda", 0.0);
  if (lambda) homogeneity_exponent(*lambda);

  const Configuration c = configuration_from_json(p);
  const Problem P = Problem::build(c, pp);
  const auto eig = P.solve(index + 1, solver_options_from_json(p));
  const double lam = lambda.value_or(eig[index].value);
  LiftParams lp;
  const std::string conv = get<std::string>(p, "convention", "harmonic");
  if (conv == "as_printed") lp.convention = LiftConvention::AsPrinted;
  else if (conv != "harmonic") throw Error(ErrorCode::InvalidInput, "convention must be harmonic or as_printed");
  lp.exclusion = get(p, "exclusion", lp.exclusion);
  lp.mls_radius = get(p, "mls_radius", lp.mls_radius);
  ShellGrid grid;
  grid.h = get(p, "h", grid.h);
  grid.shells = get(p, "shells", grid.shells);
  grid.directions = get(p, "directions", grid.directions);

  const HarmonicLift lift(P, eig[index].vector, lam, lp);
  const ResidualStudy rs = closed_coclosed_residuals(lift, grid);
  const HarmonicLift corrupted(P, eig[index].vector, lam + 0.2, lp);
  const ResidualStudy rc = closed_coclosed_residuals(corrupted, grid);
  const double sensitivity = rc.fine.delta_residual / rs.fine.delta_residual;

  // homogeneity on fixed sample points clear of the tubes
  Json homog = Json::array();
  double worst = 0.0;
  const Vec3 x0 = Vec3(0.3, 0.5, 0.2);
  for (double cfac : {0.5, 2.0, 4.0}) {
    const double ratio = lift.evaluate(cfac * x0).norm() / lift.evaluate(x0).norm();
    const double expect = std::pow(cfac, lift.degree());
    worst = std::max(worst, std::abs(ratio / expect - 1.0));
    homog.push_back({{"c", cfac}, {"ratio", ratio}, {"expected", expect}});
  }
  Json samples = Json::array();
  const int ns = get(p, "samples", 200);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < ns; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / ns, rr = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 u(rr * std::cos(golden * i), rr * std::sin(golden * i), z);
    if (lift.angle_to_rays(u) <= lp.exclusion) continue;
    const Vec3 nu = lift.evaluate(u);
    samples.push_back({u.x(), u.y(), u.z(), nu.x(), nu.y(), nu.z(), nu.norm()});
  }
  auto res_json = [](const ResidualStudy& r) {
    return Json{{"coarse", {{"h", r.coarse.h}, {"d", r.coarse.d_residual}, {"delta", r.coarse.delta_residual}}},
                {"fine", {{"h", r.fine.h}, {"d", r.fine.d_residual}, {"delta", r.fine.delta_residual}}},
                {"d_order", r.d_order},
                {"delta_order", r.delta_order},
                {"samples", r.coarse.samples}};
  };
  const bool harmonic = lp.convention == LiftConvention::Harmonic;
  return Json{{"lambda", lam},
              {"mu", lift.mu()},
              {"degree", lift.degree()},
              {"convention", conv},
              {"homogeneity", homog},
              {"residuals", res_json(rs)},
              {"corrupted_residuals", res_json(rc)},
              {"sensitivity", sensitivity},
              {"samples", samples},
              {"assertions",
               {{"homogeneity_1e-6", worst <= 1e-6},
                {"d_order_at_least_1", rs.d_order >= 1.0},
                {"delta_order_at_least_1", !harmonic || rs.delta_order >= 1.0},
                {"sensitivity_at_least_5", !harmonic || sensitivity >= 5.0}}}};
}

}  // namespace

Json run_study(const std::string& name, const Json& params) {
  if (name == "sweep_c2") return study_sweep_c2(params);
  if (name == "gradcheck") return study_gradcheck(params);
  if (name == "flow") return study_flow(params);
  if (name == "packing") return study_packing(params);
  if (name == "coalesce") return study_coalesce(params);
  if (name == "nodal") return study_nodal(params);
  if (name == "lift") return study_lift(params);
  throw Error(ErrorCode::InvalidInput, "unknown study '" + name + "'");
}

}  // namespace z2eig
