// Acceptance run: one PASS/FAIL line per criterion with the measured values.
//
//   acceptance [--only 1,2,...] [--expect-fail 4,...]
//
// The exit status is the number of failed criteria that were not listed with
// --expect-fail. Tolerances are fixed below.

#include "z2eig/error.hpp"
#include "z2eig/experiments.hpp"
#include "z2eig/gauge.hpp"
#include "z2eig/io.hpp"
#include "z2eig/lift.hpp"
#include "z2eig/nodal.hpp"
#include "z2eig/studies.hpp"
#include "z2eig/variation.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace z2eig;

namespace {

// criterion 1
constexpr double kGroundTol = 0.03;
constexpr double kGroundRuntime = 60.0;
// criterion 2
constexpr double kSecondTol = 0.05;
// criterion 3
constexpr double kUntwistedTol = 0.01;
// criterion 4
constexpr double kFlowLowMax = 0.1;
constexpr double kFlowTwoTol = 0.1;
constexpr double kFlowLast = 0.05;
// criterion 5
constexpr double kGradientTol = 0.05;
constexpr double kGradientStep = 1e-3;
// criterion 6
constexpr double kSplitTol = 0.10;
// criterion 7
constexpr double kDivergenceTol = 0.05;
constexpr double kPairTol = 0.10;
// criterion 8
constexpr int kNodalConfigs = 20;
// criterion 9
constexpr double kCriticalZero = 1e-3;
constexpr double kCriticalAway = 0.1;
// criterion 10
constexpr double kPackingBand = 3.0;
// criterion 11
constexpr double kCoalesceGap = 0.10;
constexpr double kPairIdentityTol = 0.15;
// criterion 12
constexpr double kHomogeneityTol = 1e-6;
constexpr double kOrderMin = 1.0;
constexpr double kSensitivityMin = 5.0;
// criterion 13
constexpr double kRayleighTol = 0.02;
constexpr double kSupSlopeMax = 1.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Antipodal two-point problem on the default 30k / depth 4 mesh, shared by
// several criteria.
struct Antipodal {
  Problem problem;
  std::vector<EigenPair> pairs;
  double seconds = 0.0;
};

const Antipodal& antipodal() {
  static const Antipodal a = [] {
    const auto t0 = std::chrono::steady_clock::now();
    Problem p = Problem::build(c2_configuration(kPi));
    auto pairs = p.solve(10);
    return Antipodal{std::move(p), std::move(pairs), seconds_since(t0)};
  }();
  return a;
}

// Tangent moving each point of the antipodal pair toward +z.
ConfigTangent merge_direction(const Configuration& c) {
  std::vector<Vec3> v;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3 z(0, 0, 1);
    v.push_back((z - z.dot(c[i]) * c[i]).normalized());
  }
  return make_tangent(c, v);
}

Outcome ground_cluster() {
  const auto& a = antipodal();
  const auto cl = cluster_multiplicities_relative(values_of(a.pairs));
  const double e0 = rel(a.pairs[0].value, 0.75), e1 = rel(a.pairs[1].value, 0.75);
  const int V = static_cast<int>(a.problem.mesh().vertex_count());
  const bool ok = e0 <= kGroundTol && e1 <= kGroundTol && cl[0].multiplicity() == 2 && a.seconds <= kGroundRuntime &&
                  V >= 40000;
  return {ok, fmt("lambda = %.5f, %.5f, multiplicity %d, %d vertices, %.1f s", a.pairs[0].value, a.pairs[1].value,
                  cl[0].multiplicity(), V, a.seconds)};
}

Outcome second_cluster() {
  const auto& a = antipodal();
  const auto cl = cluster_multiplicities_relative(values_of(a.pairs));
  double worst = 0;
  for (int i = 2; i < 6; ++i) worst = std::max(worst, rel(a.pairs[i].value, 3.75));
  const bool ok = cl.size() > 1 && cl[1].multiplicity() == 4 && worst <= kSecondTol;
  return {ok, fmt("lambda_2..5 in [%.4f, %.4f], worst error %.2f%%, multiplicity %d", a.pairs[2].value,
                  a.pairs[5].value, 100 * worst, cl.size() > 1 ? cl[1].multiplicity() : 0)};
}

Outcome untwisted_control() {
  const auto& a = antipodal();
  const Problem u = Problem::untwisted(a.problem.config());
  const auto pairs = u.solve(4);
  bool ok = std::abs(pairs[0].value) <= kUntwistedTol;
  double worst = 0;
  for (int i = 1; i < 4; ++i) worst = std::max(worst, rel(pairs[i].value, 2.0));
  ok = ok && worst <= kUntwistedTol;
  return {ok, fmt("lambda = %.2e, %.5f, %.5f, %.5f", pairs[0].value, pairs[1].value, pairs[2].value, pairs[3].value)};
}

Outcome spectral_flow() {
  const Json r = run_study("sweep_c2", {{"steps", 10}, {"last", kFlowLast}});
  const double low = r["lowest_at_last"], two = r["nearest_two_at_last"];
  const bool ok = low <= kFlowLowMax && std::abs(two - 2.0) <= kFlowTwoTol * 2.0;
  return {ok, fmt("at separation %.2f: lowest branch %.4f (limit %.2f), branch near 2 at %.4f", kFlowLast, low,
                  kFlowLowMax, two)};
}

Outcome gradient_formula() {
  double worst = 0;
  int count = 0;
  for (int n : {1, 2}) {
    const Json r = run_study("gradcheck", {{"n", n}, {"trials", 5}, {"seed", 1}, {"h", kGradientStep}});
    worst = std::max(worst, r["max_rel_error"].get<double>());
    count += static_cast<int>(r["rows"].size());
  }
  return {count == 10 && worst <= kGradientTol, fmt("%d configurations, worst relative error %.2f%%", count, 100 * worst)};
}

Outcome degenerate_splitting() {
  const auto& a = antipodal();
  const std::vector<EigenPair> cluster(a.pairs.begin(), a.pairs.begin() + 2);
  const ConfigTangent nu = merge_direction(a.problem.config());
  const SplittingForm form = splitting_form(a.problem, cluster, nu);
  const ClusterSlopes fd = fd_cluster_slopes(a.problem, cluster, form.vectors, nu, 1e-3, 4);
  const bool opposite = form.eta(0) * form.eta(1) < 0;
  double worst = 0;
  for (int i = 0; i < 2; ++i) worst = std::max(worst, rel(form.eta(i), fd.central(i)));
  return {opposite && worst <= kSplitTol,
          fmt("eta = %+.4f, %+.4f; FD slopes %+.4f, %+.4f; worst mismatch %.1f%%", form.eta(0), form.eta(1),
              fd.central(0), fd.central(1), 100 * worst)};
}

Outcome divergence_identities() {
  ProblemParams pp;
  pp.mesh.background_count = 20000;
  pp.mesh.grade_depth = 3;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Configuration c = random_configuration(1, seed);
    const Problem P = Problem::build(c, pp);
    const auto pairs = P.solve(1);
    const MatchingField nu = matching_field(c, random_tangent(c, seed + 500));
    worst = std::max(worst, divergence_identity(P, pairs[0].vector, pairs[0].value, nu).residual);
  }
  const auto& a = antipodal();
  const Configuration& c = a.problem.config();
  // Moving both points makes both sides vanish by symmetry, so only the
  // first point moves.
  std::vector<Vec3> one(c.size(), Vec3::Zero());
  one[0] = merge_direction(c).v[0];
  const MatchingField nu = matching_field(c, make_tangent(c, one));
  const IdentityCheck pi =
      pair_identity(a.problem, a.pairs[0].vector, a.pairs[5].vector, a.pairs[0].value, a.pairs[5].value, nu);
  return {worst <= kDivergenceTol && pi.residual <= kPairTol,
          fmt("single identity worst residual %.2f%% over 5 pairs; paired identity residual %.2f%%", 100 * worst,
              100 * pi.residual)};
}

Outcome nodal_theorems() {
  ProblemParams pp;
  pp.mesh.background_count = 10000;
  pp.mesh.grade_depth = 3;
  int census_ok = 0, resolved = 0, euler_ok = 0, cycles = 0;
  std::string failures;
  for (int i = 0; i < kNodalConfigs; ++i) {
    const int n = 1 + i % 3;
    const std::uint64_t seed = 100 + i;
    const Configuration c = random_configuration(n, seed);
    const Problem P = Problem::build(c, pp);
    const auto pairs = P.solve(1);
    try {
      const ZeroGraph g = extract_zero_graph(P, pairs[0].vector);
      ++resolved;
      const auto census = vanishing_census(g, c.size(), 1);
      if (census.pass) ++census_ok;
      else failures += fmt(" seed%llu", static_cast<unsigned long long>(seed));
      if (g.cycles) ++cycles;
      if (euler_characteristic(g, c.size()).agree()) ++euler_ok;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnresolvedNode) throw;
      failures += fmt(" seed%llu:unresolved", static_cast<unsigned long long>(seed));
    }
  }
  const bool ok = resolved == kNodalConfigs && census_ok == resolved && cycles == 0 && euler_ok == resolved;
  return {ok, fmt("%d/%d resolved, census %d/%d, graphs with cycles %d, closed form %d/%d%s", resolved, kNodalConfigs,
                  census_ok, resolved, cycles, euler_ok, resolved, failures.c_str())};
}

Outcome criticality() {
  const auto& a = antipodal();
  const std::vector<EigenPair> m1(a.pairs.begin(), a.pairs.begin() + 2), m2(a.pairs.begin() + 2, a.pairs.begin() + 6);
  const CriticalCombination c1 = critical_combination(a.problem, m1);
  const CriticalCombination c2 = critical_combination(a.problem, m2);
  const double r1 = c1.minimum / c1.maximum, r2 = c2.minimum / c2.maximum;
  return {r2 <= kCriticalZero && r1 >= kCriticalAway,
          fmt("relative minimum %.2e on the 3.75 cluster, %.3f on the 0.75 cluster", r2, r1)};
}

Outcome packing() {
  const auto rows = packing_eigenvalue_study({0.7, 0.5, 0.35});
  bool increasing = true;
  double lo = rows[0].ER2, hi = rows[0].ER2;
  std::string s;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i && rows[i].E <= rows[i - 1].E) increasing = false;
    lo = std::min(lo, rows[i].ER2);
    hi = std::max(hi, rows[i].ER2);
    s += fmt("%sR=%.2f E=%.3f", i ? ", " : "", rows[i].R, rows[i].E);
  }
  return {increasing && hi <= kPackingBand * lo, s + fmt("; E R^2 in [%.3f, %.3f]", lo, hi)};
}

Outcome coalescence() {
  const Configuration base = c2_configuration(kPi);
  const std::vector<double> seps{0.2, 0.1, 0.05, 0.02};
  const CoalesceStudy st = coalesce_study(base, seps);
  bool above = true;
  std::string s;
  for (const auto& r : st.rows) {
    if (!(r.E > 0.75)) above = false;
    s += fmt("%.6f ", r.E);
  }
  const double gap = std::abs(st.rows.back().E - 0.75) / 0.75;
  const PairInsertion pi = pair_insertion_identity(base, 0.05);
  const bool identity = pi.identity.residual <= kPairIdentityTol && pi.identity.signs_match;
  return {above && gap <= kCoalesceGap && identity,
          fmt("E = %sgap at 0.02 %.3f%%; pair identity %.4f vs %.4f (%.1f%%, signs %s)", s.c_str(), 100 * gap,
              pi.identity.lhs, pi.identity.rhs, 100 * pi.identity.residual, pi.identity.signs_match ? "agree" : "differ")};
}

Outcome lift() {
  const double mu = homogeneity_exponent(0.75);
  const Json r = run_study("lift", {{"points", configuration_json(c2_configuration(kPi))["points"]}, {"samples", 0}});
  double worst = 0;
  for (const auto& h : r["homogeneity"]) worst = std::max(worst, std::abs(h["ratio"].get<double>() / h["expected"].get<double>() - 1));
  const double d_order = r["residuals"]["d_order"], delta_order = r["residuals"]["delta_order"];
  const double sens = r["sensitivity"];
  const bool ok = mu == 1.5 && worst <= kHomogeneityTol && d_order >= kOrderMin && delta_order >= kOrderMin &&
                  sens >= kSensitivityMin;
  return {ok, fmt("mu(0.75) = %.15g, homogeneity error %.1e, orders d %.2f / delta %.2f, corruption factor %.1f", mu,
                  worst, d_order, delta_order, sens)};
}

Outcome lemma_identities() {
  const auto& a = antipodal();
  const auto& ops = a.problem.ops();
  const SignCochain plus = trivial_signs(a.problem.mesh());
  AssemblyOptions ao;
  const TwistedOperators plain = assemble(a.problem.mesh(), plus, ao);
  double worst = 0;
  bool stripped = true;
  Eigen::VectorXd logs(10), logl(10);
  for (int i = 0; i < 10; ++i) {
    const auto& p = a.pairs[i];
    const double e = energy(p.vector, ops);
    worst = std::max(worst, std::abs(e - p.value) / p.value);
    // |f| as an untwisted function on the same vertices
    const Vector absf = plain.to_free(a.problem.vertex_values(p.vector).cwiseAbs());
    if (energy(absf, plain) > e * (1 + 1e-12)) stripped = false;
    const double sup = p.vector.cwiseAbs().maxCoeff() / std::sqrt(mass_norm2(p.vector, ops));
    logs(i) = std::log(sup);
    logl(i) = std::log(p.value + 1);
  }
  const double mx = logl.mean(), my = logs.mean();
  const double slope = ((logl.array() - mx) * (logs.array() - my)).sum() / (logl.array() - mx).square().sum();
  return {worst <= kRayleighTol && stripped && slope <= kSupSlopeMax,
          fmt("worst |f^T S f - lambda| / lambda %.1e, |f| energy below f^T S f: %s, sup-norm log-log slope %.3f",
              worst, stripped ? "yes" : "no", slope)};
}

std::set<int> parse_set(const char* s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expect_fail;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string a = argv[i];
    if (a == "--only") only = parse_set(argv[i + 1]);
    else if (a == "--expect-fail") expect_fail = parse_set(argv[i + 1]);
    else {
      std::fprintf(stderr, "unknown argument %s\n", argv[i]);
      return 100;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"antipodal ground cluster", ground_cluster},
      {"antipodal second cluster", second_cluster},
      {"untwisted control", untwisted_control},
      {"two-point spectral flow", spectral_flow},
      {"gradient formula vs finite differences", gradient_formula},
      {"degenerate splitting", degenerate_splitting},
      {"divergence identities", divergence_identities},
      {"nodal census and Euler characteristic", nodal_theorems},
      {"criticality detection", criticality},
      {"packing lower bound", packing},
      {"coalescence continuity and pair identity", coalescence},
      {"homogeneous lift", lift},
      {"energy identity and sup-norm growth", lemma_identities},
  };
  int unexpected = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known = expect_fail.count(id) > 0;
    std::printf("%s %2d %s: %s [%.1f s]%s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str(),
                seconds_since(t0), !o.pass && known ? " (known failure)" : "");
    std::fflush(stdout);
    if (!o.pass && !known) ++unexpected;
  }
  return unexpected;
}
