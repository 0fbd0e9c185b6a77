#include "z2eig/experiments.hpp"

#include "z2eig/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <random>

namespace z2eig {

std::vector<SpectrumLevel> c2_antipodal_spectrum(int m_max) {
  if (m_max < 1) throw Error(ErrorCode::InvalidInput, "m_max must be at least 1");
  std::vector<SpectrumLevel> out;
  for (int m = 1; m <= m_max; ++m) out.push_back({m * m - 0.25, 2 * m});
  return out;
}

std::vector<SpectrumLevel> c2_coincident_spectrum(int m_max) {
  if (m_max < 0) throw Error(ErrorCode::InvalidInput, "m_max must be non-negative");
  std::vector<SpectrumLevel> out;
  for (int m = 0; m <= m_max; ++m) out.push_back({static_cast<double>(m * (m + 1)), 2 * m + 1});
  return out;
}

Configuration c2_configuration(double separation) {
  if (!(separation > 0.0 && separation <= kPi)) throw Error(ErrorCode::InvalidInput, "separation must lie in (0, pi]");
  const double h = 0.5 * separation;
  return make_configuration(std::vector<Vec3>{Vec3(std::sin(h), 0.0, std::cos(h)), Vec3(-std::sin(h), 0.0, std::cos(h))});
}

std::vector<double> c2_separations(int steps, double last) {
  if (steps < 2) throw Error(ErrorCode::InvalidInput, "need at least two steps");
  if (!(last > 0.0 && last < kPi)) throw Error(ErrorCode::InvalidInput, "last separation must lie in (0, pi)");
  std::vector<double> s(steps);
  for (int i = 0; i < steps; ++i) s[i] = kPi * std::pow(last / kPi, static_cast<double>(i) / (steps - 1));
  s.back() = last;
  return s;
}

namespace {

const Vec3 kViaZ(0.0, 0.0, 1.0);
const Vec3 kViaX(1.0, 0.0, 0.0);

double mass_dot(const Vector& a, const Vector& b, const TwistedOperators& ops) {
  return a.dot(ops.mass.cwiseProduct(b));
}

// Tangent moving both C2 points towards +z.
ConfigTangent c2_merge_direction(const Configuration& c) {
  std::vector<Vec3> v;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Vec3 p = c[k];
    Vec3 t = Vec3(0.0, 0.0, 1.0) - p.z() * p;
    if (t.norm() > 0.0) t.normalize();
    v.push_back(t);
  }
  return make_tangent(c, v);
}

Problem build_or_rethrow(const Configuration& c, const ProblemParams& params) {
  try {
    return Problem::build(c, params);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MeshDegenerate || e.code() == ErrorCode::MatchingFailed ||
        e.code() == ErrorCode::HolonomyViolation)
      throw Error(ErrorCode::MeshRebuildFailed, e.what());
    throw;
  }
}

}  // namespace

BranchCurves spectral_flow_c2(const std::vector<double>& separations, const SpectralFlowParams& params) {
  if (separations.empty()) throw Error(ErrorCode::InvalidInput, "no separations");
  if (params.branches < 1) throw Error(ErrorCode::InvalidInput, "need at least one branch");
  for (std::size_t i = 1; i < separations.size(); ++i)
    if (!(separations[i] < separations[i - 1])) throw Error(ErrorCode::InvalidInput, "separations must decrease");
  const int B = params.branches;
  BranchCurves out;
  out.separations = separations;
  out.values.resize(static_cast<Eigen::Index>(separations.size()), B);

  std::vector<Vector> tracked;
  std::unique_ptr<Problem> prev;
  GeometricCut prev_cut;
  for (std::size_t i = 0; i < separations.size(); ++i) {
    auto P = std::make_unique<Problem>(Problem::build(c2_configuration(separations[i]), params.problem));
    auto eig = P->solve(B + 2, params.solver);
    const GeometricCut gcut = geometric_cut(P->config(), P->cut(), kViaZ);
    out.sorted.push_back(values_of(eig));
    if (i == 0) {
      // split degenerate levels along the merge direction
      const auto clusters = cluster_multiplicities_relative(values_of(eig));
      const ConfigTangent nu = c2_merge_direction(P->config());
      for (const auto& c : clusters) {
        if (c.multiplicity() < 2) continue;
        std::vector<EigenPair> members;
        for (int m : c.members) members.push_back(eig[m]);
        try {
          const SplittingForm sf = splitting_form(*P, members, nu);
          for (int a = 0; a < static_cast<int>(members.size()); ++a) {
            Vector v = Vector::Zero(members[0].vector.size());
            for (int b = 0; b < static_cast<int>(members.size()); ++b) v += sf.vectors(b, a) * members[b].vector;
            eig[c.members[a]].vector = v / std::sqrt(mass_norm2(v, P->ops()));
            eig[c.members[a]].value = members[a].value;
          }
        } catch (const Error&) {
          out.swaps.push_back("step 0: splitting form unavailable for cluster at " + std::to_string(c.value));
        }
      }
      for (int b = 0; b < B; ++b) {
        tracked.push_back(eig[b].vector);
        out.values(0, b) = eig[b].value;
      }
      out.step_overlap.push_back(1.0);
    } else {
      const int K = static_cast<int>(eig.size());
      Eigen::MatrixXd O(B, K);
      for (int b = 0; b < B; ++b) {
        Vector t = transfer(*prev, prev_cut, tracked[b], *P, gcut);
        const double nrm = std::sqrt(mass_norm2(t, P->ops()));
        for (int k = 0; k < K; ++k) O(b, k) = nrm > 0.0 ? std::abs(mass_dot(t, eig[k].vector, P->ops())) / nrm : 0.0;
      }
      std::vector<char> row_done(B, 0), col_done(K, 0);
      double weakest = 1.0;
      for (int it = 0; it < B; ++it) {
        double best = -1.0;
        int bb = -1, kk = -1;
        for (int b = 0; b < B; ++b)
          for (int k = 0; k < K; ++k)
            if (!row_done[b] && !col_done[k] && O(b, k) > best) best = O(b, k), bb = b, kk = k;
        row_done[bb] = col_done[kk] = 1;
        weakest = std::min(weakest, best);
        if (best < params.min_overlap)
          out.swaps.push_back("step " + std::to_string(i) + " branch " + std::to_string(bb) + ": overlap " +
                              std::to_string(best));
        Vector v = eig[kk].vector;
        const Vector t = transfer(*prev, prev_cut, tracked[bb], *P, gcut);
        if (mass_dot(t, v, P->ops()) < 0.0) v = -v;
        out.values(static_cast<Eigen::Index>(i), bb) = eig[kk].value;
        tracked[bb] = v;
      }
      out.step_overlap.push_back(weakest);
    }
    prev = std::move(P);
    prev_cut = gcut;
  }
  return out;
}

// ---------------------------------------------------------------------------

const char* termination_name(FlowTermination t) {
  switch (t) {
    case FlowTermination::SmallGradient: return "SmallGradient";
    case FlowTermination::DegenerateCluster: return "DegenerateCluster";
    case FlowTermination::MaxIterations: return "MaxIterations";
    case FlowTermination::LineSearchFailed: return "LineSearchFailed";
  }
  return "?";
}

FlowTrajectory flow_ascent(const Configuration& start, const AscentParams& params) {
  if (!(params.step > 0.0) || params.max_iters < 1) throw Error(ErrorCode::InvalidInput, "invalid ascent parameters");
  FlowTrajectory traj;
  Configuration config = start;
  auto problem = std::make_unique<Problem>(build_or_rethrow(config, params.problem));
  auto eig = problem->solve(3, params.solver);
  double accepted_step = 0.0;
  for (int iter = 0;; ++iter) {
    FlowStep st;
    st.config = config;
    st.spectrum = values_of(eig);
    st.step = accepted_step;
    const double l0 = eig[0].value;
    st.multiplicity = 1;
    for (std::size_t j = 1; j < eig.size(); ++j)
      if (eig[j].value - l0 < params.mult_tol * l0) ++st.multiplicity;
    if (st.multiplicity > 1) {
      traj.steps.push_back(st);
      traj.reason = FlowTermination::DegenerateCluster;
      return traj;
    }
    const GradientCovector g = eigenvalue_gradient(classify_vanishing(*problem, eig[0].vector, params.fit).data);
    st.gradient_norm = g.norm();
    traj.steps.push_back(st);
    if (st.gradient_norm < params.grad_tol) {
      traj.reason = FlowTermination::SmallGradient;
      return traj;
    }
    if (iter + 1 >= params.max_iters) {
      traj.reason = FlowTermination::MaxIterations;
      return traj;
    }
    auto vecs = g.vectors();
    double vmax = 0.0;
    for (const auto& v : vecs) vmax = std::max(vmax, v.norm());
    for (auto& v : vecs) v /= vmax;
    const ConfigTangent dir = make_tangent(config, vecs);
    double alpha = params.step;
    bool ok = false;
    for (int h = 0; h <= params.max_halvings; ++h, alpha *= 0.5) {
      Configuration trial = displace(config, dir, alpha);
      auto tp = std::make_unique<Problem>(build_or_rethrow(trial, params.problem));
      auto te = tp->solve(3, params.solver);
      if (te[0].value >= l0 - params.line_search_tol) {
        config = trial;
        problem = std::move(tp);
        eig = std::move(te);
        accepted_step = alpha;
        ok = true;
        break;
      }
    }
    if (!ok) {
      traj.reason = FlowTermination::LineSearchFailed;
      return traj;
    }
  }
}

// ---------------------------------------------------------------------------

PackingConfig packing_config(double R, int candidates) {
  if (!(R >= 0.1 && R <= 1.5)) throw Error(ErrorCode::InvalidInput, "R must lie in [0.1, 1.5]");
  if (candidates <= 0) candidates = std::max(4000, static_cast<int>(400.0 / (R * R)));
  PackingConfig pc;
  pc.R = R;
  pc.offset = R / 8.0;
  for (const Vec3& x : fibonacci_points(candidates)) {
    bool far = true;
    for (const Vec3& q : pc.centers)
      if (geodesic_distance(q, x) < R) {
        far = false;
        break;
      }
    if (far) pc.centers.push_back(x);
  }
  std::vector<Vec3> pts;
  for (const Vec3& q : pc.centers) {
    const Vec3 w = tangent_frame(q).first;
    pts.push_back(exp_map(q, -pc.offset * w));
    pts.push_back(exp_map(q, pc.offset * w));
  }
  pc.config = make_configuration(pts, 1e-10);
  const double c = pc.centers.size() * R * R;
  pc.count_constant = std::max(c, 1.0 / c);
  return pc;
}

std::vector<PackingRow> packing_eigenvalue_study(const std::vector<double>& radii, const PackingParams& params,
                                                 bool untwisted_control) {
  std::vector<PackingRow> rows;
  for (double R : radii) {
    const PackingConfig pc = packing_config(R);
    ProblemParams pp;
    pp.mesh.background_count = params.background_count;
    pp.mesh.grade_depth = params.grade_depth;
    pp.mesh.grade_radius = params.grade_radius_factor * R;
    const Problem P = Problem::build(pc.config, pp);
    PackingRow row;
    row.R = R;
    row.points = static_cast<int>(pc.config.size());
    row.E = P.solve(1, params.solver)[0].value;
    row.ER2 = row.E * R * R;
    row.E_over_n = row.E / (row.points / 2);
    row.vertices = static_cast<int>(P.mesh().vertex_count());
    if (untwisted_control) row.untwisted = Problem::untwisted(pc.config, pp).solve(1, params.solver)[0].value;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

double distance_to_arc(const GreatArc& arc, const Vec3& x) {
  const double h = arc.normal.dot(x);
  Vec3 foot = x - h * arc.normal;
  const double fn = foot.norm();
  double d = std::min(geodesic_distance(x, arc.a), geodesic_distance(x, arc.b));
  if (fn < 1e-12) return d;
  foot /= fn;
  double ang = std::atan2(arc.normal.dot(arc.a.cross(foot)), arc.a.dot(foot));
  if (ang < 0.0) ang += 2.0 * kPi;
  if (ang <= arc.length) d = std::min(d, std::asin(std::min(1.0, std::abs(h))));
  return d;
}

}  // namespace

Vec3 insertion_point(const Problem& problem, const Vector& f, const GeometricCut& cut, double clearance) {
  const Vector fv = problem.vertex_values(f);
  int best = -1;
  double bv = -1.0;
  for (int v = 0; v < static_cast<int>(problem.mesh().vertex_count()); ++v) {
    if (std::abs(fv[v]) <= bv) continue;
    const Vec3& x = problem.mesh().vertices()[v];
    bool clear = true;
    for (const auto& arc : cut)
      if (distance_to_arc(arc, x) < clearance) clear = false;
    for (std::size_t k = 0; k < problem.config().size(); ++k)
      if (geodesic_distance(problem.config()[k], x) < clearance) clear = false;
    if (!clear) continue;
    bv = std::abs(fv[v]);
    best = v;
  }
  if (best < 0) throw Error(ErrorCode::InvalidInput, "no vertex clears the cut");
  return problem.mesh().vertices()[best];
}

Configuration insert_pair(const Configuration& base, const Vec3& x, double s, double angle) {
  if (!(s > 0.0 && s < kPi)) throw Error(ErrorCode::InvalidInput, "pair separation must lie in (0, pi)");
  const auto [e1, e2] = tangent_frame(x);
  const Vec3 w = std::cos(angle) * e1 + std::sin(angle) * e2;
  std::vector<Vec3> pts;
  for (std::size_t k = 0; k < base.size(); ++k) pts.push_back(base[k]);
  pts.push_back(exp_map(x, -0.5 * s * w));
  pts.push_back(exp_map(x, 0.5 * s * w));
  return make_configuration(pts, 1e-10);
}

double log_cutoff(const Configuration& config, const Vec3& x, double eps) {
  if (!(eps > 0.0 && 100.0 * eps < 1.0)) throw Error(ErrorCode::InvalidInput, "cutoff needs 0 < 100 eps < 1");
  double d = kPi;
  for (std::size_t k = 0; k < config.size(); ++k) d = std::min(d, geodesic_distance(config[k], x));
  if (d <= 0.0) return 0.0;
  return chi(2.0 * std::log(d) / std::log(100.0 * eps) - 1.0);
}

CoalesceStudy coalesce_study(const Configuration& base, const std::vector<double>& separations,
                             const CoalesceParams& params, const Vec3* x) {
  const Problem Q = Problem::build(base, params.problem);
  const auto eq = Q.solve(2, params.solver);
  const GeometricCut gq = geometric_cut(Q.config(), Q.cut(), kViaX);
  CoalesceStudy study;
  study.E_base = eq[0].value;
  study.x = x ? *x : insertion_point(Q, eq[0].vector, gq);
  const SectionSampler fq(Q, gq, eq[0].vector);
  for (double s : separations) {
    const Configuration c = insert_pair(base, study.x, s, params.orientation);
    const Problem P = Problem::build(c, params.problem);
    CoalesceRow row;
    row.separation = s;
    row.E = P.solve(1, params.solver)[0].value;
    row.gap = (row.E - study.E_base) / study.E_base;
    const GeometricCut gp = geometric_cut(P.config(), P.cut(), kViaX);
    const double eps = params.cutoff_scale * s / 100.0;
    const Vector g = sample_section(P, gp, [&](const Vec3& y) { return log_cutoff(c, y, eps) * fq(y); });
    row.transferred = rayleigh(g, P.ops());
    study.rows.push_back(row);
  }
  return study;
}

PairIdentity pair_identity_check(const Problem& base, const EigenPair& fq, const Problem& with_pair,
                                 const EigenPair& fp, const NodalParams& nodal) {
  const auto& cp = with_pair.config();
  const int N = static_cast<int>(cp.size());
  if (N != static_cast<int>(base.config().size()) + 2) throw Error(ErrorCode::InvalidInput, "with_pair must add exactly two points");
  const int pa = N - 2, pb = N - 1;
  const SphericalMesh& mesh = with_pair.mesh();
  const auto& ops = with_pair.ops();

  const ZeroGraph graph = extract_zero_graph(with_pair, fp.vector, nodal);
  const ZeroEdge* sigma = nullptr;
  for (const auto& e : graph.edges) {
    if (e.from < 0) continue;
    const int a = graph.nodes[e.from].point, b = graph.nodes[e.to].point;
    if ((a == pa && b == pb) || (a == pb && b == pa)) {
      sigma = &e;
      break;
    }
  }
  if (!sigma) throw Error(ErrorCode::NoConnectingArc, "no zero arc joins the inserted points");

  const GeometricCut gq = geometric_cut(base.config(), base.cut(), kViaX);
  const GeometricCut gp = geometric_cut(cp, with_pair.cut(), kViaX);
  GeometricCut pair_arc;
  for (std::size_t k = 0; k < with_pair.cut().paths.size(); ++k) {
    const auto& path = with_pair.cut().paths[k];
    if ((path.point_a == pa && path.point_b == pb) || (path.point_a == pb && path.point_b == pa)) pair_arc.push_back(gp[k]);
  }
  if (pair_arc.empty()) throw Error(ErrorCode::InvalidInput, "the inserted points are not paired by the cut");

  // product f_q f_p in the trivialization flipping only across the pair arc
  const SectionSampler sq(base, gq, fq.vector);
  const auto tp = geometric_gauge(with_pair, gp);
  const Vector fpv = with_pair.vertex_values(fp.vector);
  const int nv = static_cast<int>(mesh.vertex_count());
  std::vector<double> prod(nv, 0.0);
  int root = -1;
  for (int v = 0; v < nv; ++v) {
    if (ops.vertex_to_free[v] < 0) continue;
    prod[v] = sq(mesh.vertices()[v]) * tp[v] * fpv[v];
    if (root < 0 || std::abs(prod[v]) > std::abs(prod[root])) root = v;
  }

  // retrivialize on the complement of Sigma
  std::vector<char> on_sigma(mesh.edges().size(), 0);
  for (int c : sigma->carriers)
    if (c >= 0) on_sigma[c] = 1;
  auto tau = [&](int e) {
    const auto& ed = mesh.edges()[e];
    return crosses(pair_arc, mesh.vertices()[ed.a], mesh.vertices()[ed.b]) ? -1 : 1;
  };
  std::vector<signed char> gauge(nv, 0);
  gauge[root] = prod[root] > 0.0 ? 1 : -1;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& s : mesh.star(v)) {
      if (ops.vertex_to_free[s.vertex] < 0 || on_sigma[s.edge]) continue;
      const signed char want = static_cast<signed char>(gauge[v] * tau(s.edge));
      if (gauge[s.vertex] == 0) {
        gauge[s.vertex] = want;
        queue.push_back(s.vertex);
      } else if (gauge[s.vertex] != want) {
        throw Error(ErrorCode::HolonomyViolation, "product bundle is not trivial off the zero arc");
      }
    }
  }
  std::vector<double> pi(nv, 0.0);
  PairIdentity out;
  for (int v = 0; v < nv; ++v) {
    if (ops.vertex_to_free[v] < 0) continue;
    pi[v] = gauge[v] * prod[v];
    out.overlap += ops.mass[ops.vertex_to_free[v]] * pi[v];
  }
  out.lhs = (fp.value - fq.value) * out.overlap;

  // boundary term from the left of Sigma
  const auto& P = sigma->polyline;
  const auto& C = sigma->carriers;
  double integral = 0.0;
  auto triangles_of = [&](int carrier) {
    std::vector<int> ts;
    if (carrier >= 0) {
      for (int t : mesh.edges()[carrier].tri) ts.push_back(t);
    } else {
      const int v = -carrier - 1;
      for (const auto& s : mesh.star(v))
        for (int t : mesh.edges()[s.edge].tri) ts.push_back(t);
    }
    return ts;
  };
  for (std::size_t k = 0; k + 1 < P.size(); ++k) {
    const auto ta = triangles_of(C[k]), tb = triangles_of(C[k + 1]);
    int tri = -1;
    for (int t : ta)
      if (t >= 0 && std::find(tb.begin(), tb.end(), t) != tb.end()) {
        tri = t;
        break;
      }
    if (tri < 0) continue;
    const Vec3 X = P[k], Y = P[k + 1], d = Y - X;
    const double len = d.norm();
    if (len == 0.0) continue;
    const Vec3 left = (X + Y).normalized().cross(d).normalized();
    const auto& tr = mesh.triangles()[tri];
    const Vec3 &A = mesh.vertices()[tr[0]], &B = mesh.vertices()[tr[1]], &Cc = mesh.vertices()[tr[2]];
    const Vec3 n2 = (B - A).cross(Cc - A);
    const double area = 0.5 * n2.norm();
    const Vec3 nrm = n2.normalized();
    const Vec3* V[3] = {&A, &B, &Cc};
    Vec3 grad = Vec3::Zero();
    for (int j = 0; j < 3; ++j) {
      const int v = tr[j];
      double val = 0.0;
      if (ops.vertex_to_free[v] >= 0) val = left.dot(*V[j] - X) >= 0.0 ? pi[v] : -pi[v];
      grad += val * nrm.cross(*V[(j + 2) % 3] - *V[(j + 1) % 3]) / (2.0 * area);
    }
    Vec3 toward = -(left - left.dot(nrm) * nrm);
    toward.normalize();
    integral += grad.dot(toward) * len;
    ++out.arc_segments;
  }
  out.rhs = -2.0 * integral;
  const double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.residual = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
  out.signs_match = (out.lhs > 0.0) == (out.rhs > 0.0);
  return out;
}

PairInsertion pair_insertion_identity(const Configuration& base, double s, const CoalesceParams& params,
                                      int candidates, const NodalParams& nodal) {
  if (candidates < 1) throw Error(ErrorCode::InvalidInput, "candidates must be positive");
  const Problem Q = Problem::build(base, params.problem);
  const auto eq = Q.solve(2, params.solver);
  PairInsertion out;
  out.E_q = eq[0].value;
  out.x = insertion_point(Q, eq[0].vector, geometric_cut(Q.config(), Q.cut(), kViaX));
  const Problem P = Problem::build(insert_pair(base, out.x, s, params.orientation), params.problem);
  const auto ep = P.solve(candidates, params.solver);
  for (int k = 0; k < static_cast<int>(ep.size()); ++k) {
    PairIdentity id;
    try {
      id = pair_identity_check(Q, eq[0], P, ep[k], nodal);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoConnectingArc || e.code() == ErrorCode::UnresolvedNode ||
          e.code() == ErrorCode::HolonomyViolation)
        continue;
      throw;
    }
    if (out.index < 0 || std::abs(id.overlap) > std::abs(out.identity.overlap)) {
      out.index = k;
      out.E_p = ep[k].value;
      out.identity = id;
    }
  }
  if (out.index < 0) throw Error(ErrorCode::NoConnectingArc, "no low eigensection has a zero arc joining the pair");
  return out;
}

// ---------------------------------------------------------------------------

Configuration random_configuration(int pairs, std::uint64_t seed, double min_separation) {
  if (pairs < 1) throw Error(ErrorCode::InvalidInput, "need at least one pair");
  if (!(min_separation >= 0.0 && min_separation < 2.0)) throw Error(ErrorCode::InvalidInput, "min_separation out of range");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Vec3> pts;
    for (int k = 0; k < 2 * pairs; ++k) pts.push_back(Vec3(g(rng), g(rng), g(rng)).normalized());
    bool ok = true;
    for (std::size_t i = 0; i < pts.size() && ok; ++i)
      for (std::size_t j = i + 1; j < pts.size() && ok; ++j)
        if (geodesic_distance(pts[i], pts[j]) < min_separation) ok = false;
    if (ok) return make_configuration(pts, 1e-10);
  }
  throw Error(ErrorCode::InvalidInput, "no configuration with the requested separation found");
}

ConfigTangent random_tangent(const Configuration& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec3> v;
  for (std::size_t k = 0; k < config.size(); ++k) {
    const Vec3 r(g(rng), g(rng), g(rng));
    v.push_back(r - r.dot(config[k]) * config[k]);
  }
  ConfigTangent t{v};
  const double n = t.norm();
  for (auto& x : t.v) x /= n;
  return t;
}

GradientCheck gradient_check(const Problem& problem, const ConfigTangent& nu, double h, const SolverOptions& solver,
                             const FitParams& fit) {
  const auto pairs = problem.solve(3, solver);
  GradientCheck out;
  out.eigenvalue = pairs[0].value;
  out.formula = eigenvalue_gradient(problem, pairs, 0, fit).pair(nu);
  const auto fd = fd_eigenvalue_slope(problem, pairs, 0, nu, h, 0.7, solver);
  out.fd = fd.slope;
  out.overlap = fd.overlap;
  out.rel_error = std::abs(out.formula - out.fd) / std::max(std::abs(out.fd), 1e-300);
  return out;
}

// ---------------------------------------------------------------------------

Configuration platonic_configuration(const std::string& name) {
  std::vector<Vec3> v;
  if (name == "tetrahedron") {
    v = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  } else if (name == "cube") {
    for (int i = 0; i < 8; ++i) v.emplace_back(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1);
  } else if (name == "icosahedron") {
    const double g = 0.5 * (1.0 + std::sqrt(5.0));
    for (int s1 : {-1, 1})
      for (int s2 : {-1, 1}) {
        v.emplace_back(0.0, s1, s2 * g);
        v.emplace_back(s1, s2 * g, 0.0);
        v.emplace_back(s2 * g, 0.0, s1);
      }
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown solid '" + name + "'");
  }
  for (auto& x : v) x.normalize();
  return make_configuration(v);
}

PlatonicRecord platonic_record(const std::string& name, const ProblemParams& params, int eigenvalues,
                               const FitParams& fit) {
  const Problem P = Problem::build(platonic_configuration(name), params);
  const auto eig = P.solve(eigenvalues);
  PlatonicRecord rec;
  rec.name = name;
  rec.points = static_cast<int>(P.config().size());
  auto clusters = cluster_multiplicities_relative(values_of(eig));
  if (clusters.size() > 1) clusters.pop_back();  // the last cluster may be cut off
  for (const auto& c : clusters) {
    std::vector<EigenPair> members;
    for (int m : c.members) members.push_back(eig[m]);
    rec.cluster_values.push_back(c.value);
    rec.multiplicities.push_back(c.multiplicity());
    try {
      const auto cc = critical_combination(P, members, fit);
      rec.critical_minimum.push_back(cc.maximum > 0.0 ? cc.minimum / cc.maximum : 0.0);
    } catch (const Error&) {
      rec.critical_minimum.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return rec;
}

}  // namespace z2eig
