#include "z2eig/variation.hpp"

#include "z2eig/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace z2eig {

double GradientCovector::pair(const ConfigTangent& nu) const {
  if (nu.v.size() != components.size()) throw Error(ErrorCode::InvalidInput, "tangent size does not match covector");
  double s = 0.0;
  for (std::size_t k = 0; k < components.size(); ++k)
    s += components[k].x() * nu.v[k].dot(e1[k]) + components[k].y() * nu.v[k].dot(e2[k]);
  return s;
}

std::vector<Vec3> GradientCovector::vectors() const {
  std::vector<Vec3> out;
  for (std::size_t k = 0; k < components.size(); ++k) out.push_back(components[k].x() * e1[k] + components[k].y() * e2[k]);
  return out;
}

double GradientCovector::norm() const {
  double s = 0.0;
  for (const auto& c : components) s += c.squaredNorm();
  return std::sqrt(s);
}

GradientCovector eigenvalue_gradient(const std::vector<BranchData>& branch) {
  GradientCovector g;
  for (const auto& b : branch) {
    g.e1.push_back(b.e1);
    g.e2.push_back(b.e2);
    if (b.n != 0) {
      g.components.emplace_back(0.0, 0.0);
      continue;
    }
    // Re(a^2 (x + i y)) = Re(a^2) x - Im(a^2) y
    const Complex a2 = b.a * b.a;
    g.components.emplace_back(0.5 * kPi * a2.real(), -0.5 * kPi * a2.imag());
  }
  return g;
}

GradientCovector eigenvalue_gradient(const Problem& problem, const std::vector<EigenPair>& pairs, int index,
                                     const FitParams& fit, double rel_gap) {
  if (index < 0 || index >= static_cast<int>(pairs.size())) throw Error(ErrorCode::InvalidInput, "index out of range");
  const double lam = pairs[index].value, tol = rel_gap * std::max(1.0, lam);
  for (int j = 0; j < static_cast<int>(pairs.size()); ++j)
    if (j != index && std::abs(pairs[j].value - lam) < tol)
      throw Error(ErrorCode::DegenerateCluster, "eigenvalue " + std::to_string(lam) + " is not simple");
  if (index + 1 == static_cast<int>(pairs.size()))
    throw Error(ErrorCode::InvalidInput, "solve at least one eigenvalue beyond the requested one");
  return eigenvalue_gradient(classify_vanishing(problem, pairs[index].vector, fit).data);
}

SplittingForm splitting_form(const Problem& problem, const std::vector<EigenPair>& cluster, const ConfigTangent& nu,
                             const FitParams& fit) {
  const int N = static_cast<int>(cluster.size());
  if (N == 0) throw Error(ErrorCode::InvalidInput, "empty cluster");
  if (nu.v.size() != problem.config().size()) throw Error(ErrorCode::InvalidInput, "tangent size mismatch");
  SplittingForm sf;
  sf.matrix = Eigen::MatrixXd::Zero(N, N);
  try {
    for (int k = 0; k < static_cast<int>(problem.config().size()); ++k) {
      if (nu.v[k].squaredNorm() == 0.0) continue;
      LocalExpansion le(problem, k, fit);
      const Complex dz = le.chart().dz(nu.v[k]);
      std::vector<Complex> c(N);
      for (int i = 0; i < N; ++i) c[i] = le.linear_coefficient(cluster[i].vector);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) sf.matrix(i, j) += 0.5 * kPi * (c[i] * c[j] * dz).real();
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::ExtractionFailed, e.what());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sf.matrix + sf.matrix.transpose()));
  sf.eta = es.eigenvalues();
  sf.vectors = es.eigenvectors();
  return sf;
}

namespace {

// Values of f at the corners of triangle t in one local trivialization.
Vec3 local_values(const Problem& problem, const Vector& fv, int t) {
  const auto& mesh = problem.mesh();
  const auto& tr = mesh.triangles()[t];
  const auto& free = problem.ops().vertex_to_free;
  int ref = -1;
  for (int k = 0; k < 3; ++k)
    if (free[tr[k]] >= 0) {
      ref = k;
      break;
    }
  Vec3 v = Vec3::Zero();
  if (ref < 0) return v;
  v[ref] = fv[tr[ref]];
  for (int k = 0; k < 3; ++k) {
    if (k == ref || free[tr[k]] < 0) continue;
    const int e = mesh.find_edge(tr[ref], tr[k]);
    v[k] = problem.signs()[e] * fv[tr[k]];
  }
  return v;
}

struct TriangleFrame {
  Vec3 grad[3];  // gradients of the barycentric functions
  Mat3 plane;    // projector onto the triangle plane
  double area = 0.0;
  Vec3 centroid;
};

TriangleFrame triangle_frame(const SphericalMesh& mesh, int t) {
  const auto& tr = mesh.triangles()[t];
  const Vec3 &a = mesh.vertices()[tr[0]], &b = mesh.vertices()[tr[1]], &c = mesh.vertices()[tr[2]];
  TriangleFrame fr;
  const Vec3 n2 = (b - a).cross(c - a);
  fr.area = 0.5 * n2.norm();
  const Vec3 n = n2.normalized();
  const Vec3* P[3] = {&a, &b, &c};
  for (int k = 0; k < 3; ++k) {
    const Vec3 edge = *P[(k + 2) % 3] - *P[(k + 1) % 3];
    fr.grad[k] = n.cross(edge) / (2.0 * fr.area);
  }
  fr.plane = Mat3::Identity() - n * n.transpose();
  fr.centroid = ((a + b + c) / 3.0).normalized();
  return fr;
}

Vec3 gradient(const TriangleFrame& fr, const Vec3& vals) {
  return vals[0] * fr.grad[0] + vals[1] * fr.grad[1] + vals[2] * fr.grad[2];
}

// -(pi/2) sum_p Re(c0(f) c0(f') dz(nu(p)))
double boundary_term(const Problem& problem, const Vector& f, const Vector& f2, const VectorField& nu,
                     const FitParams& fit) {
  double s = 0.0;
  for (int k = 0; k < static_cast<int>(problem.config().size()); ++k) {
    const Vec3 v = nu.value(problem.config()[k]);
    if (v.squaredNorm() == 0.0) continue;
    LocalExpansion le(problem, k, fit);
    const Complex a = le.linear_coefficient(f), a2 = le.linear_coefficient(f2);
    s += -0.5 * kPi * (a * a2 * le.chart().dz(v)).real();
  }
  return s;
}

double relative(double lhs, double rhs) {
  const double d = std::max(std::abs(lhs), std::abs(rhs));
  return d > 0.0 ? std::abs(lhs - rhs) / d : 0.0;
}

}  // namespace

std::vector<Mat3> stress_energy(const Problem& problem, const Vector& f, double lambda) {
  const auto& mesh = problem.mesh();
  const Vector fv = problem.vertex_values(f);
  std::vector<Mat3> out(mesh.triangle_count());
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const TriangleFrame fr = triangle_frame(mesh, t);
    const Vec3 vals = local_values(problem, fv, t);
    const Vec3 df = gradient(fr, vals);
    const double fc = vals.mean();
    out[t] = df * df.transpose() - 0.5 * (df.squaredNorm() - lambda * fc * fc) * fr.plane;
  }
  return out;
}

IdentityCheck divergence_identity(const Problem& problem, const Vector& f, double lambda, const VectorField& nu,
                                  const FitParams& fit) {
  const auto& mesh = problem.mesh();
  const auto T = stress_energy(problem, f, lambda);
  IdentityCheck ic;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const TriangleFrame fr = triangle_frame(mesh, t);
    const Mat3 J = nu.covariant_derivative(fr.centroid);
    if (J.isZero(0.0)) continue;
    ic.lhs += fr.area * (J * T[t]).trace();
    ic.scale += fr.area * J.norm() * T[t].norm();
  }
  try {
    ic.rhs = 0.5 * boundary_term(problem, f, f, nu, fit);
  } catch (const Error& e) {
    throw Error(ErrorCode::ExtractionFailed, e.what());
  }
  ic.residual = relative(ic.lhs, ic.rhs);
  return ic;
}

IdentityCheck pair_identity(const Problem& problem, const Vector& f, const Vector& f2, double lambda,
                            double lambda2, const VectorField& nu, double middle_sign, const FitParams& fit) {
  const auto& mesh = problem.mesh();
  const Vector fv = problem.vertex_values(f), gv = problem.vertex_values(f2);
  IdentityCheck ic;
  double bulk = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const TriangleFrame fr = triangle_frame(mesh, t);
    const Mat3 J = nu.covariant_derivative(fr.centroid);
    const Vec3 v = nu.value(fr.centroid);
    if (J.isZero(0.0) && v.isZero(0.0)) continue;
    const Vec3 a = local_values(problem, fv, t), b = local_values(problem, gv, t);
    const Vec3 da = gradient(fr, a), db = gradient(fr, b);
    const double fa = a.mean(), fb = b.mean();
    const Mat3 S = da * db.transpose() + db * da.transpose() -
                   (da.dot(db) - 0.5 * (lambda + lambda2) * fa * fb) * fr.plane;
    bulk += fr.area * (J * S).trace();
    ic.middle += fr.area * v.dot(fa * db - fb * da);
    ic.scale += fr.area * J.norm() * S.norm();
  }
  ic.lhs = bulk + middle_sign * 0.5 * (lambda2 - lambda) * ic.middle;
  try {
    ic.rhs = boundary_term(problem, f, f2, nu, fit);
  } catch (const Error& e) {
    throw Error(ErrorCode::ExtractionFailed, e.what());
  }
  ic.residual = relative(ic.lhs, ic.rhs);
  return ic;
}

namespace {

// Index of the eigenvector with the largest |<u, M g>| and that overlap.
std::pair<int, double> best_match(const Vector& u, const std::vector<EigenPair>& pairs, const Vector& mass,
                                  const std::vector<char>& taken) {
  int best = -1;
  double ov = -1.0;
  for (int j = 0; j < static_cast<int>(pairs.size()); ++j) {
    if (taken[j]) continue;
    const double o = std::abs(u.dot(mass.cwiseProduct(pairs[j].vector)));
    if (o > ov) ov = o, best = j;
  }
  return {best, ov};
}

void check_step(double h) {
  if (!(h >= 1e-4 && h <= 1e-2)) throw Error(ErrorCode::InvalidInput, "finite-difference step must lie in [1e-4, 1e-2]");
}

}  // namespace

SlopeEstimate fd_eigenvalue_slope(const Problem& problem, const std::vector<EigenPair>& pairs, int branch,
                                  const ConfigTangent& nu, double h, double min_overlap, const SolverOptions& opts) {
  check_step(h);
  if (branch < 0 || branch >= static_cast<int>(pairs.size())) throw Error(ErrorCode::InvalidInput, "branch out of range");
  SlopeEstimate est;
  if (nu.norm() == 0.0) {
    est.plus = est.minus = pairs[branch].value;
    return est;
  }
  const int k = static_cast<int>(pairs.size());
  double vals[2];
  for (int s = 0; s < 2; ++s) {
    const Problem moved = problem.morphed(nu, s == 0 ? h : -h);
    const auto eig = moved.solve(k, opts);
    std::vector<char> taken(eig.size(), 0);
    const auto [j, ov] = best_match(pairs[branch].vector, eig, moved.ops().mass, taken);
    est.overlap = std::min(est.overlap, ov);
    if (ov < min_overlap)
      throw Error(ErrorCode::BranchSwap, "branch overlap " + std::to_string(ov) + " below " + std::to_string(min_overlap));
    vals[s] = eig[j].value;
  }
  est.plus = vals[0];
  est.minus = vals[1];
  est.slope = (est.plus - est.minus) / (2.0 * h);
  return est;
}

ClusterSlopes fd_cluster_slopes(const Problem& problem, const std::vector<EigenPair>& cluster,
                                const Eigen::MatrixXd& directions, const ConfigTangent& nu, double h,
                                int solve_count, double min_overlap, const SolverOptions& opts) {
  check_step(h);
  const int N = static_cast<int>(cluster.size());
  if (directions.rows() != N) throw Error(ErrorCode::InvalidInput, "direction matrix must have one row per member");
  const int D = static_cast<int>(directions.cols());
  std::vector<Vector> tracked(D);
  Eigen::VectorXd base(D);
  for (int d = 0; d < D; ++d) {
    tracked[d] = Vector::Zero(cluster[0].vector.size());
    double lam = 0.0;
    for (int i = 0; i < N; ++i) {
      tracked[d] += directions(i, d) * cluster[i].vector;
      lam += directions(i, d) * directions(i, d) * cluster[i].value;
    }
    tracked[d] /= std::sqrt(mass_norm2(tracked[d], problem.ops()));
    base[d] = lam / directions.col(d).squaredNorm();
  }
  ClusterSlopes out;
  Eigen::VectorXd val[2];
  for (int s = 0; s < 2; ++s) {
    const Problem moved = problem.morphed(nu, s == 0 ? h : -h);
    const auto eig = moved.solve(solve_count, opts);
    std::vector<char> taken(eig.size(), 0);
    val[s].resize(D);
    for (int d = 0; d < D; ++d) {
      const auto [j, ov] = best_match(tracked[d], eig, moved.ops().mass, taken);
      out.overlap = std::min(out.overlap, ov);
      if (ov < min_overlap)
        throw Error(ErrorCode::BranchSwap, "cluster overlap " + std::to_string(ov) + " below " + std::to_string(min_overlap));
      taken[j] = 1;
      val[s][d] = eig[j].value;
    }
  }
  out.central = (val[0] - val[1]) / (2.0 * h);
  out.forward = (val[0] - base) / h;
  out.backward = (base - val[1]) / h;
  return out;
}

}  // namespace z2eig
