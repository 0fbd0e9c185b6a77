#include "z2eig/eigensolver.hpp"

#include "z2eig/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace z2eig {

using Eigen::MatrixXd;

double residual(const TwistedOperators& ops, const Vector& f, double lambda) {
  const Vector mf = ops.mass.cwiseProduct(f);
  const double d = mf.norm();
  if (!(d > 0.0)) throw Error(ErrorCode::ZeroSection, "residual of a zero section");
  return (ops.stiffness * f - lambda * mf).norm() / d;
}

std::vector<double> values_of(const std::vector<EigenPair>& pairs) {
  std::vector<double> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.value);
  return v;
}

namespace {

MatrixXd random_block(Eigen::Index n, Eigen::Index b, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd x(n, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = g(rng);
  return x;
}

// M-orthonormalizes the columns of Z against the first `used` columns of V and
// among themselves. Dependent columns are replaced by fresh random vectors.
void m_orthonormalize(const MatrixXd& V, Eigen::Index used, MatrixXd& Z, const Vector& mass, std::mt19937_64& rng) {
  for (Eigen::Index j = 0; j < Z.cols(); ++j) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double before = std::sqrt(Z.col(j).dot(mass.cwiseProduct(Z.col(j))));
      for (int pass = 0; pass < 2; ++pass) {
        if (used > 0) {
          const Vector mz = mass.cwiseProduct(Z.col(j));
          Z.col(j) -= V.leftCols(used) * (V.leftCols(used).transpose() * mz);
        }
        for (Eigen::Index i = 0; i < j; ++i) Z.col(j) -= Z.col(i) * Z.col(i).dot(mass.cwiseProduct(Z.col(j)));
      }
      const double after = std::sqrt(Z.col(j).dot(mass.cwiseProduct(Z.col(j))));
      if (after > 1e-10 * before && after > 0.0) {
        Z.col(j) /= after;
        break;
      }
      Z.col(j) = random_block(Z.rows(), 1, rng);
    }
  }
}

void fix_sign(Vector& f) {
  Eigen::Index imax = 0;
  f.cwiseAbs().maxCoeff(&imax);
  if (f[imax] < 0.0) f = -f;
}

std::vector<EigenPair> finish(const TwistedOperators& ops, const MatrixXd& X, const std::vector<double>& lams) {
  std::vector<EigenPair> out;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    EigenPair p;
    p.vector = X.col(j);
    p.vector /= std::sqrt(mass_norm2(p.vector, ops));
    fix_sign(p.vector);
    p.value = lams[j];
    p.residual = residual(ops, p.vector, p.value);
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return out;
}

std::string residual_list(const std::vector<double>& r) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? ", " : "") << r[i];
  os << "]";
  return os.str();
}

// Block Krylov-Schur style iteration on A = (S - shift M)^{-1} M, which is
// self-adjoint for the M inner product. Restarts keep the leading Ritz
// vectors together with their images, so no solve is repeated.
template <class Factor>
std::vector<EigenPair> lanczos(const TwistedOperators& ops, const Factor& factor, int k, const SolverOptions& o,
                               SolveReport& rep) {
  const Eigen::Index n = ops.size();
  std::mt19937_64 rng(o.seed);
  const Eigen::Index b = std::min<Eigen::Index>(n, k + 2);
  const Eigen::Index mmax = std::min<Eigen::Index>(n, std::max<Eigen::Index>(6 * b, b + 60));
  const Eigen::Index keep = std::max<Eigen::Index>(std::min<Eigen::Index>(mmax / 2, mmax - b), b);
  const Vector& mass = ops.mass;

  MatrixXd V(n, mmax), W(n, mmax);
  MatrixXd Z = random_block(n, b, rng);
  m_orthonormalize(V, 0, Z, mass, rng);
  V.leftCols(b) = Z;
  Eigen::Index filled = b, imaged = 0;
  std::vector<double> last_res;
  for (int restart = 0; restart <= o.max_restarts; ++restart) {
    rep.iterations = restart + 1;
    while (imaged < filled) {
      const Eigen::Index start = imaged, width = filled - imaged;
      for (Eigen::Index j = start; j < start + width; ++j) {
        W.col(j) = factor.solve(Vector(mass.cwiseProduct(V.col(j))));
        ++rep.operator_applications;
      }
      imaged = filled;
      if (filled < mmax) {
        const Eigen::Index add = std::min({b, width, mmax - filled});
        Z = W.middleCols(start, add);
        m_orthonormalize(V, filled, Z, mass, rng);
        V.middleCols(filled, add) = Z;
        filled += add;
      }
    }
    const Eigen::Index m = filled;
    MatrixXd T = V.leftCols(m).transpose() * mass.asDiagonal() * W.leftCols(m);
    T = (0.5 * (T + T.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
    const Eigen::Index p = std::min(keep, m);
    MatrixXd Y(m, p);
    Vector theta(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      Y.col(j) = es.eigenvectors().col(m - 1 - j);
      theta[j] = es.eigenvalues()[m - 1 - j];
    }
    MatrixXd X = V.leftCols(m) * Y;
    MatrixXd AX = W.leftCols(m) * Y;
    std::vector<double> lams(p);
    for (Eigen::Index j = 0; j < p; ++j) lams[j] = 1.0 / theta[j] + o.shift;
    last_res.assign(k, 0.0);
    bool done = true;
    for (int j = 0; j < k; ++j) {
      last_res[j] = residual(ops, X.col(j), lams[j]);
      done = done && last_res[j] <= o.tol;
    }
    if (std::getenv("Z2EIG_DEBUG")) std::fprintf(stderr, "lanczos restart %d %s\n", restart, residual_list(last_res).c_str());
    if (done || m == n) {
      std::vector<double> lk(lams.begin(), lams.begin() + k);
      return finish(ops, X.leftCols(k), lk);
    }
    // continue the Krylov space from the residuals of the leading block
    V.leftCols(p) = X;
    W.leftCols(p) = AX;
    const Eigen::Index add = std::min(b, mmax - p);
    Z = AX.leftCols(add) - X.leftCols(add) * theta.head(add).asDiagonal();
    m_orthonormalize(V, p, Z, mass, rng);
    V.middleCols(p, add) = Z;
    imaged = p;
    filled = p + add;
  }
  throw Error(ErrorCode::NoConvergence, "shift-invert Lanczos residuals " + residual_list(last_res));
}

std::vector<EigenPair> lobpcg(const TwistedOperators& ops, int k, const SolverOptions& o, SolveReport& rep) {
  const Eigen::Index n = ops.size();
  const Eigen::Index b = std::min<Eigen::Index>(n, k + 2);
  std::mt19937_64 rng(o.seed);
  const Vector& mass = ops.mass;
  const SparseMatrix& S = ops.stiffness;
  Vector precond(n);
  for (Eigen::Index i = 0; i < n; ++i) precond[i] = 1.0 / (S.coeff(i, i) - o.shift * mass[i]);

  MatrixXd X = random_block(n, b, rng), P;
  MatrixXd dummy;
  m_orthonormalize(dummy, 0, X, mass, rng);
  std::vector<double> lams(b);
  std::vector<double> last_res(k, 0.0);
  for (int it = 0; it < o.lobpcg_max_iters; ++it) {
    rep.iterations = it + 1;
    MatrixXd SX = S * X;
    MatrixXd G = X.transpose() * SX;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (G + G.transpose()));
    X = X * es.eigenvectors();
    SX = SX * es.eigenvectors();
    for (Eigen::Index j = 0; j < b; ++j) lams[j] = es.eigenvalues()[j];
    MatrixXd R = SX - mass.asDiagonal() * X * es.eigenvalues().asDiagonal();
    bool done = true;
    for (int j = 0; j < k; ++j) {
      last_res[j] = R.col(j).norm() / mass.cwiseProduct(X.col(j)).norm();
      done = done && last_res[j] <= o.tol;
    }
    if (done) {
      std::vector<double> lk(lams.begin(), lams.begin() + k);
      return finish(ops, X.leftCols(k), lk);
    }
    MatrixXd Wb = precond.asDiagonal() * R;
    const Eigen::Index cols = b + Wb.cols() + P.cols();
    MatrixXd Q(n, cols);
    Q.leftCols(b) = X;
    Q.middleCols(b, Wb.cols()) = Wb;
    if (P.cols() > 0) Q.rightCols(P.cols()) = P;
    m_orthonormalize(dummy, 0, Q, mass, rng);
    MatrixXd H = Q.transpose() * (S * Q);
    Eigen::SelfAdjointEigenSolver<MatrixXd> hs(0.5 * (H + H.transpose()));
    MatrixXd C = hs.eigenvectors().leftCols(b);
    MatrixXd Xn = Q * C;
    // search direction: new iterate minus its component along the old one
    P = Xn - X * (X.transpose() * mass.asDiagonal() * Xn);
    X = Xn;
  }
  throw Error(ErrorCode::NoConvergence, "LOBPCG residuals " + residual_list(last_res));
}

}  // namespace

std::vector<EigenPair> lowest_eigenpairs(const TwistedOperators& ops, int k, const SolverOptions& opts,
                                         SolveReport* report) {
  if (k < 1) throw Error(ErrorCode::InvalidInput, "k must be at least 1");
  if (k > ops.size()) throw Error(ErrorCode::InvalidInput, "k exceeds the number of free vertices");
  SolveReport local;
  SolveReport& rep = report ? *report : local;
  if (opts.method == SolverMethod::Dense) {
    rep.method_used = SolverMethod::Dense;
    return dense_eigenpairs(ops, k);
  }
  if (opts.method == SolverMethod::ShiftInvertLanczos) {
    SparseMatrix K = ops.stiffness;
    for (int i = 0; i < ops.size(); ++i) K.coeffRef(i, i) -= opts.shift * ops.mass[i];
    try {
      Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(K);
      if (llt.info() == Eigen::Success) {
        rep.method_used = SolverMethod::ShiftInvertLanczos;
        return lanczos(ops, llt, k, opts, rep);
      }
      Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(K);
      if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "factorization of S - shift M failed");
      rep.method_used = SolverMethod::ShiftInvertLanczos;
      return lanczos(ops, ldlt, k, opts, rep);
    } catch (const Error& e) {
      if (!opts.fallback || e.code() != ErrorCode::NoConvergence) throw;
    }
  }
  rep.method_used = SolverMethod::Lobpcg;
  return lobpcg(ops, k, opts, rep);
}

std::vector<EigenPair> dense_eigenpairs(const TwistedOperators& ops, int k) {
  const Eigen::Index n = ops.size();
  if (k < 1 || k > n) throw Error(ErrorCode::InvalidInput, "k out of range for dense solve");
  const Vector isq = ops.mass.cwiseSqrt().cwiseInverse();
  MatrixXd A = MatrixXd(ops.stiffness);
  A = isq.asDiagonal() * A * isq.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (A + A.transpose()));
  MatrixXd X = isq.asDiagonal() * es.eigenvectors().leftCols(k);
  std::vector<double> lams(es.eigenvalues().data(), es.eigenvalues().data() + k);
  return finish(ops, X, lams);
}

std::vector<SpectrumCluster> cluster_multiplicities(const std::vector<double>& sorted, double gap_tol) {
  std::vector<SpectrumCluster> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (out.empty() || sorted[i] - sorted[i - 1] > gap_tol) out.emplace_back();
    out.back().members.push_back(static_cast<int>(i));
  }
  for (auto& c : out) {
    double s = 0.0;
    for (int m : c.members) s += sorted[m];
    c.value = s / c.multiplicity();
  }
  return out;
}

std::vector<SpectrumCluster> cluster_multiplicities_relative(const std::vector<double>& sorted, double rel) {
  std::vector<SpectrumCluster> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (out.empty() || sorted[i] - sorted[i - 1] > rel * std::max(1.0, std::abs(sorted[i - 1]))) out.emplace_back();
    out.back().members.push_back(static_cast<int>(i));
  }
  for (auto& c : out) {
    double s = 0.0;
    for (int m : c.members) s += sorted[m];
    c.value = s / c.multiplicity();
  }
  return out;
}

}  // namespace z2eig
