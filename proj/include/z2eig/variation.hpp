#pragma once

// Eigenvalue variation over configuration space, stress-energy identities and
// finite-difference oracles.

#include "z2eig/asymptotics.hpp"

namespace z2eig {

/// (pi/2) Re(a_p^2 dz) per point, as components on the chart frame (e1, e2).
struct GradientCovector {
  std::vector<Eigen::Vector2d> components;
  std::vector<Vec3> e1, e2;

  double pair(const ConfigTangent& nu) const;
  /// Tangent vector at each point representing the covector.
  std::vector<Vec3> vectors() const;
  double norm() const;
};

/// Points with n_p >= 1 contribute zero.
GradientCovector eigenvalue_gradient(const std::vector<BranchData>& branch);

/// Gradient of eigenvalue `index` of a solved problem. Throws
/// DegenerateCluster when the eigenvalue is not simple under the relative
/// gap rule `rel_gap`.
GradientCovector eigenvalue_gradient(const Problem& problem, const std::vector<EigenPair>& pairs, int index,
                                     const FitParams& fit = {}, double rel_gap = 0.02);

struct SplittingForm {
  Eigen::MatrixXd matrix;   // symmetric, in the given cluster basis
  Eigen::VectorXd eta;      // ascending
  Eigen::MatrixXd vectors;  // columns: eigenvectors in the cluster basis
};

/// Entries (pi/2) sum_p Re(a_p(f_i) a_p(f_j) dz(nu_p)), with a_p read as the
/// linear coefficient c_0.
SplittingForm splitting_form(const Problem& problem, const std::vector<EigenPair>& cluster, const ConfigTangent& nu,
                             const FitParams& fit = {});

/// T = df (x) df - (|df|^2 - lambda f^2) g / 2 per triangle, in ambient
/// coordinates on the triangle plane, with f taken at the centroid.
std::vector<Mat3> stress_energy(const Problem& problem, const Vector& f, double lambda);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double middle = 0.0;    // integral of <nu, f df' - f' df> (pair identity)
  double scale = 0.0;     // integral of |nabla nu| |T| as an absolute size
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|)
};

/// Both sides of  int <nabla nu, T> = -(pi/4) sum_p Re(a_p^2 dz(nu)).
IdentityCheck divergence_identity(const Problem& problem, const Vector& f, double lambda, const VectorField& nu,
                                  const FitParams& fit = {});

/// Both sides of
///   int <nabla nu, S> + sign (lambda' - lambda)/2 int <nu, f df' - f' df>
///     = -(pi/2) sum_p Re(a_p(f) a_p(f') dz(nu)),
/// with S = df (x) df' + df' (x) df - (<df, df'> - (lambda + lambda')/2 f f') g.
/// `middle_sign` selects the sign of the middle term.
IdentityCheck pair_identity(const Problem& problem, const Vector& f, const Vector& f2, double lambda,
                            double lambda2, const VectorField& nu, double middle_sign = 1.0,
                            const FitParams& fit = {});

struct SlopeEstimate {
  double slope = 0.0;
  double plus = 0.0, minus = 0.0;  // tracked eigenvalues at +h and -h
  double overlap = 1.0;            // weakest tracking overlap
};

/// Central difference of eigenvalue `branch` along nu, by morphing the mesh.
/// Branches are followed by the largest mass overlap; overlaps below
/// `min_overlap` raise BranchSwap.
SlopeEstimate fd_eigenvalue_slope(const Problem& problem, const std::vector<EigenPair>& pairs, int branch,
                                  const ConfigTangent& nu, double h, double min_overlap = 0.7,
                                  const SolverOptions& opts = {});

struct ClusterSlopes {
  Eigen::VectorXd central;     // per tracked vector, (lambda(+h) - lambda(-h)) / 2h
  Eigen::VectorXd forward;     // (lambda(+h) - lambda0) / h
  Eigen::VectorXd backward;    // (lambda0 - lambda(-h)) / h
  double overlap = 1.0;
};

/// Finite-difference slopes of the branches emanating from a degenerate
/// cluster along the given basis combinations (columns of `directions`).
ClusterSlopes fd_cluster_slopes(const Problem& problem, const std::vector<EigenPair>& cluster,
                                const Eigen::MatrixXd& directions, const ConfigTangent& nu, double h,
                                int solve_count, double min_overlap = 0.7, const SolverOptions& opts = {});

}  // namespace z2eig
