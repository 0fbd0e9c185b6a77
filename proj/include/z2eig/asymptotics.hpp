#pragma once

// Leading half-integer expansion f = Re(a z^{n+1/2}) + ... at branch points.

#include "z2eig/pipeline.hpp"

#include <Eigen/QR>

#include <array>
#include <optional>

namespace z2eig {

struct FitParams {
  double r_in = -1.0;   // negative: 4 x local mesh size
  double r_out = -1.0;  // negative: min(0.3 x nearest distance, 0.2)
  int max_order = 3;
  double rel_tol = 0.1;
  int min_samples = 30;
};

struct BranchData {
  int point = -1;
  Vec3 p = Vec3::Zero();
  Vec3 e1 = Vec3::Zero(), e2 = Vec3::Zero();  // chart frame
  Complex a;                                   // coefficient of z^{n+1/2}
  int n = 0;
  double fit_residual = 0.0;
  std::vector<Complex> coefficients;           // all orders 0..max_order
  double r_in = 0.0, r_out = 0.0;
  int samples = 0;
  double reference_angle = 0.0;                // chart angle of the branch ray
};

/// Least-squares machinery for one branch point of one problem. The section
/// is trivialized on the disk slit along the first edge of the cut path, and
/// z^{1/2} is continued from that ray.
class LocalExpansion {
 public:
  LocalExpansion(const Problem& problem, int point, const FitParams& fit = {});
  /// Same, in an explicit chart at the point.
  LocalExpansion(const Problem& problem, int point, const StereoChart& chart, const FitParams& fit = {});

  /// Coefficients c_k of Re(c_k z^{k+1/2}), k = 0..max_order.
  std::vector<Complex> coefficients(const Vector& f) const;
  /// Only c_0, which is linear in f.
  Complex linear_coefficient(const Vector& f) const { return coefficients(f)[0]; }
  /// Full extraction with order detection. Throws AmbiguousOrder.
  BranchData extract(const Vector& f) const;

  const StereoChart& chart() const noexcept { return chart_; }
  int samples() const noexcept { return static_cast<int>(sample_free_.size()); }

 private:
  void setup(const Problem& problem, const FitParams& fit);

  int point_;
  StereoChart chart_;
  FitParams fit_;
  double r_in_ = 0.0, r_out_ = 0.0, theta_ref_ = 0.0;
  std::vector<int> sample_free_;          // free indices of samples
  std::vector<double> gauge_;             // local sign per sample
  Eigen::MatrixXd design_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  std::vector<double> term_scale_;        // sqrt(mean r^{2k+1} / 2)
};

BranchData extract_branch_data(const Problem& problem, const Vector& f, int point, const FitParams& fit = {});

struct VanishingClass {
  std::vector<int> orders;       // n_p per point
  std::vector<int> vanishing;    // points with n_p = 0
  std::vector<BranchData> data;
};

VanishingClass classify_vanishing(const Problem& problem, const Vector& f, const FitParams& fit = {});

struct CriticalCombination {
  Eigen::VectorXd coefficients;  // in the cluster basis, unit length
  double minimum = 0.0;          // min of sum_p |c_0|^2 over unit combinations
  double maximum = 0.0;          // max of the same form
  Eigen::VectorXd form_eigenvalues;
};

/// Minimizes sum_p |a_p(f)|^2 over unit M-norm combinations of an M-orthonormal
/// cluster basis, with a_p read as the linear coefficient c_0.
CriticalCombination critical_combination(const Problem& problem, const std::vector<EigenPair>& cluster,
                                         const FitParams& fit = {});

/// Closed-form C2 section (sin theta)^{m-1/2} sin((m-1/2)(phi-alpha)) in
/// spherical coordinates with poles +-z and phi measured from +x, cut along
/// phi = 0. `normalized` scales it to unit L2 norm.
double c2_eigensection(int m, double alpha, const Vec3& x, bool normalized = true);

}  // namespace z2eig
