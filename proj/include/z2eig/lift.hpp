#pragma once

// Homogeneous extension of an eigensection to R^3 minus the configuration
// rays, and finite-difference checks of closedness and coclosedness.

#include "z2eig/gauge.hpp"

namespace z2eig {

/// 1/2 (1 + sqrt(1 + 4 lambda)). Throws NegativeEigenvalue.
double homogeneity_exponent(double lambda);

/// Harmonic: nu = d(|x|^(mu-1) f(x/|x|)), the harmonic homogeneous extension
/// (mu (mu - 1) = lambda). AsPrinted: nu = d(|x|^mu f(x/|x|)).
enum class LiftConvention { Harmonic, AsPrinted };

enum class LiftInterpolation {
  MovingLeastSquares,  // weighted cubic fit in the tangent plane, smooth in x
  Linear,              // the P1 section and its per-triangle gradient
};

struct LiftParams {
  LiftConvention convention = LiftConvention::Harmonic;
  LiftInterpolation interpolation = LiftInterpolation::MovingLeastSquares;
  double exclusion = 0.1;   // angular radius of the excluded tubes about Z
  double mls_radius = 0.12; // support of the fit weights, radians
  Vec3 via = Vec3(1.0, 0.0, 0.0);  // for antipodal cut arcs
};

class HarmonicLift {
 public:
  HarmonicLift(const Problem& problem, const Vector& f, double lambda, const LiftParams& params = {});

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  /// Power of |x| in the potential.
  double radial_power() const noexcept { return power_; }
  /// Homogeneity degree of the components of nu.
  double degree() const noexcept { return power_ - 1.0; }
  const LiftParams& params() const noexcept { return params_; }
  const GeometricCut& cut() const noexcept { return cut_; }
  const Configuration& config() const noexcept { return problem_->config(); }

  /// Angle between x and the nearest configuration ray.
  double angle_to_rays(const Vec3& x) const;

  /// f and its tangential gradient at a unit vector, in the trivialization
  /// of the geometric cut.
  std::pair<double, Vec3> section(const Vec3& unit) const;
  /// Scalar potential |x|^a f(x/|x|).
  double potential(const Vec3& x) const;
  /// nu(x) in Cartesian components. Throws OnBranchRay inside an excluded tube.
  Vec3 evaluate(const Vec3& x) const;
  /// nu(x) in the trivialization continuous near the ray through `ref`.
  Vec3 evaluate_near(const Vec3& x, const Vec3& ref) const;

 private:
  const Problem* problem_;
  GeometricCut cut_;
  PointLocator locator_;
  Vector aligned_;
  double lambda_, mu_, power_;
  LiftParams params_;
  // vertex buckets for the fit neighbourhoods
  int grid_ = 1;
  std::vector<std::vector<int>> cells_;
  int cell_of(int i, int j, int k) const { return (i * grid_ + j) * grid_ + k; }
  std::pair<double, Vec3> fit(const Vec3& unit) const;
  std::pair<double, Vec3> linear(const Vec3& unit) const;
};

struct ShellGrid {
  double r_min = 0.9, r_max = 1.1;
  int shells = 3;
  int directions = 400;  // Fibonacci directions per shell
  double h = 0.05;       // coarse stencil step; the fine grid uses h/2
};

struct GridResiduals {
  double h = 0.0;
  double d_residual = 0.0;      // max |curl nu| / max |nu|
  double delta_residual = 0.0;  // max |div nu| / max |nu|
  int samples = 0;
};

struct ResidualStudy {
  GridResiduals coarse, fine;
  double d_order = 0.0;      // log2(coarse / fine)
  double delta_order = 0.0;
};

/// Central-difference curl and divergence of nu at the shell samples clear of
/// the excluded tubes (plus the stencil), at steps h and h/2.
ResidualStudy closed_coclosed_residuals(const HarmonicLift& lift, const ShellGrid& grid = {});

struct HolderFit {
  std::vector<double> angle;      // angular distance to the branch ray
  std::vector<double> magnitude;  // |nu| at |x| = 1
  double exponent = 0.0;          // least-squares slope of log |nu| against log angle
};

/// |nu| along the great circle leaving configuration point `point` in the
/// tangent direction `direction`, at the given angles. The lift must use an
/// exclusion radius below the smallest angle.
HolderFit holder_fit(const HarmonicLift& lift, int point, const Vec3& direction, const std::vector<double>& angles);

}  // namespace z2eig
