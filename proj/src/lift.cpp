#include "z2eig/lift.hpp"

#include "z2eig/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace z2eig {

double homogeneity_exponent(double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::NegativeEigenvalue, "lift needs lambda >= 0");
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * lambda));
}

HarmonicLift::HarmonicLift(const Problem& problem, const Vector& f, double lambda, const LiftParams& params)
    : problem_(&problem),
      cut_(geometric_cut(problem.config(), problem.cut(), params.via)),
      locator_(problem.mesh()),
      lambda_(lambda),
      mu_(homogeneity_exponent(lambda)),
      params_(params) {
  if (f.size() != problem.ops().size()) throw Error(ErrorCode::InvalidInput, "section size does not match the problem");
  if (!(params.exclusion >= 0.0 && params.exclusion < 1.0)) throw Error(ErrorCode::InvalidInput, "exclusion radius out of range");
  if (!(params.mls_radius > 0.0 && params.mls_radius < 0.5)) throw Error(ErrorCode::InvalidInput, "fit radius out of range");
  power_ = params.convention == LiftConvention::Harmonic ? mu_ - 1.0 : mu_;
  const auto t = geometric_gauge(problem, cut_);
  aligned_ = problem.vertex_values(f);
  for (Eigen::Index i = 0; i < aligned_.size(); ++i) aligned_[i] *= t[i];

  grid_ = std::max(1, static_cast<int>(std::ceil(2.0 / params.mls_radius)));
  cells_.assign(static_cast<std::size_t>(grid_) * grid_ * grid_, {});
  const auto& V = problem.mesh().vertices();
  for (int v = 0; v < static_cast<int>(V.size()); ++v) {
    int c[3];
    for (int d = 0; d < 3; ++d) c[d] = std::clamp(static_cast<int>((V[v][d] + 1.0) / params.mls_radius), 0, grid_ - 1);
    cells_[cell_of(c[0], c[1], c[2])].push_back(v);
  }
}

double HarmonicLift::angle_to_rays(const Vec3& x) const {
  const Vec3 u = x.normalized();
  double best = kPi;
  for (std::size_t k = 0; k < problem_->config().size(); ++k)
    best = std::min(best, geodesic_distance(problem_->config()[k], u));
  return best;
}

std::pair<double, Vec3> HarmonicLift::fit(const Vec3& u) const {
  const double rho = params_.mls_radius;
  const auto& V = problem_->mesh().vertices();
  const auto [e1, e2] = tangent_frame(u);
  int c[3];
  for (int d = 0; d < 3; ++d) c[d] = std::clamp(static_cast<int>((u[d] + 1.0) / rho), 0, grid_ - 1);

  std::vector<int> nb;
  for (int i = std::max(0, c[0] - 1); i <= std::min(grid_ - 1, c[0] + 1); ++i)
    for (int j = std::max(0, c[1] - 1); j <= std::min(grid_ - 1, c[1] + 1); ++j)
      for (int k = std::max(0, c[2] - 1); k <= std::min(grid_ - 1, c[2] + 1); ++k)
        for (int v : cells_[cell_of(i, j, k)])
          if ((V[v] - u).norm() < rho) nb.push_back(v);
  constexpr int kTerms = 10;
  if (static_cast<int>(nb.size()) < 2 * kTerms)
    throw Error(ErrorCode::InsufficientSamples, "too few mesh vertices inside the fit radius");

  Eigen::MatrixXd A(nb.size(), kTerms);
  Eigen::VectorXd b(nb.size());
  for (std::size_t r = 0; r < nb.size(); ++r) {
    const Vec3& q = V[nb[r]];
    const double d = (q - u).norm() / rho;
    const double w = std::sqrt(std::pow(1.0 - d, 4) * (4.0 * d + 1.0));
    const double s = e1.dot(q) / rho, t = e2.dot(q) / rho;
    const double row[kTerms] = {1.0, s, t, s * s, s * t, t * t, s * s * s, s * s * t, s * t * t, t * t * t};
    for (int k = 0; k < kTerms; ++k) A(r, k) = w * row[k];
    b[r] = w * (crosses(cut_, u, q) ? -1.0 : 1.0) * aligned_[nb[r]];
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  return {x[0], (x[1] * e1 + x[2] * e2) / rho};
}

std::pair<double, Vec3> HarmonicLift::linear(const Vec3& u) const {
  const auto [tri, w] = locator_.locate(u);
  const auto& tr = problem_->mesh().triangles()[tri];
  const auto& V = problem_->mesh().vertices();
  double val[3];
  for (int k = 0; k < 3; ++k) val[k] = (crosses(cut_, u, V[tr[k]]) ? -1.0 : 1.0) * aligned_[tr[k]];
  const Vec3 n2 = (V[tr[1]] - V[tr[0]]).cross(V[tr[2]] - V[tr[0]]);
  const double area2 = n2.norm();
  const Vec3 n = n2 / area2;
  Vec3 g = Vec3::Zero();
  for (int k = 0; k < 3; ++k) g += val[k] * n.cross(V[tr[(k + 2) % 3]] - V[tr[(k + 1) % 3]]) / area2;
  g -= g.dot(u) * u;
  return {w[0] * val[0] + w[1] * val[1] + w[2] * val[2], g};
}

std::pair<double, Vec3> HarmonicLift::section(const Vec3& unit) const {
  const Vec3 u = unit.normalized();
  return params_.interpolation == LiftInterpolation::MovingLeastSquares ? fit(u) : linear(u);
}

double HarmonicLift::potential(const Vec3& x) const {
  const double r = x.norm();
  if (!(r > 0.0)) throw Error(ErrorCode::OnBranchRay, "the origin lies on every ray");
  if (angle_to_rays(x) <= params_.exclusion) throw Error(ErrorCode::OnBranchRay, "point inside an excluded tube");
  return std::pow(r, power_) * section(x / r).first;
}

Vec3 HarmonicLift::evaluate(const Vec3& x) const {
  const double r = x.norm();
  if (!(r > 0.0)) throw Error(ErrorCode::OnBranchRay, "the origin lies on every ray");
  if (angle_to_rays(x) <= params_.exclusion) throw Error(ErrorCode::OnBranchRay, "point inside an excluded tube");
  const Vec3 u = x / r;
  const auto [f, g] = section(u);
  const double rp = std::pow(r, power_ - 1.0);
  return rp * (power_ * f * u + g);
}

Vec3 HarmonicLift::evaluate_near(const Vec3& x, const Vec3& ref) const {
  const Vec3 v = evaluate(x);
  return crosses(cut_, ref.normalized(), x.normalized()) ? Vec3(-v) : v;
}

namespace {

GridResiduals residuals_at(const HarmonicLift& lift, const std::vector<Vec3>& centers, double h) {
  GridResiduals out;
  out.h = h;
  double scale = 0.0, curl_max = 0.0, div_max = 0.0;
  for (const Vec3& x : centers) {
    Mat3 J;  // J(i, j) = d nu_i / d x_j
    for (int j = 0; j < 3; ++j) {
      const Vec3 step = h * Vec3::Unit(j);
      J.col(j) = (lift.evaluate_near(x + step, x) - lift.evaluate_near(x - step, x)) / (2.0 * h);
    }
    scale = std::max(scale, lift.evaluate(x).norm());
    const Vec3 curl(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
    curl_max = std::max(curl_max, curl.norm());
    div_max = std::max(div_max, std::abs(J.trace()));
  }
  if (scale > 0.0) {
    out.d_residual = curl_max / scale;
    out.delta_residual = div_max / scale;
  }
  out.samples = static_cast<int>(centers.size());
  return out;
}

double order(double coarse, double fine) {
  if (!(fine > 0.0)) return coarse > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return std::log2(coarse / fine);
}

}  // namespace

ResidualStudy closed_coclosed_residuals(const HarmonicLift& lift, const ShellGrid& grid) {
  if (!(grid.r_min > 0.0 && grid.r_max >= grid.r_min) || grid.shells < 1 || grid.directions < 1 || !(grid.h > 0.0))
    throw Error(ErrorCode::InvalidInput, "invalid shell grid");
  // stencils and fit disks stay clear of the excluded tubes
  double margin = lift.params().exclusion + std::asin(std::min(1.0, std::sqrt(3.0) * grid.h / grid.r_min));
  if (lift.params().interpolation == LiftInterpolation::MovingLeastSquares) margin += lift.params().mls_radius;
  std::vector<Vec3> centers;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int s = 0; s < grid.shells; ++s) {
    const double r = grid.shells == 1 ? grid.r_min : grid.r_min + (grid.r_max - grid.r_min) * s / (grid.shells - 1);
    for (int i = 0; i < grid.directions; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / grid.directions;
      const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
      const Vec3 u(rr * std::cos(golden * i), rr * std::sin(golden * i), z);
      if (lift.angle_to_rays(u) > margin) centers.push_back(r * u);
    }
  }
  if (centers.empty()) throw Error(ErrorCode::InsufficientSamples, "no shell sample clears the excluded tubes");
  ResidualStudy out;
  out.coarse = residuals_at(lift, centers, grid.h);
  out.fine = residuals_at(lift, centers, 0.5 * grid.h);
  out.d_order = order(out.coarse.d_residual, out.fine.d_residual);
  out.delta_order = order(out.coarse.delta_residual, out.fine.delta_residual);
  return out;
}

HolderFit holder_fit(const HarmonicLift& lift, int point, const Vec3& direction, const std::vector<double>& angles) {
  if (point < 0 || point >= static_cast<int>(lift.config().size())) throw Error(ErrorCode::InvalidInput, "point index out of range");
  if (angles.size() < 2) throw Error(ErrorCode::InsufficientSamples, "need at least two angles");
  HolderFit out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const Vec3 p = lift.config()[point];
  Vec3 d = direction - direction.dot(p) * p;
  if (!(d.norm() > 0.0)) throw Error(ErrorCode::InvalidInput, "direction is normal to the sphere");
  d.normalize();
  for (double a : angles) {
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidInput, "angles must be positive");
    const double m = lift.evaluate(exp_map(p, a * d)).norm();
    out.angle.push_back(a);
    out.magnitude.push_back(m);
    const double X = std::log(a), Y = std::log(m);
    sx += X, sy += Y, sxx += X * X, sxy += X * Y;
  }
  const double n = static_cast<double>(angles.size());
  out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace z2eig
