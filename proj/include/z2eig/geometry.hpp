#pragma once

// Points, configurations, tangent data, charts and divergence-free test
// fields on the round unit sphere.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace z2eig {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// A point of S^2. Construction enforces |v| = 1 to 1e-12.
class UnitVec3 {
 public:
  UnitVec3() : v_(0.0, 0.0, 1.0) {}

  /// Rejects vectors whose norm differs from one by more than `tol`
  /// (NotUnit), then renormalizes.
  static UnitVec3 checked(const Vec3& v, double tol = 1e-12);
  /// Normalizes any non-zero vector.
  static UnitVec3 normalized(const Vec3& v);

  const Vec3& vec() const noexcept { return v_; }
  operator const Vec3&() const noexcept { return v_; }
  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }

 private:
  explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

/// Arc length between two unit vectors, computed with atan2 so it is
/// accurate near 0 and pi.
double geodesic_distance(const Vec3& a, const Vec3& b);

/// Orthogonal projector onto the tangent plane at x.
inline Mat3 tangent_projector(const Vec3& x) { return Mat3::Identity() - x * x.transpose(); }

/// Great-circle exponential map: moves `base` along tangent `v` by |v| radians.
Vec3 exp_map(const Vec3& base, const Vec3& v);

/// Deterministic orthonormal frame (e1, e2) at p with e1 x e2 = p. e1 is the
/// Gram-Schmidt projection of the global axis along which p has the smallest
/// absolute component.
std::pair<Vec3, Vec3> tangent_frame(const Vec3& p);

/// An even configuration of distinct points of S^2.
class Configuration {
 public:
  Configuration() = default;

  const std::vector<UnitVec3>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  /// Half the number of points.
  int pairs() const noexcept { return static_cast<int>(points_.size() / 2); }
  const Vec3& operator[](std::size_t i) const { return points_[i].vec(); }
  /// Smallest pairwise geodesic distance; pi for fewer than two points.
  double min_separation() const noexcept { return min_separation_; }
  /// Distance from point i to the nearest other configuration point.
  double nearest_distance(std::size_t i) const;

  friend Configuration make_configuration(std::vector<UnitVec3> points);

 private:
  std::vector<UnitVec3> points_;
  double min_separation_ = kPi;
};

/// Validates and builds a configuration. Errors: OddCount, DuplicatePoint
/// (two points closer than 1e-6 rad).
Configuration make_configuration(std::vector<UnitVec3> points);
Configuration make_configuration(const std::vector<Vec3>& points, double unit_tol = 1e-12);

/// Per-point tangent vectors; a tangent vector to configuration space.
struct ConfigTangent {
  std::vector<Vec3> v;

  static ConfigTangent zero(std::size_t count) { return {std::vector<Vec3>(count, Vec3::Zero())}; }
  double norm() const;
};

/// Checks orthogonality of each vector to its base point (tolerance 1e-12
/// relative to the vector length) and returns the tangent. Throws
/// InvalidInput on mismatch.
ConfigTangent make_tangent(const Configuration& config, std::vector<Vec3> v);

/// Moves every configuration point p_k to exp_{p_k}(t v_k).
Configuration displace(const Configuration& config, const ConfigTangent& nu, double t);

/// Stereographic projection from -p scaled so z(p) = 0 and |dz| = 1 at p:
///   z = 2 (u + i v) / (1 + c),  c = <q,p>, u = <q,e1>, v = <q,e2>.
class StereoChart {
 public:
  explicit StereoChart(const Vec3& p);
  StereoChart(const Vec3& p, const Vec3& e1);

  const Vec3& base() const noexcept { return p_; }
  const Vec3& e1() const noexcept { return e1_; }
  const Vec3& e2() const noexcept { return e2_; }

  Complex to_chart(const Vec3& q) const;
  Vec3 from_chart(Complex z) const;
  /// Image of a tangent vector at p under dz.
  Complex dz(const Vec3& tangent_at_base) const {
    return {tangent_at_base.dot(e1_), tangent_at_base.dot(e2_)};
  }
  /// Chart whose coordinate is e^{i beta} z.
  StereoChart rotated(double beta) const;

 private:
  Vec3 p_, e1_, e2_;
};

/// Values at x of the three rotation generators d_a = e_a x x, i.e.
/// d_1 = x2 d3 - x3 d2 and cyclic.
std::array<Vec3, 3> rotation_fields(const Vec3& x);

/// Fixed cutoff profile: 1 on (-inf, 1/4], 0 on [3/4, inf), quintic
/// smoothstep in between.
double chi(double t);
double chi_derivative(double t);

/// Smooth tangent vector field on S^2 with its covariant derivative.
class VectorField {
 public:
  virtual ~VectorField() = default;
  virtual Vec3 value(const Vec3& x) const = 0;
  /// J with J w = nabla_w nu for tangent w at x, expressed in ambient
  /// coordinates (tangent-projected on both sides).
  virtual Mat3 covariant_derivative(const Vec3& x) const = 0;
  /// Surface divergence tr(J).
  double divergence(const Vec3& x) const { return covariant_derivative(x).trace(); }
};

class ZeroField final : public VectorField {
 public:
  Vec3 value(const Vec3&) const override { return Vec3::Zero(); }
  Mat3 covariant_derivative(const Vec3&) const override { return Mat3::Zero(); }
};

/// The rotation-invariant band field s chi_{r,a}(<x,q>) (q x x), equal to
/// s d/dphi_q on the circle <x,q> = r and supported where |<x,q> - r| < a.
class BumpField final : public VectorField {
 public:
  BumpField(const Vec3& q, double r, double a, double s);

  Vec3 value(const Vec3& x) const override;
  Mat3 covariant_derivative(const Vec3& x) const override;
  /// True where the field can be non-zero.
  bool in_support(const Vec3& x) const;

  const Vec3& center() const noexcept { return q_; }
  double band_center() const noexcept { return r_; }
  double band_width() const noexcept { return a_; }
  double strength() const noexcept { return s_; }

 private:
  double profile(double c) const;
  double profile_derivative(double c) const;
  Vec3 q_;
  double r_, a_, s_;
};

/// Sum of bump fields with disjoint supports, one per configuration point
/// with non-zero v_k; value at p_k is multiplier_k * v_k.
class MatchingField final : public VectorField {
 public:
  Vec3 value(const Vec3& x) const override;
  Mat3 covariant_derivative(const Vec3& x) const override;

  const std::vector<BumpField>& bumps() const noexcept { return bumps_; }
  /// Positive multipliers m_k with nu(p_k) = m_k v_k (1 where v_k = 0).
  const std::vector<double>& multipliers() const noexcept { return multipliers_; }

  friend MatchingField matching_field(const Configuration&, const ConfigTangent&, double);

 private:
  std::vector<BumpField> bumps_;
  std::vector<double> multipliers_;
};

/// Builds the matching field. `reach` bounds each support to within
/// reach * (nearest-neighbour distance) of its point. Throws
/// SupportCollision when supports cannot be separated.
MatchingField matching_field(const Configuration& config, const ConfigTangent& nu,
                             double reach = 0.45);

}  // namespace z2eig
