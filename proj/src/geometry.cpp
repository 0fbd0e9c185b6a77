#include "z2eig/geometry.hpp"

#include "z2eig/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace z2eig {

UnitVec3 UnitVec3::checked(const Vec3& v, double tol) {
  const double n = v.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    std::ostringstream os;
    os << "vector (" << v.x() << ", " << v.y() << ", " << v.z() << ") has norm " << n;
    throw Error(ErrorCode::NotUnit, os.str());
  }
  return UnitVec3(v / n);
}

UnitVec3 UnitVec3::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::NotUnit, "cannot normalize zero vector");
  return UnitVec3(v / n);
}

double geodesic_distance(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Vec3 exp_map(const Vec3& base, const Vec3& v) {
  const double t = v.norm();
  if (t == 0.0) return base;
  Vec3 q = std::cos(t) * base + std::sin(t) * (v / t);
  return q.normalized();
}

std::pair<Vec3, Vec3> tangent_frame(const Vec3& p) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(p[i]) < std::abs(p[axis])) axis = i;
  Vec3 e = Vec3::Zero();
  e[axis] = 1.0;
  Vec3 e1 = (e - e.dot(p) * p).normalized();
  Vec3 e2 = p.cross(e1);
  return {e1, e2};
}

double Configuration::nearest_distance(std::size_t i) const {
  double best = kPi;
  for (std::size_t j = 0; j < points_.size(); ++j)
    if (j != i) best = std::min(best, geodesic_distance(points_[i], points_[j]));
  return best;
}

Configuration make_configuration(std::vector<UnitVec3> points) {
  if (points.size() % 2 != 0)
    throw Error(ErrorCode::OddCount, "configuration has " + std::to_string(points.size()) + " points");
  Configuration c;
  double sep = kPi;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = geodesic_distance(points[i], points[j]);
      if (d < 1e-6) {
        std::ostringstream os;
        os << "points " << i << " and " << j << " are " << d << " rad apart";
        throw Error(ErrorCode::DuplicatePoint, os.str());
      }
      sep = std::min(sep, d);
    }
  c.points_ = std::move(points);
  c.min_separation_ = sep;
  return c;
}

Configuration make_configuration(const std::vector<Vec3>& points, double unit_tol) {
  std::vector<UnitVec3> u;
  u.reserve(points.size());
  for (const auto& p : points) u.push_back(UnitVec3::checked(p, unit_tol));
  return make_configuration(std::move(u));
}

double ConfigTangent::norm() const {
  double s = 0.0;
  for (const auto& x : v) s += x.squaredNorm();
  return std::sqrt(s);
}

ConfigTangent make_tangent(const Configuration& config, std::vector<Vec3> v) {
  if (v.size() != config.size())
    throw Error(ErrorCode::InvalidInput, "tangent has " + std::to_string(v.size()) + " vectors for " +
                                             std::to_string(config.size()) + " points");
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double d = std::abs(v[k].dot(config[k]));
    if (d > 1e-12 * std::max(1.0, v[k].norm()))
      throw Error(ErrorCode::InvalidInput, "tangent vector " + std::to_string(k) + " is not orthogonal to its point");
  }
  return {std::move(v)};
}

Configuration displace(const Configuration& config, const ConfigTangent& nu, double t) {
  std::vector<UnitVec3> pts;
  pts.reserve(config.size());
  for (std::size_t k = 0; k < config.size(); ++k)
    pts.push_back(UnitVec3::normalized(exp_map(config[k], t * nu.v[k])));
  return make_configuration(std::move(pts));
}

// ---------------------------------------------------------------------------

StereoChart::StereoChart(const Vec3& p) : p_(p) {
  auto [e1, e2] = tangent_frame(p);
  e1_ = e1;
  e2_ = e2;
}

StereoChart::StereoChart(const Vec3& p, const Vec3& e1) : p_(p) {
  e1_ = (e1 - e1.dot(p) * p).normalized();
  e2_ = p_.cross(e1_);
}

Complex StereoChart::to_chart(const Vec3& q) const {
  const double c = q.dot(p_);
  const double denom = 1.0 + c;
  if (denom <= 1e-300) throw Error(ErrorCode::InvalidInput, "chart undefined at the antipode");
  return Complex(q.dot(e1_), q.dot(e2_)) * (2.0 / denom);
}

Vec3 StereoChart::from_chart(Complex z) const {
  const Complex w = 0.5 * z;
  const double s = std::norm(w);
  return ((1.0 - s) * p_ + 2.0 * w.real() * e1_ + 2.0 * w.imag() * e2_) / (1.0 + s);
}

StereoChart StereoChart::rotated(double beta) const {
  // z' = e^{i beta} z means the new first axis sits at angle -beta.
  return StereoChart(p_, std::cos(beta) * e1_ - std::sin(beta) * e2_);
}

std::array<Vec3, 3> rotation_fields(const Vec3& x) {
  return {Vec3(0.0, -x.z(), x.y()), Vec3(x.z(), 0.0, -x.x()), Vec3(-x.y(), x.x(), 0.0)};
}

double chi(double t) {
  if (t <= 0.25) return 1.0;
  if (t >= 0.75) return 0.0;
  const double u = (t - 0.25) / 0.5;
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double chi_derivative(double t) {
  if (t <= 0.25 || t >= 0.75) return 0.0;
  const double u = (t - 0.25) / 0.5;
  return -2.0 * 30.0 * u * u * (u - 1.0) * (u - 1.0);
}

// ---------------------------------------------------------------------------

namespace {

Mat3 cross_matrix(const Vec3& q) {
  Mat3 m;
  m << 0.0, -q.z(), q.y(), q.z(), 0.0, -q.x(), -q.y(), q.x(), 0.0;
  return m;
}

}  // namespace

BumpField::BumpField(const Vec3& q, double r, double a, double s) : q_(q), r_(r), a_(a), s_(s) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidInput, "bump width must be positive");
  if (!(r > -1.0 && r < 1.0)) throw Error(ErrorCode::InvalidInput, "bump band centre must lie in (-1, 1)");
}

double BumpField::profile(double c) const { return chi((c - r_) / a_) * chi((r_ - c) / a_); }

double BumpField::profile_derivative(double c) const {
  const double t = (c - r_) / a_;
  return (chi_derivative(t) * chi(-t) - chi(t) * chi_derivative(-t)) / a_;
}

bool BumpField::in_support(const Vec3& x) const { return std::abs(x.dot(q_) - r_) < 0.75 * a_; }

Vec3 BumpField::value(const Vec3& x) const {
  const double c = x.dot(q_);
  if (std::abs(c - r_) >= 0.75 * a_) return Vec3::Zero();
  return s_ * profile(c) * q_.cross(x);
}

Mat3 BumpField::covariant_derivative(const Vec3& x) const {
  const double c = x.dot(q_);
  if (std::abs(c - r_) >= 0.75 * a_) return Mat3::Zero();
  const Mat3 D = s_ * (profile_derivative(c) * q_.cross(x) * q_.transpose() + profile(c) * cross_matrix(q_));
  const Mat3 P = tangent_projector(x);
  return P * D * P;
}

Vec3 MatchingField::value(const Vec3& x) const {
  Vec3 v = Vec3::Zero();
  for (const auto& b : bumps_) v += b.value(x);
  return v;
}

Mat3 MatchingField::covariant_derivative(const Vec3& x) const {
  Mat3 m = Mat3::Zero();
  for (const auto& b : bumps_) m += b.covariant_derivative(x);
  return m;
}

MatchingField matching_field(const Configuration& config, const ConfigTangent& nu, double reach) {
  if (nu.v.size() != config.size()) throw Error(ErrorCode::InvalidInput, "tangent size does not match configuration");
  if (!(reach > 0.0 && reach < 1.0)) throw Error(ErrorCode::InvalidInput, "reach must lie in (0, 1)");
  MatchingField field;
  field.multipliers_.assign(config.size(), 1.0);
  std::vector<double> radius;
  for (std::size_t k = 0; k < config.size(); ++k) {
    const Vec3& p = config[k];
    const double len = nu.v[k].norm();
    if (len == 0.0) continue;
    const double rho = std::min(reach * config.nearest_distance(k) / 2.5, 0.3);
    const Vec3 axis = p.cross(nu.v[k] / len);
    const Vec3 q = (std::cos(rho) * p + std::sin(rho) * axis).normalized();
    const double a = (2.0 / 3.0) * rho * std::sin(rho);
    const double r = q.dot(p);
    field.bumps_.emplace_back(q, r, a, len / std::sin(rho));
    radius.push_back(std::acos(std::max(-1.0, r - 0.75 * a)));
    // multiplier stays 1: the construction hits v_k exactly.
  }
  const auto& bumps = field.bumps_;
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    for (std::size_t j = i + 1; j < bumps.size(); ++j)
      if (geodesic_distance(bumps[i].center(), bumps[j].center()) <= radius[i] + radius[j])
        throw Error(ErrorCode::SupportCollision, "bump supports overlap");
    std::size_t inside = 0;
    for (std::size_t k = 0; k < config.size(); ++k)
      if (geodesic_distance(bumps[i].center(), config[k]) < radius[i]) ++inside;
    if (inside != 1) throw Error(ErrorCode::SupportCollision, "bump support must contain exactly one point");
  }
  return field;
}

}  // namespace z2eig
