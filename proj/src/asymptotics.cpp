#include "z2eig/asymptotics.hpp"

#include "z2eig/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <deque>

namespace z2eig {

namespace {

int branch_neighbour(const Problem& problem, int point) {
  for (const auto& path : problem.cut().paths) {
    if (path.point_a == point) return path.vertices[1];
    if (path.point_b == point) return path.vertices[path.vertices.size() - 2];
  }
  throw Error(ErrorCode::InvalidInput, "point " + std::to_string(point) + " is not on a cut path");
}

// Angle in [0, 2 pi) with points on the ray itself at 0.
double slit_angle(Complex w) {
  double a = std::atan2(w.imag(), w.real());
  if (w.imag() > -1e-13) return a < 0.0 ? (w.real() > 0.0 ? 0.0 : kPi) : a;
  return a + 2.0 * kPi;
}

}  // namespace

LocalExpansion::LocalExpansion(const Problem& problem, int point, const FitParams& fit)
    : point_(point), chart_(problem.config()[point]), fit_(fit) {
  setup(problem, fit);
}

LocalExpansion::LocalExpansion(const Problem& problem, int point, const StereoChart& chart, const FitParams& fit)
    : point_(point), chart_(chart), fit_(fit) {
  setup(problem, fit);
}

void LocalExpansion::setup(const Problem& problem, const FitParams& fit) {
  const auto& config = problem.config();
  if (point_ < 0 || point_ >= static_cast<int>(config.size())) throw Error(ErrorCode::InvalidInput, "point out of range");
  if (fit.max_order < 0 || fit.max_order > 8) throw Error(ErrorCode::InvalidInput, "max_order out of range");
  const SphericalMesh& mesh = problem.mesh();
  const int vp = mesh.config_vertex()[point_];
  const Vec3 p = mesh.vertices()[vp];
  const double nn = config.nearest_distance(point_);
  r_out_ = fit.r_out > 0.0 ? fit.r_out : std::min(0.3 * nn, 0.2);
  r_in_ = fit.r_in > 0.0 ? fit.r_in : 4.0 * mesh.local_size(vp);
  if (!(r_in_ < r_out_))
    throw Error(ErrorCode::InsufficientSamples, "fit annulus is empty (r_in " + std::to_string(r_in_) + ", r_out " +
                                                    std::to_string(r_out_) + ")");

  const int v1 = branch_neighbour(problem, point_);
  theta_ref_ = std::arg(chart_.to_chart(mesh.vertices()[v1]));
  const Complex rot = std::polar(1.0, -theta_ref_);
  auto local = [&](int v) { return chart_.to_chart(mesh.vertices()[v]) * rot; };
  auto crosses_ray = [&](Complex a, Complex b) {
    const double ha = a.imag(), hb = b.imag();
    if ((ha > -1e-13) == (hb > -1e-13)) return false;
    const double x = (ha * b.real() - hb * a.real()) / (ha - hb);
    return x > 0.0;
  };

  // local trivialization on the slit disk, by BFS from the first cut vertex
  const double reach = 1.2 * r_out_;
  const auto& ops = problem.ops();
  std::vector<signed char> s(mesh.vertex_count(), 0);
  s[v1] = 1;
  std::deque<int> queue{v1};
  std::vector<int> reached{v1};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    const Complex zv = local(v);
    for (const auto& st : mesh.star(v)) {
      const int w = st.vertex;
      if (s[w] != 0 || w == vp || ops.vertex_to_free[w] < 0) continue;
      if (geodesic_distance(mesh.vertices()[w], p) > reach) continue;
      if (crosses_ray(zv, local(w))) continue;
      s[w] = static_cast<signed char>(s[v] * problem.signs()[st.edge]);
      queue.push_back(w);
      reached.push_back(w);
    }
  }

  std::vector<std::pair<double, double>> polar;
  for (int v : reached) {
    const double d = geodesic_distance(mesh.vertices()[v], p);
    if (d < r_in_ || d > r_out_) continue;
    const Complex z = local(v);
    sample_free_.push_back(ops.vertex_to_free[v]);
    gauge_.push_back(s[v]);
    polar.emplace_back(std::abs(z), slit_angle(z) + theta_ref_);
  }
  const int K = fit.max_order + 1;
  if (static_cast<int>(polar.size()) < std::max(fit.min_samples, 2 * K + 1))
    throw Error(ErrorCode::InsufficientSamples, "only " + std::to_string(polar.size()) + " samples in fit annulus");

  design_.resize(static_cast<Eigen::Index>(polar.size()), 2 * K);
  term_scale_.assign(K, 0.0);
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const auto [r, psi] = polar[i];
    for (int k = 0; k < K; ++k) {
      const double e = k + 0.5;
      const double rk = std::pow(r, e);
      design_(static_cast<Eigen::Index>(i), 2 * k) = rk * std::cos(e * psi);
      design_(static_cast<Eigen::Index>(i), 2 * k + 1) = rk * std::sin(e * psi);
      term_scale_[k] += rk * rk;
    }
  }
  for (int k = 0; k < K; ++k) term_scale_[k] = std::sqrt(term_scale_[k] / polar.size() / 2.0);
  qr_.compute(design_);
}

std::vector<Complex> LocalExpansion::coefficients(const Vector& f) const {
  Vector g(static_cast<Eigen::Index>(sample_free_.size()));
  for (std::size_t i = 0; i < sample_free_.size(); ++i) g[static_cast<Eigen::Index>(i)] = gauge_[i] * f[sample_free_[i]];
  const Vector x = qr_.solve(g);
  std::vector<Complex> c(static_cast<std::size_t>(fit_.max_order + 1));
  for (int k = 0; k <= fit_.max_order; ++k) c[k] = Complex(x[2 * k], -x[2 * k + 1]);
  return c;
}

BranchData LocalExpansion::extract(const Vector& f) const {
  Vector g(static_cast<Eigen::Index>(sample_free_.size()));
  for (std::size_t i = 0; i < sample_free_.size(); ++i) g[static_cast<Eigen::Index>(i)] = gauge_[i] * f[sample_free_[i]];
  const Vector x = qr_.solve(g);
  BranchData b;
  b.point = point_;
  b.p = chart_.base();
  b.e1 = chart_.e1();
  b.e2 = chart_.e2();
  b.r_in = r_in_;
  b.r_out = r_out_;
  b.samples = static_cast<int>(g.size());
  b.reference_angle = theta_ref_;
  for (int k = 0; k <= fit_.max_order; ++k) b.coefficients.emplace_back(x[2 * k], -x[2 * k + 1]);
  const double gn = g.norm();
  if (!(gn > 0.0)) throw Error(ErrorCode::ZeroSection, "section vanishes on the fit annulus");
  b.fit_residual = (g - design_ * x).norm() / gn;
  const double grms = gn / std::sqrt(static_cast<double>(g.size()));
  for (int k = 0; k <= fit_.max_order; ++k)
    if (std::abs(b.coefficients[k]) * term_scale_[k] > fit_.rel_tol * grms) {
      b.n = k;
      b.a = b.coefficients[k];
      return b;
    }
  throw Error(ErrorCode::AmbiguousOrder, "no expansion term passes the threshold at point " + std::to_string(point_));
}

BranchData extract_branch_data(const Problem& problem, const Vector& f, int point, const FitParams& fit) {
  return LocalExpansion(problem, point, fit).extract(f);
}

VanishingClass classify_vanishing(const Problem& problem, const Vector& f, const FitParams& fit) {
  VanishingClass vc;
  for (int k = 0; k < static_cast<int>(problem.config().size()); ++k) {
    vc.data.push_back(extract_branch_data(problem, f, k, fit));
    vc.orders.push_back(vc.data.back().n);
    if (vc.data.back().n == 0) vc.vanishing.push_back(k);
  }
  return vc;
}

CriticalCombination critical_combination(const Problem& problem, const std::vector<EigenPair>& cluster,
                                         const FitParams& fit) {
  if (cluster.empty()) throw Error(ErrorCode::InvalidInput, "empty cluster");
  const int N = static_cast<int>(cluster.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  try {
    for (int k = 0; k < static_cast<int>(problem.config().size()); ++k) {
      LocalExpansion le(problem, k, fit);
      std::vector<Complex> c(N);
      for (int i = 0; i < N; ++i) c[i] = le.linear_coefficient(cluster[i].vector);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) H(i, j) += (std::conj(c[i]) * c[j]).real();
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::ExtractionFailed, e.what());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
  CriticalCombination cc;
  cc.form_eigenvalues = es.eigenvalues();
  cc.coefficients = es.eigenvectors().col(0);
  cc.minimum = es.eigenvalues()[0];
  cc.maximum = es.eigenvalues()[N - 1];
  return cc;
}

double c2_eigensection(int m, double alpha, const Vec3& x, bool normalized) {
  if (m < 1) throw Error(ErrorCode::InvalidInput, "m must be at least 1");
  const double st = std::hypot(x.x(), x.y());
  double phi = std::atan2(x.y(), x.x());
  if (phi < 0.0) phi += 2.0 * kPi;
  const double e = m - 0.5;
  const double v = std::pow(st, e) * std::sin(e * (phi - alpha));
  if (!normalized) return v;
  // int sin^{2e} theta sin theta dtheta * int sin^2(e(phi - alpha)) dphi
  const double polar = std::sqrt(kPi) * std::tgamma(e + 1.0) / std::tgamma(e + 1.5);
  const double azimuth = kPi - std::sin(4.0 * kPi * e - 2.0 * e * alpha) / (4.0 * e) - std::sin(2.0 * e * alpha) / (4.0 * e);
  return v / std::sqrt(polar * azimuth);
}

}  // namespace z2eig
