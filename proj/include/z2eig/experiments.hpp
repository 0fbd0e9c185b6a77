#pragma once

// Configuration-space studies: exact C2 spectra and spectral flow, gradient
// ascent, packing configurations, coalescence and pair insertion.

#include "z2eig/gauge.hpp"
#include "z2eig/nodal.hpp"
#include "z2eig/variation.hpp"

#include <string>

namespace z2eig {

struct SpectrumLevel {
  double value = 0.0;
  int multiplicity = 0;
};

/// {m^2 - 1/4} with multiplicity 2m, m = 1..m_max.
std::vector<SpectrumLevel> c2_antipodal_spectrum(int m_max);
/// {m(m + 1)} with multiplicity 2m + 1, m = 0..m_max (the coincident limit).
std::vector<SpectrumLevel> c2_coincident_spectrum(int m_max);

/// Two points at polar angle separation/2 on either side of +z in the xz-plane.
Configuration c2_configuration(double separation);

/// `steps` separations from pi down to `last`, geometrically spaced.
std::vector<double> c2_separations(int steps, double last = 0.05);

struct SpectralFlowParams {
  ProblemParams problem;
  int branches = 6;
  double min_overlap = 0.7;
  SolverOptions solver;
};

struct BranchCurves {
  std::vector<double> separations;
  Eigen::MatrixXd values;            // steps x branches, tracked branch values
  std::vector<double> step_overlap;  // weakest tracking overlap per step
  std::vector<std::string> swaps;    // BranchSwap log
  std::vector<std::vector<double>> sorted;  // raw ascending spectra per step
};

/// Tracks the lowest branches across separations by mass overlap of the
/// sections transferred through the geometric cut. The degenerate levels at
/// separation pi are split with the splitting form of the merge direction
/// before tracking starts.
BranchCurves spectral_flow_c2(const std::vector<double>& separations, const SpectralFlowParams& params = {});

// ---------------------------------------------------------------------------

/// 2 * pairs points uniform on S^2 (normalized Gaussians), redrawn until
/// every pairwise distance is at least `min_separation`.
Configuration random_configuration(int pairs, std::uint64_t seed, double min_separation = 0.5);
/// Random unit-norm tangent to configuration space.
ConfigTangent random_tangent(const Configuration& config, std::uint64_t seed);

struct GradientCheck {
  double formula = 0.0;    // <grad E, nu> from the branch coefficients
  double fd = 0.0;         // central difference
  double rel_error = 0.0;  // |formula - fd| / |fd|
  double eigenvalue = 0.0;
  double overlap = 1.0;
};

/// Compares the gradient formula for the lowest eigenvalue with the central
/// finite difference at step h along nu. Throws DegenerateCluster.
GradientCheck gradient_check(const Problem& problem, const ConfigTangent& nu, double h = 1e-3,
                             const SolverOptions& solver = {}, const FitParams& fit = {});

// ---------------------------------------------------------------------------

struct AscentParams {
  ProblemParams problem;
  double step = 0.05;       // radians, largest point displacement per step
  int max_iters = 60;
  double mult_tol = 0.02;   // relative gap declaring a cluster
  double grad_tol = 1e-6;
  double line_search_tol = 1e-8;
  int max_halvings = 6;
  FitParams fit;
  SolverOptions solver;
};

enum class FlowTermination { SmallGradient, DegenerateCluster, MaxIterations, LineSearchFailed };

const char* termination_name(FlowTermination t);

struct FlowStep {
  Configuration config;
  std::vector<double> spectrum;  // lowest three eigenvalues
  double gradient_norm = 0.0;
  int multiplicity = 1;          // of the lowest cluster
  double step = 0.0;             // accepted step length leading here
};

struct FlowTrajectory {
  std::vector<FlowStep> steps;
  FlowTermination reason = FlowTermination::MaxIterations;
};

/// Retracted gradient ascent of the lowest eigenvalue with backtracking and
/// a rebuilt mesh at every trial point. Throws MeshRebuildFailed.
FlowTrajectory flow_ascent(const Configuration& start, const AscentParams& params = {});

// ---------------------------------------------------------------------------

struct PackingConfig {
  Configuration config;       // the pairs q-, q+
  std::vector<Vec3> centers;  // the R-separated set
  double R = 0.0;
  double offset = 0.0;        // distance of q+- from q
  double count_constant = 0.0;  // c with 1/(c R^2) <= |centers| <= c/R^2
};

/// Greedy maximal R-separated subset of a Fibonacci stream; each centre q is
/// replaced by two points at distance R/8 from q on opposite sides of a great
/// circle through q.
PackingConfig packing_config(double R, int candidates = 0);

struct PackingParams {
  int background_count = 15000;
  int grade_depth = 2;
  double grade_radius_factor = 0.2;  // grade radius as a multiple of R
  SolverOptions solver;
};

struct PackingRow {
  double R = 0.0;
  int points = 0;
  double E = 0.0;
  double ER2 = 0.0;
  double E_over_n = 0.0;
  double untwisted = 0.0;
  int vertices = 0;
};

std::vector<PackingRow> packing_eigenvalue_study(const std::vector<double>& radii, const PackingParams& params = {},
                                                 bool untwisted_control = true);

// ---------------------------------------------------------------------------

/// Vertex position maximizing |f| among vertices at least `clearance` from
/// the geometric cut.
Vec3 insertion_point(const Problem& problem, const Vector& f, const GeometricCut& cut, double clearance = 0.3);

/// Two points at distance s/2 from x on opposite sides of a great circle
/// through x (separation s), appended to `base`. The pair lies along
/// cos(angle) e1 + sin(angle) e2 of the tangent frame at x.
Configuration insert_pair(const Configuration& base, const Vec3& x, double s, double angle = 0.0);

/// Cutoff of (2.2): chi(2 ln d / ln(100 eps) - 1), d the distance to the
/// configuration.
double log_cutoff(const Configuration& config, const Vec3& x, double eps);

struct CoalesceRow {
  double separation = 0.0;
  double E = 0.0;
  double gap = 0.0;          // (E - E_base) / E_base
  double transferred = 0.0;  // Rayleigh quotient of chi f_base on the new problem
};

struct CoalesceParams {
  ProblemParams problem;
  SolverOptions solver;
  double cutoff_scale = 1.0;  // 100 eps = cutoff_scale * separation
  /// Pair direction, see insert_pair. The default is transverse to the
  /// meridian through x, which for the antipodal doublet is transverse to
  /// the nodal line of the member vanishing at x.
  double orientation = 1.5707963267948966;
};

struct CoalesceStudy {
  double E_base = 0.0;
  Vec3 x = Vec3::Zero();
  std::vector<CoalesceRow> rows;
};

CoalesceStudy coalesce_study(const Configuration& base, const std::vector<double>& separations,
                             const CoalesceParams& params = {}, const Vec3* x = nullptr);

struct PairIdentity {
  double lhs = 0.0;       // (E_p - E_q) int f_q f_p
  double rhs = 0.0;       // -2 int_Sigma f_q d_n f_p
  double overlap = 0.0;   // int f_q f_p
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|)
  bool signs_match = false;
  int arc_segments = 0;
};

/// Both sides of the pair-insertion identity for the ground states of `base`
/// and `base` plus the last two points of `with_pair`. Sigma is the zero arc
/// of f_p joining the inserted points; the product is trivialized on the
/// complement of Sigma so that it is positive where |f_q f_p| is largest,
/// and d_n is taken from the left of Sigma towards it. Throws NoConnectingArc.
PairIdentity pair_identity_check(const Problem& base, const EigenPair& fq, const Problem& with_pair,
                                 const EigenPair& fp, const NodalParams& nodal = {});

struct PairInsertion {
  double E_q = 0.0;
  Vec3 x = Vec3::Zero();
  int index = -1;          // eigensection of the paired problem used as f_p
  double E_p = 0.0;
  PairIdentity identity;
};

/// Inserts a pair of separation s at the maximum of the base ground section
/// and evaluates the pair identity against the lowest `candidates`
/// eigensections of the new problem, keeping the one with the largest
/// |int f_q f_p| among those whose zero graph joins the pair. Throws
/// NoConnectingArc when none does.
PairInsertion pair_insertion_identity(const Configuration& base, double s, const CoalesceParams& params = {},
                                      int candidates = 4, const NodalParams& nodal = {});

// ---------------------------------------------------------------------------

struct PlatonicRecord {
  std::string name;
  int points = 0;
  std::vector<double> cluster_values;
  std::vector<int> multiplicities;
  std::vector<double> critical_minimum;  // critical_combination minimum / maximum, per cluster
};

/// Vertices of the tetrahedron, cube or icosahedron.
Configuration platonic_configuration(const std::string& name);

/// Records the criticality test on the lowest clusters; nothing is asserted.
PlatonicRecord platonic_record(const std::string& name, const ProblemParams& params = {}, int eigenvalues = 8,
                               const FitParams& fit = {});

}  // namespace z2eig
