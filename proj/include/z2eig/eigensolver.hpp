#pragma once

// Lowest eigenpairs of the lumped pencil S f = lambda M f.

#include "z2eig/twisted.hpp"

#include <cstdint>
#include <vector>

namespace z2eig {

struct EigenPair {
  double value = 0.0;
  Vector vector;  // free-vertex values, f^T M f = 1
  double residual = 0.0;
};

struct SpectrumCluster {
  double value = 0.0;  // mean of the members
  std::vector<int> members;
  int multiplicity() const { return static_cast<int>(members.size()); }
};

enum class SolverMethod { ShiftInvertLanczos, Lobpcg, Dense };

struct SolverOptions {
  double tol = 1e-8;
  double shift = -0.1;        // factor S - shift * M
  std::uint64_t seed = 12345;
  int max_restarts = 40;
  int lobpcg_max_iters = 3000;
  bool fallback = true;       // LOBPCG when Lanczos fails
  SolverMethod method = SolverMethod::ShiftInvertLanczos;
};

struct SolveReport {
  SolverMethod method_used = SolverMethod::ShiftInvertLanczos;
  int iterations = 0;
  int operator_applications = 0;
};

/// ||S f - lambda M f|| / ||M f||.
double residual(const TwistedOperators& ops, const Vector& f, double lambda);
inline double residual(const TwistedOperators& ops, const EigenPair& p) { return residual(ops, p.vector, p.value); }

/// k smallest eigenpairs, sorted ascending, M-orthonormal. Throws
/// NoConvergence with the achieved residuals when the budget runs out.
std::vector<EigenPair> lowest_eigenpairs(const TwistedOperators& ops, int k, const SolverOptions& opts = {},
                                         SolveReport* report = nullptr);

/// Dense reference solve; meant for small meshes.
std::vector<EigenPair> dense_eigenpairs(const TwistedOperators& ops, int k);

/// Greedy gap clustering of sorted values: a new cluster starts when the
/// gap to the previous value exceeds gap_tol.
std::vector<SpectrumCluster> cluster_multiplicities(const std::vector<double>& sorted, double gap_tol);
/// Same with the relative rule gap > rel * max(1, lambda).
std::vector<SpectrumCluster> cluster_multiplicities_relative(const std::vector<double>& sorted, double rel = 0.08);

std::vector<double> values_of(const std::vector<EigenPair>& pairs);

}  // namespace z2eig
