#pragma once

// File formats: configurations, spectra, branch reports, zero graphs, meshes,
// CSV tables and run manifests. Schemas are in docs/formats.md.

#include "z2eig/asymptotics.hpp"
#include "z2eig/nodal.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace z2eig {

using Json = nlohmann::ordered_json;

/// {"points": [[x, y, z], ...]}; each point must have unit norm to 1e-9 and
/// is renormalized. Errors: Io, InvalidInput, NotUnit, OddCount, DuplicatePoint.
Configuration parse_configuration(const std::string& text);
Configuration load_configuration(const std::string& path);
Json configuration_json(const Configuration& config);

/// {eigenvalues, residuals, clusters: [{value, multiplicity}]}.
Json spectrum_json(const std::vector<EigenPair>& pairs, double rel_gap = 0.08);
/// Eigenvalues from a spectrum file written by spectrum_json.
std::vector<double> spectrum_values(const Json& spectrum);

Json branch_report_json(const std::vector<BranchData>& data);
Json graph_json(const ZeroGraph& graph, std::size_t config_size);

/// ASCII OFF with a sidecar `<path>.json` holding the configuration vertices,
/// cut paths and edge signs.
void write_mesh(const Problem& problem, const std::string& off_path);
/// Reads what write_mesh wrote. Only vertices, triangles and configuration
/// vertices are used; connectivity and geometry are recomputed.
SphericalMesh read_mesh(const std::string& off_path);

/// build_mesh with an on-disk cache in $Z2EIG_CACHE_DIR (no caching when the
/// variable is unset or empty). The key digests the configuration and the
/// mesh parameters.
SphericalMesh cached_mesh(const Configuration& config, const MeshParams& params);
/// Problem::build on top of cached_mesh.
Problem build_problem_cached(const Configuration& config, const ProblemParams& params);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 14695981039346656037ull);
std::string hex_digest(std::uint64_t h);
std::string file_digest(const std::string& path);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const Json& j);

/// Header plus rows of numbers or strings, written with full precision.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  using Cell = std::variant<double, long long, std::string>;
  void add(std::vector<Cell> row);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;
  void write(const std::string& path) const { write_text(path, str()); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  std::string version;
  std::map<std::string, std::string> input_digests;  // path -> FNV-1a hex
  std::vector<std::string> outputs;

  Json to_json() const;
  /// Writes `<dir>/manifest.json`.
  void write(const std::string& dir) const;
};

/// Library version string.
const char* version_string() noexcept;

}  // namespace z2eig
