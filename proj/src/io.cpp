#include "z2eig/io.hpp"

#include "z2eig/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace z2eig {

namespace fs = std::filesystem;

const char* version_string() noexcept { return "1.0.0"; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "short write to '" + path + "'");
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::uint64_t fnv1a(std::string_view data, std::uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::string& path) { return hex_digest(fnv1a(read_text(path))); }

// ---------------------------------------------------------------------------

Configuration parse_configuration(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw Error(ErrorCode::InvalidInput, "configuration needs a \"points\" array");
  std::vector<Vec3> pts;
  for (const auto& p : j["points"]) {
    if (!p.is_array() || p.size() != 3) throw Error(ErrorCode::InvalidInput, "each point must be [x, y, z]");
    for (const auto& c : p)
      if (!c.is_number()) throw Error(ErrorCode::InvalidInput, "point coordinates must be numbers");
    pts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
  }
  return make_configuration(pts, 1e-9);
}

Configuration load_configuration(const std::string& path) { return parse_configuration(read_text(path)); }

Json configuration_json(const Configuration& config) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < config.size(); ++i) pts.push_back({config[i].x(), config[i].y(), config[i].z()});
  return Json{{"points", pts}};
}

Json spectrum_json(const std::vector<EigenPair>& pairs, double rel_gap) {
  Json ev = Json::array(), res = Json::array(), cl = Json::array();
  for (const auto& p : pairs) {
    ev.push_back(p.value);
    res.push_back(p.residual);
  }
  for (const auto& c : cluster_multiplicities_relative(values_of(pairs), rel_gap))
    cl.push_back({{"value", c.value}, {"multiplicity", c.multiplicity()}});
  return Json{{"eigenvalues", ev}, {"residuals", res}, {"clusters", cl}};
}

std::vector<double> spectrum_values(const Json& spectrum) {
  if (!spectrum.is_object() || !spectrum.contains("eigenvalues") || !spectrum["eigenvalues"].is_array())
    throw Error(ErrorCode::InvalidInput, "spectrum needs an \"eigenvalues\" array");
  std::vector<double> v;
  for (const auto& x : spectrum["eigenvalues"]) {
    if (!x.is_number()) throw Error(ErrorCode::InvalidInput, "eigenvalues must be numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

namespace {

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

}  // namespace

Json branch_report_json(const std::vector<BranchData>& data) {
  Json out = Json::array();
  for (const auto& b : data)
    out.push_back({{"point", b.point},
                   {"n_p", b.n},
                   {"re_a", b.a.real()},
                   {"im_a", b.a.imag()},
                   {"residual", b.fit_residual},
                   {"samples", b.samples},
                   {"frame", {{"p", vec_json(b.p)}, {"e1", vec_json(b.e1)}, {"e2", vec_json(b.e2)}}}});
  return out;
}

Json graph_json(const ZeroGraph& graph, std::size_t config_size) {
  Json nodes = Json::array(), edges = Json::array();
  for (const auto& n : graph.nodes)
    nodes.push_back({{"position", vec_json(n.position)},
                     {"kind", n.kind == NodeKind::Branch ? "branch" : "critical"},
                     {"degree", n.degree},
                     {"point", n.point}});
  for (const auto& e : graph.edges) {
    Json poly = Json::array();
    for (const auto& p : e.polyline) poly.push_back(vec_json(p));
    edges.push_back({{"from", e.from}, {"to", e.to}, {"polyline", poly}});
  }
  const auto chi = euler_characteristic(graph, config_size);
  return Json{{"nodes", nodes},
              {"edges", edges},
              {"summary",
               {{"components", graph.components},
                {"cycles", graph.cycles},
                {"chi", chi.combinatorial},
                {"chi_closed_form", chi.closed_form}}}};
}

// ---------------------------------------------------------------------------

namespace {

void write_off(const SphericalMesh& m, const std::string& off_path) {
  std::string s = "OFF\n" + std::to_string(m.vertex_count()) + " " + std::to_string(m.triangle_count()) + " 0\n";
  char buf[96];
  for (const Vec3& v : m.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    s += buf;
  }
  for (const auto& t : m.triangles()) s += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  write_text(off_path, s);
}

}  // namespace

void write_mesh(const Problem& problem, const std::string& off_path) {
  const SphericalMesh& m = problem.mesh();
  write_off(m, off_path);
  Json paths = Json::array();
  for (const auto& p : problem.cut().paths) paths.push_back({{"points", {p.point_a, p.point_b}}, {"vertices", p.vertices}});
  Json flipped = Json::array();
  for (std::size_t e = 0; e < m.edges().size(); ++e)
    if (problem.signs()[static_cast<int>(e)] < 0) flipped.push_back({m.edges()[e].a, m.edges()[e].b});
  write_json(off_path + ".json", Json{{"config_vertex", m.config_vertex()},
                                      {"twisted", problem.twisted()},
                                      {"cut_paths", paths},
                                      {"negative_edges", flipped}});
}

SphericalMesh read_mesh(const std::string& off_path) {
  std::istringstream in(read_text(off_path));
  std::string magic;
  std::size_t nv = 0, nt = 0, ne = 0;
  in >> magic >> nv >> nt >> ne;
  if (magic != "OFF" || !in) throw Error(ErrorCode::Io, "'" + off_path + "' is not an OFF file");
  std::vector<Vec3> V(nv);
  for (auto& v : V) in >> v.x() >> v.y() >> v.z();
  std::vector<Triangle> T(nt);
  for (auto& t : T) {
    int k = 0;
    in >> k >> t[0] >> t[1] >> t[2];
    if (k != 3) throw Error(ErrorCode::Io, "only triangles are supported");
  }
  if (!in) throw Error(ErrorCode::Io, "truncated OFF file '" + off_path + "'");
  const Json side = Json::parse(read_text(off_path + ".json"));
  return SphericalMesh::from_triangulation(std::move(V), std::move(T), side.at("config_vertex").get<std::vector<int>>());
}

namespace {

std::string mesh_key(const Configuration& config, const MeshParams& p) {
  std::string blob;
  auto add = [&](const void* d, std::size_t n) { blob.append(static_cast<const char*>(d), n); };
  for (std::size_t i = 0; i < config.size(); ++i) add(config[i].data(), 3 * sizeof(double));
  add(&p.background_count, sizeof p.background_count);
  add(&p.grade_depth, sizeof p.grade_depth);
  add(&p.grade_radius, sizeof p.grade_radius);
  add(&p.min_angle_deg, sizeof p.min_angle_deg);
  add(p.rotation.data(), 9 * sizeof(double));
  add(&p.seed, sizeof p.seed);
  return hex_digest(fnv1a(blob));
}

}  // namespace

SphericalMesh cached_mesh(const Configuration& config, const MeshParams& params) {
  const char* dir = std::getenv("Z2EIG_CACHE_DIR");
  if (!dir || !*dir) return build_mesh(config, params);
  const std::string path = (fs::path(dir) / ("mesh-" + mesh_key(config, params) + ".off")).string();
  if (fs::exists(path) && fs::exists(path + ".json")) {
    try {
      return read_mesh(path);
    } catch (const std::exception&) {
      // unreadable cache entries are rebuilt
    }
  }
  SphericalMesh mesh = build_mesh(config, params);
  write_off(mesh, path);
  write_json(path + ".json", Json{{"config_vertex", mesh.config_vertex()}});
  return mesh;
}

Problem build_problem_cached(const Configuration& config, const ProblemParams& params) {
  if (config.size() == 0) throw Error(ErrorCode::InvalidInput, "twisted problem needs at least one pair");
  SphericalMesh mesh = cached_mesh(config, params.mesh);
  CutSystem cut = build_cut_system(config, mesh, params.cut_seed);
  return Problem::from_parts(config, std::move(mesh), std::move(cut), params);
}

// ---------------------------------------------------------------------------

void CsvTable::add(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw Error(ErrorCode::InvalidInput, "CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string s;
  for (std::size_t i = 0; i < header_.size(); ++i) s += (i ? "," : "") + header_[i];
  s += "\n";
  char buf[64];
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ",";
      if (const double* d = std::get_if<double>(&row[i])) {
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        s += buf;
      } else if (const long long* n = std::get_if<long long>(&row[i])) {
        s += std::to_string(*n);
      } else {
        s += std::get<std::string>(row[i]);
      }
    }
    s += "\n";
  }
  return s;
}

Json RunManifest::to_json() const {
  Json digests = Json::object();
  for (const auto& [k, v] : input_digests) digests[k] = v;
  return Json{{"command", command},
              {"parameters", parameters},
              {"seed", seed},
              {"version", version.empty() ? std::string(version_string()) : version},
              {"input_digests", digests},
              {"outputs", outputs}};
}

void RunManifest::write(const std::string& dir) const { write_json((fs::path(dir) / "manifest.json").string(), to_json()); }

}  // namespace z2eig
