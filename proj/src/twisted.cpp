#include "z2eig/twisted.hpp"

#include "z2eig/error.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

namespace z2eig {

namespace {

std::vector<std::pair<int, int>> greedy_matching(const Configuration& config, std::mt19937_64* shuffle) {
  const int n = static_cast<int>(config.size());
  std::vector<std::tuple<double, int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(geodesic_distance(config[i], config[j]), i, j);
  std::sort(pairs.begin(), pairs.end());
  if (shuffle) {
    // perturb the order by swapping random nearby candidates
    for (std::size_t k = 0; k + 1 < pairs.size(); ++k)
      if ((*shuffle)() % 3 == 0) std::swap(pairs[k], pairs[k + 1]);
  }
  std::vector<char> used(n, 0);
  std::vector<std::pair<int, int>> out;
  for (const auto& [d, i, j] : pairs)
    if (!used[i] && !used[j]) {
      used[i] = used[j] = 1;
      out.emplace_back(i, j);
    }
  return out;
}

// Hop-shortest path from `from` to `to` avoiding blocked vertices and the
// direct edge; shortest paths have no chords.
std::vector<int> shortest_path(const SphericalMesh& mesh, int from, int to, const std::vector<char>& blocked) {
  const int nv = static_cast<int>(mesh.vertex_count());
  std::vector<int> parent(nv, -2);
  std::deque<int> queue{from};
  parent[from] = -1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (const auto& s : mesh.star(v)) {
      const int w = s.vertex;
      if (parent[w] != -2) continue;
      if (v == from && w == to) continue;
      if (w != to && blocked[w]) continue;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  if (parent[to] == -2) return {};
  std::vector<int> path;
  for (int v = to; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

// Flips of a single path, accumulated into sigma.
void flip_left_edges(const SphericalMesh& mesh, const CutPath& path, std::vector<signed char>& sigma) {
  const auto& pv = path.vertices;
  for (std::size_t i = 1; i + 1 < pv.size(); ++i) {
    const auto& st = mesh.star(pv[i]);
    const int deg = static_cast<int>(st.size());
    int next = -1, prev = -1;
    for (int k = 0; k < deg; ++k) {
      if (st[k].vertex == pv[i + 1]) next = k;
      if (st[k].vertex == pv[i - 1]) prev = k;
    }
    // counter-clockwise from the forward neighbour to the backward one is the left side
    for (int k = (next + 1) % deg; k != prev; k = (k + 1) % deg) sigma[st[k].edge] = static_cast<signed char>(-sigma[st[k].edge]);
  }
}

int link_holonomy(const SphericalMesh& mesh, int v, const std::vector<signed char>& sigma) {
  const auto& st = mesh.star(v);
  int h = 1;
  for (std::size_t k = 0; k < st.size(); ++k) {
    const int e = mesh.find_edge(st[k].vertex, st[(k + 1) % st.size()].vertex);
    h *= sigma[e];
  }
  return h;
}

}  // namespace

CutSystem build_cut_system(const Configuration& config, const SphericalMesh& mesh, std::uint64_t order_seed) {
  const int n = static_cast<int>(config.size());
  CutSystem cut;
  cut.partner.assign(n, -1);
  if (n == 0) return cut;
  if (mesh.config_vertex().size() != config.size())
    throw Error(ErrorCode::InvalidInput, "mesh does not conform to configuration");

  std::mt19937_64 rng(order_seed);
  const int attempts = 12;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    auto matching = greedy_matching(config, attempt >= 6 ? &rng : nullptr);
    if (attempt > 0 && attempt < 6) std::shuffle(matching.begin(), matching.end(), rng);
    std::vector<char> blocked(mesh.vertex_count(), 0);
    for (int v : mesh.config_vertex()) blocked[v] = 1;
    std::vector<CutPath> paths;
    bool ok = true;
    for (const auto& [i, j] : matching) {
      const int a = mesh.config_vertex()[i], b = mesh.config_vertex()[j];
      auto path = shortest_path(mesh, a, b, blocked);
      if (path.size() < 3) {
        ok = false;
        break;
      }
      for (int v : path) blocked[v] = 1;
      paths.push_back({i, j, std::move(path)});
    }
    if (!ok) continue;
    cut.paths = std::move(paths);
    for (const auto& p : cut.paths) {
      cut.partner[p.point_a] = p.point_b;
      cut.partner[p.point_b] = p.point_a;
    }
    std::vector<signed char> sigma(mesh.edges().size(), 1);
    for (const auto& p : cut.paths) flip_left_edges(mesh, p, sigma);
    for (std::size_t e = 0; e < sigma.size(); ++e)
      if (sigma[e] < 0) cut.crossing_edges.push_back(static_cast<int>(e));
    return cut;
  }
  throw Error(ErrorCode::MatchingFailed, "no pairing order produced disjoint cut paths");
}

int SignCochain::holonomy(const SphericalMesh& mesh, const std::vector<int>& loop) const {
  int h = 1;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const int e = mesh.find_edge(loop[k], loop[(k + 1) % loop.size()]);
    if (e < 0) throw Error(ErrorCode::InvalidInput, "loop is not an edge cycle");
    h *= sigma[e];
  }
  return h;
}

SignCochain edge_signs(const CutSystem& cut, const SphericalMesh& mesh) {
  SignCochain sc;
  sc.sigma.assign(mesh.edges().size(), 1);
  for (const auto& p : cut.paths) {
    if (p.vertices.size() < 3 || !mesh.flagged(p.vertices.front()) || !mesh.flagged(p.vertices.back()))
      throw Error(ErrorCode::HolonomyViolation, "cut path must join two configuration points through free vertices");
    std::vector<signed char> own(mesh.edges().size(), 1);
    flip_left_edges(mesh, p, own);
    for (int end : {p.vertices.front(), p.vertices.back()})
      if (link_holonomy(mesh, end, own) != -1)
        throw Error(ErrorCode::HolonomyViolation, "monodromy around a path endpoint is not -1");
    for (std::size_t e = 0; e < own.size(); ++e) sc.sigma[e] = static_cast<signed char>(sc.sigma[e] * own[e]);
  }
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tr = mesh.triangles()[t];
    if (mesh.flagged(tr[0]) || mesh.flagged(tr[1]) || mesh.flagged(tr[2])) continue;
    int h = 1;
    for (int k = 0; k < 3; ++k) h *= sc.sigma[mesh.triangle_edge(static_cast<int>(t), k)];
    if (h != 1) throw Error(ErrorCode::HolonomyViolation, "triangle " + std::to_string(t) + " is not flat");
  }
  // The link of a configuration point is a loop around it alone only when no
  // other configuration point sits on the link; those are covered by the
  // per-path checks above.
  for (int v : mesh.config_vertex()) {
    bool isolated = true;
    for (const auto& s : mesh.star(v)) isolated = isolated && !mesh.flagged(s.vertex);
    if (isolated && link_holonomy(mesh, v, sc.sigma) != -1)
      throw Error(ErrorCode::HolonomyViolation, "monodromy around configuration vertex " + std::to_string(v));
  }
  return sc;
}

SignCochain trivial_signs(const SphericalMesh& mesh) {
  SignCochain sc;
  sc.sigma.assign(mesh.edges().size(), 1);
  return sc;
}

Vector TwistedOperators::to_vertices(const Vector& f) const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(vertex_to_free.size()));
  for (int i = 0; i < size(); ++i) out[free_to_vertex[i]] = f[i];
  return out;
}

Vector TwistedOperators::to_free(const Vector& vertex_values) const {
  Vector out(size());
  for (int i = 0; i < size(); ++i) out[i] = vertex_values[free_to_vertex[i]];
  return out;
}

TwistedOperators assemble(const SphericalMesh& mesh, const SignCochain& signs, const AssemblyOptions& opts) {
  if (signs.sigma.size() != mesh.edges().size()) throw Error(ErrorCode::InvalidInput, "sign cochain size mismatch");
  const int nv = static_cast<int>(mesh.vertex_count());
  std::vector<char> pinned(nv, 0);
  if (opts.pin_configuration)
    for (int v : mesh.config_vertex()) pinned[v] = 1;
  for (int v : opts.extra_pinned) {
    if (v < 0 || v >= nv) throw Error(ErrorCode::InvalidInput, "pinned vertex out of range");
    pinned[v] = 1;
  }
  TwistedOperators ops;
  ops.vertex_to_free.assign(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (!pinned[v]) {
      ops.vertex_to_free[v] = static_cast<int>(ops.free_to_vertex.size());
      ops.free_to_vertex.push_back(v);
    }
  const int nf = static_cast<int>(ops.free_to_vertex.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.edges().size() * 4);
  int negative = 0;
  for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
    const Edge& ed = mesh.edges()[e];
    const double w = ed.cot_weight;
    if (w < 0.0) ++negative;
    const int i = ops.vertex_to_free[ed.a], j = ops.vertex_to_free[ed.b];
    if (i >= 0) trip.emplace_back(i, i, w);
    if (j >= 0) trip.emplace_back(j, j, w);
    if (i >= 0 && j >= 0) {
      trip.emplace_back(i, j, -w * signs[static_cast<int>(e)]);
      trip.emplace_back(j, i, -w * signs[static_cast<int>(e)]);
    }
  }
  ops.stiffness.resize(nf, nf);
  ops.stiffness.setFromTriplets(trip.begin(), trip.end());
  ops.stiffness.makeCompressed();
  ops.mass.resize(nf);
  for (int i = 0; i < nf; ++i) ops.mass[i] = mesh.vertex_area()[ops.free_to_vertex[i]];
  ops.negative_weight_fraction = mesh.edges().empty() ? 0.0 : static_cast<double>(negative) / mesh.edges().size();
  return ops;
}

double energy(const Vector& f, const TwistedOperators& ops) { return f.dot(ops.stiffness * f); }

double mass_norm2(const Vector& f, const TwistedOperators& ops) { return f.dot(ops.mass.cwiseProduct(f)); }

double hilbert_norm(const Vector& f, const TwistedOperators& ops) { return energy(f, ops) + mass_norm2(f, ops); }

double rayleigh(const Vector& f, const TwistedOperators& ops) {
  const double m = mass_norm2(f, ops);
  if (!(m > 0.0)) throw Error(ErrorCode::ZeroSection, "section has zero mass norm");
  return energy(f, ops) / m;
}

}  // namespace z2eig
