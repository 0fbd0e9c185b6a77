#include "z2eig/nodal.hpp"

#include "z2eig/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace z2eig {

int ZeroGraph::branch_nodes() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const ZeroNode& n) { return n.kind == NodeKind::Branch; }));
}

int ZeroGraph::critical_nodes() const {
  return static_cast<int>(nodes.size()) - branch_nodes();
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

ZeroGraph extract(const Problem& problem, const Vector& f, double eps) {
  const SphericalMesh& mesh = problem.mesh();
  const int nv = static_cast<int>(mesh.vertex_count());
  const Vector fv = problem.vertex_values(f);
  const double fmax = fv.cwiseAbs().maxCoeff();
  if (!(fmax > 0.0)) throw Error(ErrorCode::ZeroSection, "section vanishes identically");
  const auto& vtf = problem.ops().vertex_to_free;
  std::vector<char> zero(nv);
  for (int v = 0; v < nv; ++v) zero[v] = vtf[v] < 0 || std::abs(fv[v]) <= eps * fmax;

  // clusters of adjacent near-zero vertices
  DisjointSets ds(nv);
  const auto& edges = mesh.edges();
  for (const auto& e : edges)
    if (zero[e.a] && zero[e.b]) ds.unite(e.a, e.b);
  std::vector<int> cluster_of(nv, -1), cluster_rep;
  for (int v = 0; v < nv; ++v) {
    if (!zero[v]) continue;
    const int r = ds.find(v);
    if (cluster_of[r] < 0) {
      cluster_of[r] = static_cast<int>(cluster_rep.size());
      cluster_rep.push_back(v);
    }
    cluster_of[v] = cluster_of[r];
  }
  const int C = static_cast<int>(cluster_rep.size());

  auto crossing = [&](int e) {
    const auto& ed = edges[e];
    return !zero[ed.a] && !zero[ed.b] && fv[ed.a] * problem.signs()[e] * fv[ed.b] < 0.0;
  };
  // raw nodes: clusters 0..C-1, crossing points C + k
  std::unordered_map<int, int> edge_point;
  std::vector<Vec3> raw_pos;
  std::vector<int> raw_carrier;
  for (int c = 0; c < C; ++c) {
    raw_pos.push_back(mesh.vertices()[cluster_rep[c]]);
    raw_carrier.push_back(-(cluster_rep[c] + 1));
  }
  auto point_of = [&](int e) {
    auto it = edge_point.find(e);
    if (it != edge_point.end()) return it->second;
    const auto& ed = edges[e];
    const double a = std::abs(fv[ed.a]), b = std::abs(fv[ed.b]);
    const double t = a / (a + b);
    const int id = static_cast<int>(raw_pos.size());
    raw_pos.push_back(((1.0 - t) * mesh.vertices()[ed.a] + t * mesh.vertices()[ed.b]).normalized());
    raw_carrier.push_back(e);
    edge_point.emplace(e, id);
    return id;
  };

  std::vector<std::pair<int, int>> segments;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto& tr = mesh.triangles()[t];
    int nz = 0, zk = -1;
    for (int k = 0; k < 3; ++k)
      if (zero[tr[k]]) ++nz, zk = k;
    if (nz == 0) {
      int pts[3], m = 0;
      for (int k = 0; k < 3; ++k) {
        const int e = mesh.triangle_edge(t, k);
        if (crossing(e)) pts[m++] = point_of(e);
      }
      if (m == 2) segments.emplace_back(pts[0], pts[1]);
      else if (m != 0) throw Error(ErrorCode::HolonomyViolation, "triangle with an odd number of sign changes");
    } else if (nz == 1) {
      const int e = mesh.triangle_edge(t, (zk + 1) % 3);
      if (crossing(e)) segments.emplace_back(cluster_of[tr[zk]], point_of(e));
    }
  }

  const int R = static_cast<int>(raw_pos.size());
  std::vector<std::vector<int>> inc(R);
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    inc[segments[s].first].push_back(s);
    inc[segments[s].second].push_back(s);
  }

  ZeroGraph g;
  std::vector<int> node_of(R, -1);
  // flagged vertices per cluster
  std::vector<int> cluster_point(C, -1);
  for (int v = 0; v < nv; ++v) {
    if (!mesh.flagged(v) || cluster_of[v] < 0) continue;
    if (cluster_point[cluster_of[v]] >= 0)
      throw Error(ErrorCode::UnresolvedNode, "two branch points merged into one zero cluster");
    cluster_point[cluster_of[v]] = mesh.flag()[v];
  }
  for (int c = 0; c < C; ++c) {
    const int deg = static_cast<int>(inc[c].size());
    ZeroNode n;
    n.position = raw_pos[c];
    n.degree = deg;
    n.vertex = cluster_rep[c];
    if (cluster_point[c] >= 0) {
      n.kind = NodeKind::Branch;
      n.point = cluster_point[c];
      if (deg % 2 == 0)
        throw Error(ErrorCode::UnresolvedNode, "branch point " + std::to_string(n.point) + " has even degree " + std::to_string(deg));
    } else {
      if (deg == 0 || deg == 2) continue;
      if (deg % 2 == 1)
        throw Error(ErrorCode::UnresolvedNode, "interior zero at vertex " + std::to_string(n.vertex) + " has odd degree " + std::to_string(deg));
      n.kind = NodeKind::Critical;
    }
    node_of[c] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(n);
  }
  std::sort(g.nodes.begin(), g.nodes.end(), [](const ZeroNode& a, const ZeroNode& b) {
    if (a.kind != b.kind) return a.kind == NodeKind::Branch;
    return a.kind == NodeKind::Branch ? a.point < b.point : a.vertex < b.vertex;
  });
  for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
    const int v = g.nodes[i].vertex;
    node_of[cluster_of[v]] = i;
  }

  // follow chains of joints between nodes
  std::vector<char> used(segments.size(), 0);
  auto other = [&](int s, int r) { return segments[s].first == r ? segments[s].second : segments[s].first; };
  auto walk = [&](int start, int s0) {
    ZeroEdge e;
    e.polyline.push_back(raw_pos[start]);
    e.carriers.push_back(raw_carrier[start]);
    int r = start, s = s0;
    while (true) {
      used[s] = 1;
      r = other(s, r);
      e.polyline.push_back(raw_pos[r]);
      e.carriers.push_back(raw_carrier[r]);
      if (node_of[r] >= 0 || r == start) break;
      int next = -1;
      for (int t : inc[r])
        if (!used[t]) next = t;
      if (next < 0) break;
      s = next;
    }
    return std::make_pair(e, r);
  };
  const int nn = static_cast<int>(g.nodes.size());
  DisjointSets comp(std::max(nn, 1));
  for (int i = 0; i < nn; ++i) {
    const int r0 = cluster_of[g.nodes[i].vertex];
    for (int s : inc[r0]) {
      if (used[s]) continue;
      auto [e, end] = walk(r0, s);
      if (node_of[end] < 0) throw Error(ErrorCode::UnresolvedNode, "zero arc ends away from a node");
      e.from = i;
      e.to = node_of[end];
      comp.unite(e.from, e.to);
      g.edges.push_back(std::move(e));
    }
  }
  int loops = 0;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    if (used[s]) continue;
    auto [e, end] = walk(segments[s].first, s);
    (void)end;
    g.edges.push_back(std::move(e));
    ++loops;
  }
  int roots = 0;
  for (int i = 0; i < nn; ++i)
    if (comp.find(i) == i) ++roots;
  g.components = roots + loops;
  const int node_edges = static_cast<int>(g.edges.size()) - loops;
  g.cycles = node_edges - nn + roots + loops;
  return g;
}

std::string summary(const ZeroGraph& g) {
  std::ostringstream os;
  os << "degrees [";
  for (const auto& n : g.nodes) os << (n.kind == NodeKind::Branch ? "p" : "c") << n.degree << ' ';
  os << "] components " << g.components << " cycles " << g.cycles;
  return os.str();
}

}  // namespace

ZeroGraph extract_zero_graph(const Problem& problem, const Vector& f, const NodalParams& params) {
  if (!(params.eps_z >= 0.0 && params.eps_z < 0.1)) throw Error(ErrorCode::InvalidInput, "eps_z out of range");
  ZeroGraph g = extract(problem, f, params.eps_z);
  if (params.perturbation_check) {
    std::string a = summary(g), b;
    try {
      b = summary(extract(problem, f, 10.0 * params.eps_z));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnresolvedNode) throw;
      b = e.what();
    }
    if (a != b) throw Error(ErrorCode::UnresolvedNode, "eps_z reading: " + a + "; 10 eps_z reading: " + b);
  }
  return g;
}

EulerCharacteristic euler_characteristic(const ZeroGraph& graph, std::size_t config_size) {
  EulerCharacteristic ec;
  int loops = 0;
  for (const auto& e : graph.edges)
    if (e.from < 0) ++loops;
  ec.combinatorial = static_cast<int>(graph.nodes.size()) - (static_cast<int>(graph.edges.size()) - loops);
  int branch_sum = 0, critical_sum = 0, critical = 0;
  for (const auto& n : graph.nodes) {
    if (n.kind == NodeKind::Branch) branch_sum += n.degree;
    else critical_sum += n.degree, ++critical;
  }
  // 2n + |c| - (1/2) sum (2 n_p + 1) - (1/2) sum 2 m_c, with doubled integers
  const int twice = 2 * static_cast<int>(config_size) + 2 * critical - branch_sum - critical_sum;
  if (twice % 2 != 0) throw Error(ErrorCode::InvalidInput, "node degrees have an odd sum");
  ec.closed_form = twice / 2;
  return ec;
}

VanishingCensus vanishing_census(const ZeroGraph& graph, std::size_t config_size, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidInput, "k must be at least 1");
  VanishingCensus vc;
  vc.orders.assign(config_size, -1);
  for (const auto& n : graph.nodes)
    if (n.kind == NodeKind::Branch && n.point >= 0 && n.point < static_cast<int>(config_size)) {
      vc.orders[n.point] = (n.degree - 1) / 2;
      if (n.degree == 1) ++vc.vanishing;
    }
  const int n = static_cast<int>(config_size) / 2;
  vc.required = k == 1 ? n + 1 : std::max(0, n + 1 - k);
  vc.has_cycles = graph.cycles > 0;
  vc.pass = vc.vanishing >= vc.required && (k != 1 || !vc.has_cycles);
  return vc;
}

}  // namespace z2eig
