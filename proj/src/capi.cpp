#include "z2eig.h"

#include "z2eig/error.hpp"
#include "z2eig/studies.hpp"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>

using namespace z2eig;

struct z2eig_problem {
  Problem problem;
};

struct z2eig_spectrum {
  std::shared_ptr<const Problem> problem;
  std::vector<EigenPair> pairs;
};

namespace {

thread_local std::string g_last_error;

static_assert(static_cast<int>(ErrorCode::NoConnectingArc) == Z2EIG_NO_CONNECTING_ARC, "status codes out of sync");
static_assert(static_cast<int>(ErrorCode::Io) == Z2EIG_IO, "status codes out of sync");

int status_of(ErrorCode c) { return static_cast<int>(c); }

template <class F>
int guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return Z2EIG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return Z2EIG_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return Z2EIG_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidInput, what);
}

ProblemParams to_params(const z2eig_mesh_options* o) {
  ProblemParams p;
  if (!o) return p;
  p.mesh.background_count = o->background_count;
  p.mesh.grade_depth = o->grade_depth;
  p.mesh.grade_radius = o->grade_radius;
  p.mesh.min_angle_deg = o->min_angle_deg;
  p.mesh.seed = o->mesh_seed;
  p.cut_seed = o->cut_seed;
  return p;
}

Problem build(const Configuration& c, const z2eig_mesh_options* opts, int twisted) {
  const ProblemParams p = to_params(opts);
  return twisted ? build_problem_cached(c, p) : Problem::untwisted(c, p);
}

const EigenPair& pair_at(const z2eig_spectrum* s, int index) {
  require(s != nullptr, "null spectrum");
  require(index >= 0 && index < static_cast<int>(s->pairs.size()), "eigenpair index out of range");
  return s->pairs[index];
}

}  // namespace

extern "C" {

const char* z2eig_version(void) { return version_string(); }
const char* z2eig_last_error(void) { return g_last_error.c_str(); }

const char* z2eig_status_name(int status) {
  if (status == Z2EIG_INTERNAL) return "Internal";
  if (status < 0 || status > Z2EIG_NO_CONNECTING_ARC) return "Unknown";
  return error_name(static_cast<ErrorCode>(status));
}

int z2eig_status_is_input_error(int status) {
  if (status <= 0 || status > Z2EIG_NO_CONNECTING_ARC) return 0;
  return is_input_error(static_cast<ErrorCode>(status)) ? 1 : 0;
}

void z2eig_mesh_options_default(z2eig_mesh_options* o) {
  if (!o) return;
  const ProblemParams p;
  o->background_count = p.mesh.background_count;
  o->grade_depth = p.mesh.grade_depth;
  o->grade_radius = p.mesh.grade_radius;
  o->min_angle_deg = p.mesh.min_angle_deg;
  o->mesh_seed = p.mesh.seed;
  o->cut_seed = p.cut_seed;
}

void z2eig_solver_options_default(z2eig_solver_options* o) {
  if (!o) return;
  const SolverOptions s;
  o->tol = s.tol;
  o->shift = s.shift;
  o->seed = s.seed;
  o->max_restarts = s.max_restarts;
  o->fallback = s.fallback ? 1 : 0;
}

int z2eig_set_threads(int threads) {
  return guard([&] {
    require(threads >= 1, "threads must be at least 1");
    Eigen::setNbThreads(threads);
  });
}

int z2eig_problem_create(const double* xyz, size_t count, const z2eig_mesh_options* opts, int twisted,
                         z2eig_problem** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    require(xyz != nullptr || count == 0, "null coordinates");
    std::vector<Vec3> pts;
    for (size_t i = 0; i < count; ++i) pts.emplace_back(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
    const Configuration c = count ? make_configuration(pts, 1e-9) : Configuration();
    *out = new z2eig_problem{build(c, opts, twisted)};
  });
}

int z2eig_problem_from_file(const char* path, const z2eig_mesh_options* opts, int twisted, z2eig_problem** out) {
  return guard([&] {
    require(out != nullptr && path != nullptr, "null argument");
    *out = nullptr;
    *out = new z2eig_problem{build(load_configuration(path), opts, twisted)};
  });
}

void z2eig_problem_destroy(z2eig_problem* problem) { delete problem; }

int z2eig_problem_info(const z2eig_problem* p, size_t* points, size_t* vertices, size_t* triangles, size_t* free_dofs) {
  return guard([&] {
    require(p != nullptr, "null problem");
    if (points) *points = p->problem.config().size();
    if (vertices) *vertices = p->problem.mesh().vertex_count();
    if (triangles) *triangles = p->problem.mesh().triangle_count();
    if (free_dofs) *free_dofs = static_cast<size_t>(p->problem.ops().size());
  });
}

int z2eig_problem_points(const z2eig_problem* p, double* xyz, size_t capacity) {
  return guard([&] {
    require(p != nullptr && xyz != nullptr, "null argument");
    const auto& c = p->problem.config();
    require(capacity >= 3 * c.size(), "buffer too small");
    for (size_t i = 0; i < c.size(); ++i)
      for (int d = 0; d < 3; ++d) xyz[3 * i + d] = c[i][d];
  });
}

int z2eig_problem_vertices(const z2eig_problem* p, double* xyz, size_t capacity) {
  return guard([&] {
    require(p != nullptr && xyz != nullptr, "null argument");
    const auto& V = p->problem.mesh().vertices();
    require(capacity >= 3 * V.size(), "buffer too small");
    for (size_t i = 0; i < V.size(); ++i)
      for (int d = 0; d < 3; ++d) xyz[3 * i + d] = V[i][d];
  });
}

int z2eig_problem_write_mesh(const z2eig_problem* p, const char* off_path) {
  return guard([&] {
    require(p != nullptr && off_path != nullptr, "null argument");
    write_mesh(p->problem, off_path);
  });
}

int z2eig_solve(const z2eig_problem* p, int k, const z2eig_solver_options* opts, z2eig_spectrum** out) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    require(k >= 1, "k must be positive");
    SolverOptions so;
    if (opts) {
      so.tol = opts->tol;
      so.shift = opts->shift;
      so.seed = opts->seed;
      so.max_restarts = opts->max_restarts;
      so.fallback = opts->fallback != 0;
    }
    auto shared = std::make_shared<const Problem>(p->problem);
    auto pairs = shared->solve(k, so);
    *out = new z2eig_spectrum{std::move(shared), std::move(pairs)};
  });
}

void z2eig_spectrum_destroy(z2eig_spectrum* s) { delete s; }

int z2eig_spectrum_size(const z2eig_spectrum* s, int* k) {
  return guard([&] {
    require(s != nullptr && k != nullptr, "null argument");
    *k = static_cast<int>(s->pairs.size());
  });
}

int z2eig_spectrum_value(const z2eig_spectrum* s, int index, double* value, double* residual) {
  return guard([&] {
    const EigenPair& e = pair_at(s, index);
    if (value) *value = e.value;
    if (residual) *residual = e.residual;
  });
}

int z2eig_spectrum_vertex_values(const z2eig_spectrum* s, int index, double* out, size_t capacity) {
  return guard([&] {
    const EigenPair& e = pair_at(s, index);
    require(out != nullptr, "null buffer");
    const Vector v = s->problem->vertex_values(e.vector);
    require(capacity >= static_cast<size_t>(v.size()), "buffer too small");
    std::memcpy(out, v.data(), sizeof(double) * v.size());
  });
}

int z2eig_spectrum_write_json(const z2eig_spectrum* s, const char* path) {
  return guard([&] {
    require(s != nullptr && path != nullptr, "null argument");
    write_json(path, spectrum_json(s->pairs));
  });
}

int z2eig_branch_data(const z2eig_spectrum* s, int index, int point, int* n, double* re_a, double* im_a,
                      double* fit_residual) {
  return guard([&] {
    const EigenPair& e = pair_at(s, index);
    require(point >= 0 && point < static_cast<int>(s->problem->config().size()), "point index out of range");
    const BranchData b = extract_branch_data(*s->problem, e.vector, point);
    if (n) *n = b.n;
    if (re_a) *re_a = b.a.real();
    if (im_a) *im_a = b.a.imag();
    if (fit_residual) *fit_residual = b.fit_residual;
  });
}

int z2eig_eigenvalue_gradient(const z2eig_spectrum* s, int index, double* out, size_t capacity) {
  return guard([&] {
    pair_at(s, index);
    require(out != nullptr, "null buffer");
    const size_t N = s->problem->config().size();
    require(capacity >= 3 * N, "buffer too small");
    const auto g = eigenvalue_gradient(*s->problem, s->pairs, index).vectors();
    for (size_t i = 0; i < N; ++i)
      for (int d = 0; d < 3; ++d) out[3 * i + d] = g[i][d];
  });
}

int z2eig_zero_graph(const z2eig_spectrum* s, int index, int* nodes, int* edges, int* components, int* cycles,
                     int* chi, int* chi_closed_form) {
  return guard([&] {
    const EigenPair& e = pair_at(s, index);
    const ZeroGraph g = extract_zero_graph(*s->problem, e.vector);
    const auto ec = euler_characteristic(g, s->problem->config().size());
    if (nodes) *nodes = static_cast<int>(g.nodes.size());
    if (edges) *edges = static_cast<int>(g.edges.size());
    if (components) *components = g.components;
    if (cycles) *cycles = g.cycles;
    if (chi) *chi = ec.combinatorial;
    if (chi_closed_form) *chi_closed_form = ec.closed_form;
  });
}

int z2eig_zero_graph_write_json(const z2eig_spectrum* s, int index, const char* path) {
  return guard([&] {
    const EigenPair& e = pair_at(s, index);
    require(path != nullptr, "null path");
    write_json(path, graph_json(extract_zero_graph(*s->problem, e.vector), s->problem->config().size()));
  });
}

int z2eig_homogeneity_exponent(double lambda, double* mu) {
  return guard([&] {
    require(mu != nullptr, "null output");
    *mu = homogeneity_exponent(lambda);
  });
}

int z2eig_lift_evaluate(const z2eig_spectrum* s, int index, double lambda, int convention, double exclusion,
                        const double* x, double* nu) {
  return guard([&] {
    const EigenPair& e = pair_at(s, index);
    require(x != nullptr && nu != nullptr, "null argument");
    require(convention == Z2EIG_LIFT_HARMONIC || convention == Z2EIG_LIFT_AS_PRINTED, "unknown convention");
    LiftParams lp;
    lp.convention = convention == Z2EIG_LIFT_HARMONIC ? LiftConvention::Harmonic : LiftConvention::AsPrinted;
    lp.exclusion = exclusion;
    const HarmonicLift lift(*s->problem, e.vector, std::isnan(lambda) ? e.value : lambda, lp);
    const Vec3 v = lift.evaluate(Vec3(x[0], x[1], x[2]));
    for (int d = 0; d < 3; ++d) nu[d] = v[d];
  });
}

int z2eig_run_study(const char* name, const char* params_json, char** result_json) {
  return guard([&] {
    require(name != nullptr && result_json != nullptr, "null argument");
    *result_json = nullptr;
    Json params = Json::object();
    if (params_json && *params_json) {
      try {
        params = Json::parse(params_json);
      } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("parameters are not valid JSON: ") + e.what());
      }
    }
    const std::string text = run_study(name, params).dump(2);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *result_json = buf;
  });
}

void z2eig_string_free(char* s) { std::free(s); }

int z2eig_file_digest(const char* path, char out[17]) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "null argument");
    const std::string d = file_digest(path);
    std::memcpy(out, d.c_str(), 17);
  });
}

}  // extern "C"
