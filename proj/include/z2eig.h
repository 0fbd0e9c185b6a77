#ifndef Z2EIG_H
#define Z2EIG_H

/* C interface to the twisted Laplacian library. Every function returns a
 * status code; z2eig_last_error() holds the message of the most recent
 * failure on the calling thread. Handles are opaque and must be released
 * with the matching destroy function. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define Z2EIG_API __declspec(dllexport)
#else
#define Z2EIG_API __attribute__((visibility("default")))
#endif

typedef enum z2eig_status {
  Z2EIG_OK = 0,
  Z2EIG_INVALID_INPUT,
  Z2EIG_ODD_COUNT,
  Z2EIG_DUPLICATE_POINT,
  Z2EIG_NOT_UNIT,
  Z2EIG_SUPPORT_COLLISION,
  Z2EIG_NEGATIVE_EIGENVALUE,
  Z2EIG_ON_BRANCH_RAY,
  Z2EIG_IO,
  Z2EIG_MESH_DEGENERATE,
  Z2EIG_MATCHING_FAILED,
  Z2EIG_HOLONOMY_VIOLATION,
  Z2EIG_MESH_REBUILD_FAILED,
  Z2EIG_ZERO_SECTION,
  Z2EIG_NO_CONVERGENCE,
  Z2EIG_INSUFFICIENT_SAMPLES,
  Z2EIG_AMBIGUOUS_ORDER,
  Z2EIG_EXTRACTION_FAILED,
  Z2EIG_DEGENERATE_CLUSTER,
  Z2EIG_BRANCH_SWAP,
  Z2EIG_UNRESOLVED_NODE,
  Z2EIG_NO_CONNECTING_ARC,
  Z2EIG_INTERNAL = 100
} z2eig_status;

typedef struct z2eig_problem z2eig_problem;
typedef struct z2eig_spectrum z2eig_spectrum;

typedef struct z2eig_mesh_options {
  int background_count; /* Fibonacci background points */
  int grade_depth;      /* graded refinement rounds */
  double grade_radius;  /* radians */
  double min_angle_deg; /* quality gate */
  uint64_t mesh_seed;
  uint64_t cut_seed;
} z2eig_mesh_options;

typedef struct z2eig_solver_options {
  double tol;
  double shift;
  uint64_t seed;
  int max_restarts;
  int fallback; /* nonzero: LOBPCG when Lanczos fails */
} z2eig_solver_options;

typedef enum z2eig_lift_convention { Z2EIG_LIFT_HARMONIC = 0, Z2EIG_LIFT_AS_PRINTED = 1 } z2eig_lift_convention;

Z2EIG_API const char* z2eig_version(void);
Z2EIG_API const char* z2eig_last_error(void);
Z2EIG_API const char* z2eig_status_name(int status);
/* 1 when the status reports bad input rather than a numerical failure. */
Z2EIG_API int z2eig_status_is_input_error(int status);

Z2EIG_API void z2eig_mesh_options_default(z2eig_mesh_options* opts);
Z2EIG_API void z2eig_solver_options_default(z2eig_solver_options* opts);

/* Number of threads for parallel sections; 1 (the default) is deterministic. */
Z2EIG_API int z2eig_set_threads(int threads);

/* `xyz` holds 3 * count coordinates. `twisted` = 0 builds the plain
 * Laplacian on a mesh conforming to the points (count may then be 0). */
Z2EIG_API int z2eig_problem_create(const double* xyz, size_t count, const z2eig_mesh_options* opts, int twisted,
                                   z2eig_problem** out);
/* Reads {"points": [[x, y, z], ...]}. */
Z2EIG_API int z2eig_problem_from_file(const char* path, const z2eig_mesh_options* opts, int twisted,
                                      z2eig_problem** out);
Z2EIG_API void z2eig_problem_destroy(z2eig_problem* problem);
Z2EIG_API int z2eig_problem_info(const z2eig_problem* problem, size_t* points, size_t* vertices, size_t* triangles,
                                 size_t* free_dofs);
Z2EIG_API int z2eig_problem_points(const z2eig_problem* problem, double* xyz, size_t capacity);
/* Mesh vertex positions, 3 * vertices doubles. */
Z2EIG_API int z2eig_problem_vertices(const z2eig_problem* problem, double* xyz, size_t capacity);
/* OFF file plus a `<path>.json` sidecar. */
Z2EIG_API int z2eig_problem_write_mesh(const z2eig_problem* problem, const char* off_path);

Z2EIG_API int z2eig_solve(const z2eig_problem* problem, int k, const z2eig_solver_options* opts,
                          z2eig_spectrum** out);
Z2EIG_API void z2eig_spectrum_destroy(z2eig_spectrum* spectrum);
Z2EIG_API int z2eig_spectrum_size(const z2eig_spectrum* spectrum, int* k);
Z2EIG_API int z2eig_spectrum_value(const z2eig_spectrum* spectrum, int index, double* value, double* residual);
/* Section values at every mesh vertex (zero at pinned vertices). */
Z2EIG_API int z2eig_spectrum_vertex_values(const z2eig_spectrum* spectrum, int index, double* out, size_t capacity);
Z2EIG_API int z2eig_spectrum_write_json(const z2eig_spectrum* spectrum, const char* path);

/* Leading coefficient a of Re(a z^{n+1/2}) at configuration point `point`. */
Z2EIG_API int z2eig_branch_data(const z2eig_spectrum* spectrum, int index, int point, int* n, double* re_a,
                                double* im_a, double* fit_residual);
/* Gradient of a simple eigenvalue as one tangent vector per point
 * (3 * points doubles). */
Z2EIG_API int z2eig_eigenvalue_gradient(const z2eig_spectrum* spectrum, int index, double* out, size_t capacity);

Z2EIG_API int z2eig_zero_graph(const z2eig_spectrum* spectrum, int index, int* nodes, int* edges, int* components,
                               int* cycles, int* chi, int* chi_closed_form);
Z2EIG_API int z2eig_zero_graph_write_json(const z2eig_spectrum* spectrum, int index, const char* path);

Z2EIG_API int z2eig_homogeneity_exponent(double lambda, double* mu);
/* nu(x) of the lift of eigensection `index` with eigenvalue `lambda`; NAN
 * uses the computed eigenvalue. */
Z2EIG_API int z2eig_lift_evaluate(const z2eig_spectrum* spectrum, int index, double lambda, int convention,
                                  double exclusion, const double* x, double* nu);

/* Studies take a JSON parameter block and return a JSON result in a string
 * owned by the caller (release with z2eig_string_free). Names: "sweep_c2",
 * "gradcheck", "flow", "packing", "coalesce", "nodal", "lift".
 * See docs/formats.md. */
Z2EIG_API int z2eig_run_study(const char* name, const char* params_json, char** result_json);
Z2EIG_API void z2eig_string_free(char* s);

/* 64-bit FNV-1a digest of a file as 16 hex digits plus a terminator. */
Z2EIG_API int z2eig_file_digest(const char* path, char out[17]);

#ifdef __cplusplus
}
#endif

#endif
