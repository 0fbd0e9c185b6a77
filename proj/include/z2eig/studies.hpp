#pragma once

// JSON-parameterized drivers for the studies, shared by the C interface and
// the command-line tool. Parameter and result schemas are in docs/formats.md.

#include "z2eig/experiments.hpp"
#include "z2eig/io.hpp"
#include "z2eig/lift.hpp"

namespace z2eig {

/// Mesh and solver blocks of a parameter object, with defaults for absent
/// keys. Unknown keys are rejected (InvalidInput).
ProblemParams problem_params_from_json(const Json& params, const MeshParams& defaults = {});
SolverOptions solver_options_from_json(const Json& params);

/// "points" (inline array) or "points_file" (path) of a parameter object.
Configuration configuration_from_json(const Json& params);

/// Runs one of "sweep_c2", "gradcheck", "flow", "packing", "coalesce",
/// "nodal", "lift". Each result carries an "assertions" object of named
/// booleans for --assert.
Json run_study(const std::string& name, const Json& params);

}  // namespace z2eig
