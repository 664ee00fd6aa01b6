#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opmax/maxsat.hpp"
#include "opmax/sat_solver.hpp"

namespace opmax {

// Complete internal MaxSAT solve for instances whose soft clauses are unit
// literals. Super-increasing weights (each weight exceeding the sum of all
// smaller ones, as the 2^i objective bits are) are solved by fixing bits
// from the heaviest down; other weight patterns fall back to a depth-first
// branch-and-bound over the soft literals. Deterministic throughout.
SolverResult solve_internal(const MaxSatInstance& inst, double time_limit_seconds);

// Runs an external solver: writes the WCNF to a temporary file, invokes
// `command <wcnf-path>` and parses the evaluation-style output. The command
// may contain extra arguments; OPMAX_TMPDIR overrides the temp directory.
SolverResult run_external(const MaxSatInstance& inst, const std::string& command,
                          double time_limit_seconds, bool legacy_wcnf = false);

// Enumerates assignments of the interest variables that extend to a model
// of the clause set; used as the exhaustive oracle for rule conformance.
// Throws CapExceeded when the projection space is larger than 2^cap.
std::set<std::vector<bool>> sat_enumerate(const std::vector<Clause>& clauses,
                                          const std::vector<int>& interest,
                                          int cap = 26);

}  // namespace opmax
