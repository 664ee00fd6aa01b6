#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opmax/bitvec.hpp"
#include "opmax/ground.hpp"

namespace opmax {

using ValueMap = std::map<VarKey, Rat>;

struct ConstraintVerdict {
  bool satisfied = false;
  std::string text;  // violated constraints carry evaluated sides
};

struct FeasibilityReport {
  std::vector<ConstraintVerdict> verdicts;
  bool feasible = false;
  Rat objective;
};

// Exact rational evaluation; floor/ceil/indicator by standard semantics.
Rat evaluate_numeric(const GExpr& expr, const ValueMap& values);

FeasibilityReport check_feasibility(const GroundModel& model, const ValueMap& values);

struct OptimizationResult {
  bool feasible = false;
  Rat objective;
  ValueMap optimizer;
};

// Exhaustive optimum over the discretized search space: enumerations and
// integer ranges verbatim, real ranges on the representable grid at the
// given width. Throws SearchSpaceTooLarge beyond the cap.
OptimizationResult brute_force_optimum(const GroundModel& model, BitWidth grid,
                                       long long cap = 1'000'000);

// Decodes a solver assignment through the registry table and verifies it.
std::pair<ValueMap, FeasibilityReport> decode_solution(
    const std::map<VarKey, FixedPointWord>& varmap,
    const std::vector<signed char>& assignment, const GroundModel& model);

}  // namespace opmax
