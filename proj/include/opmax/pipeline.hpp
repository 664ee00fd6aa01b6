#pragma once

#include <optional>
#include <string>

#include "opmax/encode.hpp"
#include "opmax/evaluate.hpp"
#include "opmax/ground.hpp"
#include "opmax/solve.hpp"

namespace opmax {

struct RunConfig {
  std::string model_path;
  std::string data_path;       // optional
  std::optional<int> int_bits;
  std::optional<int> frac_bits;
  Rounding rounding = Rounding::Nearest;
  bool rounding_set = false;
  bool internal = true;
  std::string solver_command;  // external backend
  double time_limit_seconds = 3600;
  RuleVariant variant = RuleVariant::Exact;
  bool shift_scale = false;
  bool legacy_wcnf = false;
  std::string emit_wcnf_path;
  std::string emit_varmap_path;
  std::string report_path;
};

struct RunReport {
  SolveStatus status = SolveStatus::Unknown;
  bool feasible = false;
  Rat objective;
  ValueMap values;
  std::vector<std::string> warnings;
  // reduction statistics (always present, even on solver timeout)
  long long bool_vars = 0;
  long long hard_clauses = 0;
  long long soft_clauses = 0;
  long long ground_constraints = 0;
  long long decision_vars = 0;
  double reduce_seconds = 0;
  double solve_seconds = 0;
  BitWidth width;
  // deterministic machine-readable form (no wall times)
  std::string machine_report;
};

struct PreparedRun {
  GroundResult ground;
  EncodeResult encoded;
  BitWidth width;
  double reduce_seconds = 0;
};

// Parse + ground + encode. Width defaults follow the model: (20, 1) when
// every decision variable is integer-valued, (20, 20) otherwise.
PreparedRun prepare_run(const RunConfig& config);

// Full pipeline including the solve and the decode-and-verify gate.
RunReport run_solve(const RunConfig& config);

// Independent feasibility check of a `name = value` solution file.
FeasibilityReport run_check(const std::string& model_path, const std::string& data_path,
                            const std::string& solution_text, Rat* objective_out,
                            ValueMap* values_out = nullptr);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

BitWidth default_width(const GroundModel& model);

}  // namespace opmax
