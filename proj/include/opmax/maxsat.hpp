#pragma once

#include <string>
#include <vector>

#include "opmax/cnf.hpp"
#include "opmax/rational.hpp"

namespace opmax {

struct MaxSatInstance {
  int variable_count = 0;
  std::vector<Clause> hard;
  std::vector<std::pair<Clause, BigInt>> soft;
};

// New-format WCNF: `h <lits> 0` for hard clauses, `<weight> <lits> 0` for
// soft ones. Deterministic: hard clauses in emission order, then soft in
// order. The legacy flag writes the classic `p wcnf` header with a top
// weight instead.
std::string write_wcnf(const MaxSatInstance& inst, bool legacy = false);

MaxSatInstance parse_wcnf(const std::string& text);

enum class SolveStatus { Optimum, Satisfiable, Unsatisfiable, Unknown, Timeout };

struct SolverResult {
  SolveStatus status = SolveStatus::Unknown;
  std::vector<signed char> assignment;  // 1-based; -1 unknown
  BigInt cost = 0;                      // total weight of falsified soft clauses
  std::string detail;                   // stderr tail / notes
};

// Parses evaluation-style solver output: `s` status line, `o` cost lines
// (last wins), `v` lines in either 0/1-string or signed-literal form.
SolverResult parse_solver_output(const std::string& text, int variable_count);

}  // namespace opmax
