#include "opmax/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "opmax/parser.hpp"

namespace opmax {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorClass::Usage, "FileNotFound", "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorClass::Usage, "FileWriteError", "cannot write '" + path + "'");
  out << content;
}

BitWidth default_width(const GroundModel& model) {
  bool all_integer = true;
  for (const auto& dv : model.decision_vars) {
    if (std::holds_alternative<RealRange>(dv.domain)) {
      all_integer = false;
    } else if (std::holds_alternative<Enumeration>(dv.domain)) {
      for (const auto& v : std::get<Enumeration>(dv.domain).values)
        if (!rat_is_int(v)) all_integer = false;
    }
  }
  return all_integer ? BitWidth{20, 1} : BitWidth{20, 20};
}

PreparedRun prepare_run(const RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  ast::Model model = parse_model_text(read_file(config.model_path));
  std::vector<ast::Assignment> data;
  if (!config.data_path.empty())
    data = parse_instance_data(read_file(config.data_path));

  PreparedRun out;
  out.ground = ground_model(model, data);

  BitWidth w = default_width(out.ground.model);
  bool integer_model = w.m == 1;  // default_width marks integer models with m=1
  if (config.int_bits) w.n = *config.int_bits;
  if (config.frac_bits) w.m = *config.frac_bits;
  if (w.n < 1 || w.m < 0)
    throw Error(ErrorClass::Usage, "BadWidth", "need n >= 1 and m >= 0");
  out.width = w;

  EncodeOptions opts;
  opts.width = w;
  // unless forced, constants in integer models must encode exactly while
  // declared-real models may round to the grid
  opts.rounding = config.rounding_set ? config.rounding
                 : integer_model      ? Rounding::Reject
                                      : Rounding::Nearest;
  opts.variant = config.variant;
  opts.shift_scale = config.shift_scale;
  out.encoded = encode_model(out.ground.model, opts);

  out.reduce_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

namespace {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimum: return "optimum";
    case SolveStatus::Satisfiable: return "satisfiable";
    case SolveStatus::Unsatisfiable: return "infeasible";
    case SolveStatus::Unknown: return "unknown";
    case SolveStatus::Timeout: return "timeout";
  }
  return "?";
}

std::string build_machine_report(const RunReport& rep) {
  std::ostringstream os;
  os << "status=" << status_name(rep.status) << '\n';
  os << "width.n=" << rep.width.n << '\n';
  os << "width.m=" << rep.width.m << '\n';
  os << "stats.decision_vars=" << rep.decision_vars << '\n';
  os << "stats.ground_constraints=" << rep.ground_constraints << '\n';
  os << "stats.bool_vars=" << rep.bool_vars << '\n';
  os << "stats.hard_clauses=" << rep.hard_clauses << '\n';
  os << "stats.soft_clauses=" << rep.soft_clauses << '\n';
  if (rep.status == SolveStatus::Optimum || rep.status == SolveStatus::Satisfiable) {
    os << "feasible=" << (rep.feasible ? "true" : "false") << '\n';
    os << "objective=" << rat_to_decimal(rep.objective) << '\n';
    for (const auto& [key, v] : rep.values)
      os << "var." << key.str() << '=' << rat_to_decimal(v) << '\n';
  }
  for (const auto& w : rep.warnings) os << "warning=" << w << '\n';
  return os.str();
}

}  // namespace

RunReport run_solve(const RunConfig& config) {
  RunReport rep;
  PreparedRun prep = prepare_run(config);
  rep.width = prep.width;
  rep.reduce_seconds = prep.reduce_seconds;
  rep.warnings = prep.ground.model.warnings;
  rep.bool_vars = prep.encoded.bool_vars;
  rep.hard_clauses = prep.encoded.hard_clauses;
  rep.soft_clauses = prep.encoded.soft_clauses;
  rep.ground_constraints = (long long)prep.ground.model.constraints.size();
  rep.decision_vars = (long long)prep.ground.model.decision_vars.size();

  if (!config.emit_wcnf_path.empty())
    write_file(config.emit_wcnf_path, write_wcnf(prep.encoded.instance, config.legacy_wcnf));
  if (!config.emit_varmap_path.empty())
    write_file(config.emit_varmap_path, write_varmap(prep.encoded.varmap));

  auto t0 = std::chrono::steady_clock::now();
  SolverResult sr;
  if (config.internal) {
    sr = solve_internal(prep.encoded.instance, config.time_limit_seconds);
  } else {
    if (config.solver_command.empty())
      throw Error(ErrorClass::Usage, "NoSolver", "external backend needs a command");
    sr = run_external(prep.encoded.instance, config.solver_command,
                      config.time_limit_seconds, config.legacy_wcnf);
  }
  rep.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.status = sr.status;

  if (sr.status == SolveStatus::Optimum || sr.status == SolveStatus::Satisfiable) {
    auto [values, feas] = decode_solution(prep.encoded.varmap, sr.assignment,
                                          prep.ground.model);
    rep.values = std::move(values);
    rep.feasible = feas.feasible;
    rep.objective = feas.objective;
    if (!feas.feasible) {
      // decoded infeasibility from a claimed optimum is a pipeline bug
      std::string bad;
      for (const auto& v : feas.verdicts)
        if (!v.satisfied) { bad = v.text; break; }
      throw Error(ErrorClass::Decode, "InfeasibleDecode",
                  "solver model decodes to an infeasible point: " + bad);
    }
  }
  rep.machine_report = build_machine_report(rep);
  if (!config.report_path.empty()) write_file(config.report_path, rep.machine_report);
  return rep;
}

FeasibilityReport run_check(const std::string& model_path, const std::string& data_path,
                            const std::string& solution_text, Rat* objective_out,
                            ValueMap* values_out) {
  ast::Model model = parse_model_text(read_file(model_path));
  std::vector<ast::Assignment> data;
  if (!data_path.empty()) data = parse_instance_data(read_file(data_path));
  GroundResult g = ground_model(model, data);

  ValueMap values;
  for (const auto& a : parse_instance_data(solution_text)) {
    VarKey key{a.lhs.name, {}};
    for (const auto& s : a.lhs.args) {
      if (s.kind != ast::ExprKind::Constant || !rat_is_int(s.value))
        throw Error(ErrorClass::Usage, "BadSolution",
                    "solution subscripts must be integer constants");
      key.subs.push_back(rat_to_ll(s.value));
    }
    KnownBindings none;
    ast::Expr folded = simplify_expr(a.rhs, none);
    if (folded.kind != ast::ExprKind::Constant)
      throw Error(ErrorClass::Usage, "BadSolution",
                  "solution values must be constants");
    values[key] = folded.value;
  }
  FeasibilityReport rep = check_feasibility(g.model, values);
  if (objective_out) *objective_out = rep.objective;
  if (values_out) *values_out = values;
  return rep;
}

}  // namespace opmax
