#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "opmax/bench.hpp"
#include "opmax/conformance.hpp"
#include "opmax/parser.hpp"
#include "opmax/pipeline.hpp"

using namespace opmax;

namespace {

constexpr int kExitInfeasible = 10;
constexpr int kExitTimeout = 11;
constexpr int kExitBenchFail = 12;

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("model", cfg.model_path, "model file")->required();
  cmd->add_option("data", cfg.data_path, "instance-data file");
  cmd->add_option("-n,--int-bits", cfg.int_bits, "integer bits");
  cmd->add_option("-m,--frac-bits", cfg.frac_bits, "fractional bits");
  cmd->add_option("--time-limit", cfg.time_limit_seconds, "solve time limit (s)");
  cmd->add_option("--emit-wcnf", cfg.emit_wcnf_path, "write the WCNF here");
  cmd->add_option("--emit-varmap", cfg.emit_varmap_path, "write the varmap here");
  cmd->add_option("--report", cfg.report_path, "write the machine-readable report here");
  cmd->add_option_function<std::string>(
         "--rounding",
         [&cfg](const std::string& v) {
           if (v == "reject") cfg.rounding = Rounding::Reject;
           else if (v == "nearest") cfg.rounding = Rounding::Nearest;
           else throw CLI::ValidationError("--rounding", "use reject or nearest");
           cfg.rounding_set = true;
         },
         "constant rounding: reject | nearest")
      ->type_name("MODE");
  cmd->add_flag_function(
      "--published-rules",
      [&cfg](size_t) { cfg.variant = RuleVariant::Published; },
      "emit the reduction rules verbatim, without the documented corrections");
  cmd->add_flag("--shift-scale", cfg.shift_scale,
                "use the shift encoding for power-of-two scale factors");
  cmd->add_flag("--legacy-wcnf", cfg.legacy_wcnf, "write old-style `p wcnf` headers");
  cmd->add_option("--solver", cfg.solver_command,
                  "external MaxSAT solver command (engages the external backend)");
  cmd->add_flag_function(
      "--internal", [&cfg](size_t) { cfg.internal = true; },
      "force the internal solver");
}

// --solver wins; otherwise OPMAX_SOLVER supplies an external default unless
// --internal was given explicitly
void finish_config(RunConfig& cfg, bool internal_forced) {
  if (!cfg.solver_command.empty()) {
    cfg.internal = false;
    return;
  }
  const char* env = std::getenv("OPMAX_SOLVER");
  if (env && *env && !internal_forced) {
    cfg.solver_command = env;
    cfg.internal = false;
  }
}

int report_human(const RunReport& rep) {
  std::cout << "status      " << [&] {
    switch (rep.status) {
      case SolveStatus::Optimum: return "optimum";
      case SolveStatus::Satisfiable: return "satisfiable (not proven optimal)";
      case SolveStatus::Unsatisfiable: return "infeasible";
      case SolveStatus::Timeout: return "timeout";
      default: return "unknown";
    }
  }() << "\n";
  std::cout << "width       n=" << rep.width.n << " m=" << rep.width.m << "\n";
  std::cout << "reduction   " << rep.decision_vars << " vars, " << rep.ground_constraints
            << " ground constraints -> " << rep.bool_vars << " booleans, "
            << rep.hard_clauses << " hard + " << rep.soft_clauses << " soft clauses ("
            << rep.reduce_seconds << "s)\n";
  std::cout << "solve       " << rep.solve_seconds << "s\n";
  for (const auto& w : rep.warnings) std::cout << "warning     " << w << "\n";
  if (rep.status == SolveStatus::Optimum || rep.status == SolveStatus::Satisfiable) {
    std::cout << "objective   " << rat_to_decimal(rep.objective) << "\n";
    std::cout << "feasible    " << (rep.feasible ? "yes" : "NO") << "\n";
    for (const auto& [key, v] : rep.values)
      std::cout << "  " << key.str() << " = " << rat_to_decimal(v) << "\n";
  }
  if (rep.status == SolveStatus::Unsatisfiable) return kExitInfeasible;
  if (rep.status == SolveStatus::Timeout || rep.status == SolveStatus::Unknown)
    return kExitTimeout;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimization-to-MaxSAT reduction toolchain"};
  app.require_subcommand(1);

  RunConfig solve_cfg, reduce_cfg;
  auto* solve_cmd = app.add_subcommand("solve", "solve a model end to end");
  add_common(solve_cmd, solve_cfg);

  auto* reduce_cmd = app.add_subcommand("reduce", "reduce to WCNF without solving");
  add_common(reduce_cmd, reduce_cfg);

  std::string check_model, check_data, check_solution;
  auto* check_cmd = app.add_subcommand("check", "verify a solution file against a model");
  check_cmd->add_option("model", check_model)->required();
  check_cmd->add_option("data", check_data)->required();
  check_cmd->add_option("solution", check_solution, "file of `name = value` lines")->required();

  RunConfig bench_cfg;
  std::string suite_path;
  bool bench_full = false;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite file");
  bench_cmd->add_option("suite", suite_path)->required();
  bench_cmd->add_flag("--full", bench_full, "include rows marked external-solver-required");
  bench_cmd->add_option("--solver", bench_cfg.solver_command, "external solver command");
  bench_cmd->add_option("--time-limit", bench_cfg.time_limit_seconds, "per-row limit (s)");
  bench_cmd->add_flag_function(
      "--published-rules",
      [&bench_cfg](size_t) { bench_cfg.variant = RuleVariant::Published; }, "");

  RunConfig sweep_cfg;
  int sweep_lo = 1, sweep_hi = 6;
  auto* sweep_cmd = app.add_subcommand(
      "sweep-precision", "solve at increasing fractional widths and report the error");
  add_common(sweep_cmd, sweep_cfg);
  sweep_cmd->add_option("--m-from", sweep_lo, "first fractional width");
  sweep_cmd->add_option("--m-to", sweep_hi, "last fractional width");

  bool conf_semantics = false;
  auto* conf_cmd = app.add_subcommand("conformance",
                                      "reduction-rule count and semantics report");
  conf_cmd->add_flag("--semantics", conf_semantics, "run the exhaustive semantic checks");

  std::string conv_format, conv_input, conv_output;
  int conv_index = 0;
  auto* conv_cmd = app.add_subcommand("convert", "convert a public benchmark instance");
  conv_cmd->add_option("format", conv_format,
                       "dimacs-col | mknap | qaplib | tsplib | vrp | taillard-jsp | "
                       "taillard-osp | cec")->required();
  conv_cmd->add_option("input", conv_input)->required();
  conv_cmd->add_option("output", conv_output)->required();
  conv_cmd->add_option("--index", conv_index, "instance index / vehicle count");

  std::string wcnf_path;
  double wcnf_limit = 3600;
  auto* wcnf_cmd = app.add_subcommand("solve-wcnf",
                                      "run the internal solver on a WCNF file");
  wcnf_cmd->add_option("wcnf", wcnf_path)->required();
  wcnf_cmd->add_option("--time-limit", wcnf_limit);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(solve_cmd)) {
      finish_config(solve_cfg, solve_cmd->count("--internal") > 0);
      RunReport rep = run_solve(solve_cfg);
      return report_human(rep);
    }
    if (app.got_subcommand(reduce_cmd)) {
      finish_config(reduce_cfg, reduce_cmd->count("--internal") > 0);
      PreparedRun prep = prepare_run(reduce_cfg);
      if (!reduce_cfg.emit_wcnf_path.empty())
        write_file(reduce_cfg.emit_wcnf_path,
                   write_wcnf(prep.encoded.instance, reduce_cfg.legacy_wcnf));
      else
        std::cout << write_wcnf(prep.encoded.instance, reduce_cfg.legacy_wcnf);
      if (!reduce_cfg.emit_varmap_path.empty())
        write_file(reduce_cfg.emit_varmap_path, write_varmap(prep.encoded.varmap));
      std::cerr << "reduction: " << prep.encoded.bool_vars << " booleans, "
                << prep.encoded.hard_clauses << " hard + " << prep.encoded.soft_clauses
                << " soft clauses, " << prep.reduce_seconds << "s\n";
      return 0;
    }
    if (app.got_subcommand(check_cmd)) {
      Rat objective;
      FeasibilityReport rep =
          run_check(check_model, check_data, read_file(check_solution), &objective);
      for (const auto& v : rep.verdicts)
        if (!v.satisfied) std::cout << "violated: " << v.text << "\n";
      std::cout << "feasible  " << (rep.feasible ? "yes" : "no") << "\n";
      std::cout << "objective " << rat_to_decimal(objective) << "\n";
      return rep.feasible ? 0 : kExitInfeasible;
    }
    if (app.got_subcommand(bench_cmd)) {
      std::string base_dir;
      auto slash = suite_path.find_last_of('/');
      if (slash != std::string::npos) base_dir = suite_path.substr(0, slash);
      auto entries = parse_suite(read_file(suite_path), base_dir);
      if (!bench_cfg.solver_command.empty()) bench_cfg.internal = false;
      auto rows = run_suite(entries, bench_cfg, bench_full);
      std::cout << format_bench_table(rows);
      for (const auto& r : rows)
        if (r.status == "FAIL" || r.status == "ERROR") return kExitBenchFail;
      return 0;
    }
    if (app.got_subcommand(sweep_cmd)) {
      finish_config(sweep_cfg, sweep_cmd->count("--internal") > 0);
      // the known optimizer comes from the data file (shift vector o_i)
      auto data = parse_instance_data(read_file(sweep_cfg.data_path));
      std::map<std::string, Rat> shift;
      for (const auto& a : data) {
        if (a.lhs.name == "o" && a.lhs.args.size() == 1) {
          KnownBindings none;
          auto sub = simplify_expr(a.lhs.args[0], none);
          auto val = simplify_expr(a.rhs, none);
          if (sub.kind == ast::ExprKind::Constant && val.kind == ast::ExprKind::Constant)
            shift["x_" + rat_to_string(sub.value)] = val.value;
        }
      }
      std::cout << "m   objective        error^2 (decoded vs known optimizer)\n";
      Rat prev_err2;
      bool have_prev = false;
      int failures = 0;
      for (int m = sweep_lo; m <= sweep_hi; ++m) {
        RunConfig cfg = sweep_cfg;
        cfg.frac_bits = m;
        RunReport rep = run_solve(cfg);
        Rat err2 = 0;
        for (const auto& [key, v] : rep.values) {
          auto it = shift.find(key.str());
          if (it != shift.end()) {
            Rat d = v - it->second;
            err2 += d * d;
          }
        }
        std::cout << m << "   " << rat_to_decimal(rep.objective) << "   "
                  << rat_to_string(err2) << "\n";
        if (have_prev && err2 > prev_err2) ++failures;
        prev_err2 = err2;
        have_prev = true;
      }
      return failures == 0 ? 0 : 1;
    }
    if (app.got_subcommand(conf_cmd)) {
      std::vector<BitWidth> count_widths;
      for (int n = 1; n <= 3; ++n)
        for (int m = 0; m <= 2; ++m) count_widths.push_back(BitWidth{n, m});
      auto rows = run_count_conformance(count_widths);
      std::cout << format_conformance_report(rows);
      if (conf_semantics) {
        auto sem = run_semantics_conformance({{2, 0}, {2, 1}, {1, 2}});
        std::cout << format_conformance_report(sem);
        for (const auto& r : sem)
          if (r.sem_exact.rfind("FAIL", 0) == 0) return 1;
      }
      for (const auto& r : rows)
        if (!r.counts_ok()) return 1;
      return 0;
    }
    if (app.got_subcommand(conv_cmd)) {
      write_file(conv_output, convert_instance(conv_format, read_file(conv_input), conv_index));
      return 0;
    }
    if (app.got_subcommand(wcnf_cmd)) {
      MaxSatInstance inst = parse_wcnf(read_file(wcnf_path));
      SolverResult res = solve_internal(inst, wcnf_limit);
      // evaluation-style output so this binary can serve as an external solver
      if (res.status == SolveStatus::Unsatisfiable) {
        std::cout << "s UNSATISFIABLE\n";
        return 20;
      }
      if (res.status == SolveStatus::Optimum || res.status == SolveStatus::Satisfiable) {
        std::cout << "o " << res.cost.str() << "\n";
        std::cout << (res.status == SolveStatus::Optimum ? "s OPTIMUM FOUND\n"
                                                         : "s SATISFIABLE\n");
        std::cout << "v ";
        for (int v = 1; v <= inst.variable_count; ++v)
          std::cout << (res.assignment[v] == 1 ? '1' : '0');
        std::cout << "\n";
        return res.status == SolveStatus::Optimum ? 30 : 10;
      }
      std::cout << "s UNKNOWN\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
    return (int)e.error_class();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
