// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria. Criterion 4's timings depend on the machine;
// everything else should finish in well under a minute each.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "opmax/bench.hpp"
#include "opmax/conformance.hpp"
#include "opmax/parser.hpp"
#include "opmax/pipeline.hpp"

using namespace opmax;

namespace {

std::string g_source_dir;
int g_failures = 0;

void criterion(int number, const std::string& name,
               const std::function<bool(std::string&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << name
            << "  (" << secs << "s)";
  if (!detail.empty()) std::cout << "  -- " << detail;
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

std::string model_path(const std::string& name) {
  return g_source_dir + "/models/" + name;
}
std::string instance_path(const std::string& name) {
  return g_source_dir + "/models/instances/" + name;
}

// ---- criterion 1: rule conformance, counts --------------------------------

bool criterion_counts(std::string& detail) {
  std::vector<BitWidth> widths;
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 2; ++m) widths.push_back(BitWidth{n, m});
  auto rows = run_count_conformance(widths);
  int bad = 0, stated_mismatch = 0;
  for (const auto& r : rows) {
    if (!r.counts_ok()) {
      ++bad;
      if (bad == 1)
        detail = r.rule + " (" + std::to_string(r.n) + "," + std::to_string(r.m) +
                 "): aux " + std::to_string(r.actual_aux) + "/" +
                 std::to_string(r.derived_aux) + " clauses " +
                 std::to_string(r.actual_clauses) + "/" +
                 std::to_string(r.derived_clauses);
    }
    if (!r.count_note.empty()) ++stated_mismatch;
  }
  if (bad == 0)
    detail = std::to_string(rows.size()) + " rule/width rows match; " +
             std::to_string(stated_mismatch) +
             " carry documented notes where the published closed forms disagree "
             "with the published clause listings";
  return bad == 0;
}

// ---- criterion 2: rule conformance, semantics ------------------------------

bool criterion_semantics(std::string& detail) {
  auto rows = run_semantics_conformance({{2, 0}, {2, 1}, {1, 2}});
  int fail = 0, deviations = 0, pass = 0;
  for (const auto& r : rows) {
    if (r.sem_exact.rfind("FAIL", 0) == 0) {
      ++fail;
      if (fail == 1) detail = r.rule + " exact-variant " + r.sem_exact;
    }
    if (r.sem_published.rfind("DEVIATION", 0) == 0) ++deviations;
    if (r.sem_exact.rfind("PASS", 0) == 0) ++pass;
  }
  if (fail == 0)
    detail = std::to_string(pass) + " rows pass exactly; " +
             std::to_string(deviations) +
             " published-variant deviations documented with passing corrected variants";
  return fail == 0;
}

// ---- criterion 3: end-to-end oracle equivalence ----------------------------

bool criterion_oracle(std::string& detail) {
  std::mt19937 rng(987654321);
  int checked = 0, attempts = 0;

  auto run_one = [&](const std::string& text, int n, int m) -> bool {
    std::string path = "/tmp/opmax_accept_model.txt";
    write_file(path, text);
    RunConfig cfg;
    cfg.model_path = path;
    cfg.int_bits = n;
    cfg.frac_bits = m;
    cfg.rounding = Rounding::Reject;
    cfg.time_limit_seconds = 120;

    PreparedRun prep = prepare_run(cfg);
    auto brute = brute_force_optimum(prep.ground.model, prep.width);
    RunReport rep = run_solve(cfg);
    if (!brute.feasible) return rep.status == SolveStatus::Unsatisfiable;
    if (rep.status != SolveStatus::Optimum) return false;
    if (!rep.feasible) return false;
    return rep.objective == brute.objective;
  };

  // fixed models first
  if (!run_one("\\begin{align}\\max && 3 x_1 + 4 x_2 \\\\ && x_1 + x_2 \\le 1 \\\\ && "
               "x_i \\in \\{0,1\\} && i = 1,\\dots,2\\end{align}",
               4, 0)) {
    detail = "tiny knapsack mismatch";
    return false;
  }
  {
    std::string tri = "/tmp/opmax_accept_tri.inst";
    write_file(tri, "n = 3\nc_{1,2} = 1\nc_{1,3} = 1\nc_{2,3} = 1\n");
    RunConfig cfg;
    cfg.model_path = model_path("gcp.model");
    cfg.data_path = tri;
    cfg.int_bits = 4;
    cfg.frac_bits = 0;
    PreparedRun prep = prepare_run(cfg);
    auto brute = brute_force_optimum(prep.ground.model, prep.width);
    RunReport rep = run_solve(cfg);
    if (!brute.feasible || rep.status != SolveStatus::Optimum ||
        rep.objective != brute.objective || rep.objective != Rat(3)) {
      detail = "triangle coloring mismatch";
      return false;
    }
  }

  while (checked < 20 && attempts < 200) {
    ++attempts;
    oracle::TinyModel tm = oracle::generate_tiny_model(rng);
    try {
      if (!run_one(tm.text, tm.width_n, tm.width_m)) {
        detail = "pipeline/brute-force mismatch on: " + tm.text;
        return false;
      }
      ++checked;
    } catch (const Error&) {
      // width or operator limits can reject a generated model; skip it
    }
  }
  detail = std::to_string(checked) + " randomized models + 2 fixed models agree";
  return checked >= 20;
}

// ---- criterion 4: desk-scale published values ------------------------------

bool criterion_desk_values(std::string& detail) {
  struct Row {
    const char* model;
    const char* inst;
    Rat expected;
    int n, m;
    Rat tol;
  };
  std::vector<Row> rows = {
      {"gcp.model", "myciel3.inst", Rat(4), 10, 1, Rat(0)},
      {"gcp.model", "queen5_5.inst", Rat(5), 10, 1, Rat(0)},
      {"mkp.model", "mknap1-1.inst", Rat(3800), 15, 5, Rat(0)},
      {"qap.model", "esc16f.inst", Rat(0), 10, 1, Rat(0)},
      // objective tolerance: 10 * (2^-20)^2 around the published -450
      {"sphere.model", "sphere10.inst", Rat(-450), 20, 20,
       Rat(10) * pow2_inv(20) * pow2_inv(20)},
  };
  std::ostringstream got;
  for (const auto& r : rows) {
    RunConfig cfg;
    cfg.model_path = model_path(r.model);
    cfg.data_path = instance_path(r.inst);
    cfg.int_bits = r.n;
    cfg.frac_bits = r.m;
    cfg.time_limit_seconds = 1800;
    RunReport rep = run_solve(cfg);
    if (rep.status != SolveStatus::Optimum || !rep.feasible ||
        rat_abs(rep.objective - r.expected) > r.tol) {
      detail = std::string(r.inst) + ": expected " + rat_to_decimal(r.expected) +
               ", got " +
               (rep.status == SolveStatus::Optimum ? rat_to_decimal(rep.objective)
                                                   : "no optimum");
      return false;
    }
    got << r.inst << "=" << rat_to_decimal(r.expected) << " ";
  }
  detail = got.str() + "(large published rows excluded from CI; see suites/full.suite)";
  return true;
}

// ---- criterion 5: precision-error property ---------------------------------

bool criterion_precision(std::string& detail) {
  std::string inst = "/tmp/opmax_accept_sweep.inst";
  write_file(inst, "D = 1\no_{1} = 0.3\n");
  Rat prev;
  bool have_prev = false;
  std::ostringstream seen;
  for (int m = 1; m <= 6; ++m) {
    RunConfig cfg;
    cfg.model_path = model_path("sphere.model");
    cfg.data_path = inst;
    cfg.int_bits = 20;
    cfg.frac_bits = m;
    RunReport rep = run_solve(cfg);
    if (rep.status != SolveStatus::Optimum) {
      detail = "no optimum at m=" + std::to_string(m);
      return false;
    }
    Rat x = rep.values.at(VarKey{"x", {1}});
    Rat err = rat_abs(x - Rat(3, 10));
    seen << "m=" << m << ":" << rat_to_string(err) << " ";
    if (err > pow2_inv(m + 1)) {
      detail = "error at m=" + std::to_string(m) + " is " + rat_to_string(err) +
               " > 2^-(m+1)";
      return false;
    }
    if (have_prev && err > prev) {
      detail = "error increased between refining grids at m=" + std::to_string(m);
      return false;
    }
    prev = err;
    have_prev = true;
  }
  detail = seen.str();
  return true;
}

// ---- criterion 6: objective normalization identity --------------------------

bool criterion_normalization(std::string& detail) {
  BitWidth w{2, 0};
  BitRegistry reg;
  EmitSession s(reg, false, RuleVariant::Exact);
  FixedPointWord mu = s.fresh_word(w);
  FixedPointWord mu_hat = s.fresh_word(w);
  emit_normalization(s, mu, mu_hat);
  std::vector<int> pins;
  for (auto& b : mu.bits) pins.push_back(b.lit);
  for (auto& b : mu_hat.bits) pins.push_back(b.lit);
  auto rows = sat_enumerate(s.clauses(), pins);

  std::map<long long, long long> mu_to_hat;  // value -> unsigned soft total
  for (const auto& r : rows) {
    long long mu_val = (r[0] ? 1 : 0) + (r[1] ? 2 : 0);
    if (r[2]) mu_val = -mu_val;
    long long hat = (r[3] ? 1 : 0) + (r[4] ? 2 : 0) + (r[5] ? 4 : 0);
    if (hat != mu_val + 4) {
      detail = "mu=" + std::to_string(mu_val) + " decoded hat=" + std::to_string(hat);
      return false;
    }
    mu_to_hat.emplace(mu_val, hat);
  }
  if (mu_to_hat.size() != 7) {
    detail = "expected 7 representable values, saw " + std::to_string(mu_to_hat.size());
    return false;
  }
  long long prev = -1;
  for (const auto& [v, hat] : mu_to_hat) {
    if (hat <= prev) {
      detail = "soft-weight total not strictly monotone";
      return false;
    }
    prev = hat;
  }
  detail = "hat = mu + 4 for all 7 values; soft total strictly increasing";
  return true;
}

// ---- criterion 7: polynomial-reduction sanity -------------------------------

bool criterion_polynomial(std::string& detail) {
  std::mt19937 rng(13);
  auto clauses_for_items = [&](int items) {
    std::ostringstream data;
    data << "n = " << items << "\nm = 1\n";
    for (int i = 1; i <= items; ++i)
      data << "v_{" << i << "} = " << 1 + (int)(rng() % 50) << "\n";
    for (int i = 1; i <= items; ++i)
      data << "w_{" << i << ",1} = " << 1 + (int)(rng() % 20) << "\n";
    data << "W_{1} = " << 10 * items << "\n";
    std::string path = "/tmp/opmax_accept_mkp.inst";
    write_file(path, data.str());
    RunConfig cfg;
    cfg.model_path = model_path("mkp.model");
    cfg.data_path = path;
    cfg.int_bits = 15;
    cfg.frac_bits = 1;
    PreparedRun prep = prepare_run(cfg);
    return (double)prep.encoded.hard_clauses;
  };
  double c5 = clauses_for_items(5), c10 = clauses_for_items(10);
  double c20 = clauses_for_items(20), c40 = clauses_for_items(40);
  // linear growth: doubling the item count doubles the increment
  double r1 = (c20 - c10) / (c10 - c5);
  double r2 = (c40 - c20) / (c20 - c10);
  std::ostringstream os;
  os << "hard clauses " << c5 << "/" << c10 << "/" << c20 << "/" << c40
     << ", increment ratios " << r1 << ", " << r2;
  detail = os.str();
  return r1 > 1.8 && r1 < 2.2 && r2 > 1.8 && r2 < 2.2;
}

// ---- criterion 8: format interop --------------------------------------------

bool criterion_interop(std::string& detail) {
  // writer/parser round trip on a pipeline-produced instance
  RunConfig cfg;
  cfg.model_path = model_path("mkp.model");
  cfg.data_path = instance_path("mknap1-1.inst");
  cfg.int_bits = 15;
  cfg.frac_bits = 1;
  PreparedRun prep = prepare_run(cfg);
  std::string text = write_wcnf(prep.encoded.instance);
  MaxSatInstance back = parse_wcnf(text);
  if (back.variable_count != prep.encoded.instance.variable_count ||
      back.hard != prep.encoded.instance.hard ||
      back.soft.size() != prep.encoded.instance.soft.size()) {
    detail = "wcnf round trip mismatch";
    return false;
  }
  for (size_t i = 0; i < back.soft.size(); ++i)
    if (back.soft[i] != prep.encoded.instance.soft[i]) {
      detail = "wcnf soft clause mismatch";
      return false;
    }

  // recorded transcripts in both v-line dialects decode identically
  auto r1 = parse_solver_output("c recorded\no 21\ns OPTIMUM FOUND\nv 10110\n", 5);
  auto r2 = parse_solver_output("o 21\ns OPTIMUM FOUND\nv 1 -2 3 4 -5 0\n", 5);
  if (r1.status != SolveStatus::Optimum || r2.status != SolveStatus::Optimum) {
    detail = "transcript status mismatch";
    return false;
  }
  for (int v = 1; v <= 5; ++v)
    if (r1.assignment[v] != r2.assignment[v]) {
      detail = "v-line dialects decode differently at variable " + std::to_string(v);
      return false;
    }
  detail = "wcnf round trip exact; both v-line dialects agree";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  g_source_dir = argc > 1 ? argv[1] : ".";
  std::cout << "acceptance suite (source dir: " << g_source_dir << ")\n";

  criterion(1, "rule conformance: raw clause and variable counts", criterion_counts);
  criterion(2, "rule conformance: exhaustive semantics at (2,0), (2,1), (1,2)",
            criterion_semantics);
  criterion(3, "end-to-end oracle equivalence on randomized tiny models",
            criterion_oracle);
  criterion(4, "desk-scale published optima at the published widths",
            criterion_desk_values);
  criterion(5, "precision-error decay on the shifted sphere", criterion_precision);
  criterion(6, "objective normalization identity at (2,0)", criterion_normalization);
  criterion(7, "hard-clause growth is linear in knapsack items", criterion_polynomial);
  criterion(8, "WCNF and solver-output format interop", criterion_interop);

  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) + " criteria failed")
            << std::endl;
  return g_failures;
}
