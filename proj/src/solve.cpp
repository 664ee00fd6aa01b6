#include "opmax/solve.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "opmax/diagnostics.hpp"

namespace opmax {

namespace {

std::chrono::steady_clock::time_point deadline_from(double seconds) {
  return std::chrono::steady_clock::now() +
         std::chrono::milliseconds((long long)(seconds * 1000.0));
}

struct SoftLit {
  int lit;
  BigInt weight;
  size_t input_index;
};

// heaviest first; stable on input order for equal weights
std::vector<SoftLit> sorted_soft(const MaxSatInstance& inst) {
  std::vector<SoftLit> soft;
  for (size_t i = 0; i < inst.soft.size(); ++i) {
    const auto& [cl, w] = inst.soft[i];
    if (cl.size() != 1)
      throw solve_error("NonUnitSoft", "internal solver requires unit soft clauses");
    soft.push_back(SoftLit{cl[0], w, i});
  }
  std::stable_sort(soft.begin(), soft.end(), [](const SoftLit& a, const SoftLit& b) {
    return a.weight > b.weight;
  });
  return soft;
}

bool super_increasing(const std::vector<SoftLit>& soft) {
  BigInt below = 0;
  for (size_t i = soft.size(); i-- > 0;) {
    if (i + 1 < soft.size() && soft[i].weight <= below) return false;
    below += soft[i].weight;
  }
  return true;
}

BigInt cost_of(const MaxSatInstance& inst, const std::vector<signed char>& model) {
  BigInt cost = 0;
  for (const auto& [cl, w] : inst.soft) {
    bool sat = false;
    for (int l : cl) {
      int v = l > 0 ? l : -l;
      bool val = model[v] == 1;
      if ((l > 0) == val) { sat = true; break; }
    }
    if (!sat) cost += w;
  }
  return cost;
}

}  // namespace

SolverResult solve_internal(const MaxSatInstance& inst, double time_limit_seconds) {
  SatSolver sat;
  sat.ensure_var(inst.variable_count);
  auto deadline = deadline_from(time_limit_seconds);
  sat.set_deadline(deadline);

  for (const auto& cl : inst.hard) {
    if (cl.empty() || !sat.add_clause(cl)) {
      SolverResult r;
      r.status = SolveStatus::Unsatisfiable;
      return r;
    }
  }

  auto first = sat.solve({});
  if (first == SatSolver::Result::Unsat) {
    SolverResult r;
    r.status = SolveStatus::Unsatisfiable;
    return r;
  }
  if (first == SatSolver::Result::Unknown) {
    SolverResult r;
    r.status = SolveStatus::Timeout;
    return r;
  }

  std::vector<SoftLit> soft = sorted_soft(inst);
  std::vector<signed char> best = sat.model();

  if (super_increasing(soft)) {
    // lexicographic fixing, heaviest literal first; a literal already
    // satisfied by the current model is locked without a solver call
    std::vector<int> fixed;
    for (const auto& sl : soft) {
      int v = sl.lit > 0 ? sl.lit : -sl.lit;
      bool holds = (best[v] == 1) == (sl.lit > 0);
      if (holds) {
        fixed.push_back(sl.lit);
        continue;
      }
      std::vector<int> assume = fixed;
      assume.push_back(sl.lit);
      auto r = sat.solve(assume);
      if (r == SatSolver::Result::Sat) {
        best = sat.model();
        fixed.push_back(sl.lit);
      } else if (r == SatSolver::Result::Unsat) {
        fixed.push_back(-sl.lit);
      } else {
        SolverResult out;
        out.status = SolveStatus::Timeout;
        out.assignment = best;
        out.cost = cost_of(inst, best);
        return out;
      }
    }
    SolverResult out;
    out.status = SolveStatus::Optimum;
    out.assignment = best;
    out.cost = cost_of(inst, best);
    return out;
  }

  // branch and bound over soft literals, heaviest first
  BigInt best_cost = cost_of(inst, best);
  std::vector<int> assume;
  bool timed_out = false;

  std::function<void(size_t, BigInt)> walk = [&](size_t i, BigInt lost) {
    if (timed_out || lost >= best_cost) return;
    if (std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    if (i == soft.size()) {
      auto r = sat.solve(assume);
      if (r == SatSolver::Result::Sat) {
        best = sat.model();
        best_cost = lost;
      } else if (r == SatSolver::Result::Unknown) {
        timed_out = true;
      }
      return;
    }
    assume.push_back(soft[i].lit);
    if (sat.solve(assume) == SatSolver::Result::Sat) walk(i + 1, lost);
    assume.back() = -soft[i].lit;
    if (sat.solve(assume) == SatSolver::Result::Sat) walk(i + 1, lost + soft[i].weight);
    assume.pop_back();
  };
  walk(0, 0);

  SolverResult out;
  out.status = timed_out ? SolveStatus::Timeout : SolveStatus::Optimum;
  out.assignment = best;
  out.cost = best_cost;
  return out;
}

SolverResult run_external(const MaxSatInstance& inst, const std::string& command,
                          double time_limit_seconds, bool legacy_wcnf) {
  const char* tmpdir = std::getenv("OPMAX_TMPDIR");
  if (!tmpdir) tmpdir = std::getenv("TMPDIR");
  if (!tmpdir) tmpdir = "/tmp";
  std::string path = std::string(tmpdir) + "/opmax_XXXXXX";
  std::vector<char> pathbuf(path.begin(), path.end());
  pathbuf.push_back('\0');
  int fd = mkstemp(pathbuf.data());
  if (fd < 0) throw solve_error("TempFile", "cannot create temporary WCNF file");
  std::string wcnf = write_wcnf(inst, legacy_wcnf);
  ssize_t written = write(fd, wcnf.data(), wcnf.size());
  close(fd);
  std::string wcnf_path(pathbuf.data());
  if (written != (ssize_t)wcnf.size()) {
    unlink(wcnf_path.c_str());
    throw solve_error("TempFile", "short write to temporary WCNF file");
  }

  // command is whitespace-split; the wcnf path is the final argument
  std::vector<std::string> args;
  {
    std::string cur;
    for (char c : command) {
      if (c == ' ' || c == '\t') {
        if (!cur.empty()) args.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) args.push_back(cur);
  }
  if (args.empty()) {
    unlink(wcnf_path.c_str());
    throw solve_error("SolverCrashed", "empty solver command");
  }
  args.push_back(wcnf_path);

  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    unlink(wcnf_path.c_str());
    throw solve_error("SolverCrashed", "cannot create pipes");
  }
  pid_t pid = fork();
  if (pid < 0) {
    unlink(wcnf_path.c_str());
    throw solve_error("SolverCrashed", "fork failed");
  }
  if (pid == 0) {
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]); close(out_pipe[1]);
    close(err_pipe[0]); close(err_pipe[1]);
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    fprintf(stderr, "exec failed: %s\n", strerror(errno));
    _exit(127);
  }
  close(out_pipe[1]);
  close(err_pipe[1]);
  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
  fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

  std::string out_text, err_text;
  auto deadline = deadline_from(time_limit_seconds);
  bool timed_out = false;
  int status = 0;
  char buf[4096];
  for (;;) {
    bool any = false;
    ssize_t r;
    while ((r = read(out_pipe[0], buf, sizeof buf)) > 0) {
      out_text.append(buf, r);
      any = true;
    }
    while ((r = read(err_pipe[0], buf, sizeof buf)) > 0) {
      err_text.append(buf, r);
      any = true;
    }
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (std::chrono::steady_clock::now() > deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    if (!any) usleep(2000);
  }
  // drain
  ssize_t r;
  while ((r = read(out_pipe[0], buf, sizeof buf)) > 0) out_text.append(buf, r);
  while ((r = read(err_pipe[0], buf, sizeof buf)) > 0) err_text.append(buf, r);
  close(out_pipe[0]);
  close(err_pipe[0]);
  unlink(wcnf_path.c_str());

  if (timed_out) {
    SolverResult res = parse_solver_output(out_text, inst.variable_count);
    res.status = SolveStatus::Timeout;
    return res;
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
    throw solve_error("SolverCrashed", "solver command not found: " + args[0]);
  SolverResult res = parse_solver_output(out_text, inst.variable_count);
  if (res.status == SolveStatus::Unknown && out_text.find("s ") == std::string::npos) {
    std::string tail = err_text.size() > 400 ? err_text.substr(err_text.size() - 400)
                                             : err_text;
    if (WIFSIGNALED(status) || (WIFEXITED(status) && WEXITSTATUS(status) != 0 &&
                                WEXITSTATUS(status) != 10 && WEXITSTATUS(status) != 20 &&
                                WEXITSTATUS(status) != 30))
      throw solve_error("SolverCrashed", "solver failed; stderr: " + tail);
    throw solve_error("UnparsableOutput", "no status line in solver output");
  }
  return res;
}

std::set<std::vector<bool>> sat_enumerate(const std::vector<Clause>& clauses,
                                          const std::vector<int>& interest, int cap) {
  if ((int)interest.size() > cap)
    throw solve_error("CapExceeded", "projection space exceeds 2^" + std::to_string(cap));
  SatSolver sat;
  int maxvar = 0;
  for (const auto& cl : clauses)
    for (int l : cl) maxvar = std::max(maxvar, l > 0 ? l : -l);
  for (int v : interest) maxvar = std::max(maxvar, v);
  sat.ensure_var(maxvar);
  bool ok = true;
  for (const auto& cl : clauses)
    if (cl.empty() || !sat.add_clause(cl)) { ok = false; break; }

  std::set<std::vector<bool>> out;
  if (!ok) return out;
  size_t count = (size_t)1 << interest.size();
  std::vector<int> assume(interest.size());
  for (size_t mask = 0; mask < count; ++mask) {
    std::vector<bool> point(interest.size());
    for (size_t i = 0; i < interest.size(); ++i) {
      bool val = (mask >> i) & 1;
      point[i] = val;
      assume[i] = val ? interest[i] : -interest[i];
    }
    if (sat.solve(assume) == SatSolver::Result::Sat) out.insert(point);
  }
  return out;
}

}  // namespace opmax
