#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

namespace opmax {

// Conflict-driven SAT core with watched literals, first-UIP learning,
// activity-based decisions (deterministic tie-break on variable index),
// phase saving and Luby restarts. Supports solving under assumptions;
// learned clauses persist across calls.
class SatSolver {
 public:
  enum class Result { Sat, Unsat, Unknown };

  // Variables are 1-based DIMACS ids; literals are signed ids.
  void ensure_var(int v);
  int num_vars() const { return (int)(assign_.size() ? assign_.size() - 1 : 0); }

  // Returns false if the clause is already falsified at the top level
  // (the instance became trivially UNSAT).
  bool add_clause(const std::vector<int>& lits);

  Result solve(const std::vector<int>& assumptions = {});

  // Model access after Sat: value of var v (0/1).
  bool model_value(int v) const { return model_[v] == 1; }
  const std::vector<signed char>& model() const { return model_; }

  void set_deadline(std::chrono::steady_clock::time_point tp) { deadline_ = tp; has_deadline_ = true; }
  void clear_deadline() { has_deadline_ = false; }
  void set_conflict_budget(int64_t b) { conflict_budget_ = b; }  // <0: unlimited

  // static branching order (lowest index first, true phase first) instead
  // of activity; matches the documented deterministic baseline
  void set_index_branching(bool on) { index_branching_ = on; }

  int64_t conflicts() const { return total_conflicts_; }

 private:
  struct Clause {
    uint32_t offset;  // into arena
    uint32_t size;
    bool learned;
    float activity;
    int lbd;
  };
  using CRef = int32_t;
  static constexpr CRef kNoReason = -1;

  // literal index: var v, sign s -> 2v+s  (s=1 means negated)
  static int lidx(int lit) {
    int v = lit > 0 ? lit : -lit;
    return 2 * v + (lit < 0 ? 1 : 0);
  }
  static int neg_idx(int li) { return li ^ 1; }
  static int idx_var(int li) { return li >> 1; }
  static int idx_to_lit(int li) { return (li & 1) ? -(li >> 1) : (li >> 1); }

  struct Watcher {
    CRef cref;
    int blocker;  // literal index
  };

  std::vector<int> arena_;          // clause literal storage (literal indices)
  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watches_;  // per literal index
  std::vector<signed char> assign_;  // per var: -1 unassigned, 0 false, 1 true
  std::vector<signed char> phase_;   // saved phase per var
  std::vector<int> level_;           // per var
  std::vector<CRef> reason_;         // per var
  std::vector<int> trail_;           // literal indices
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_;       // binary max-heap of vars
  std::vector<int> heap_pos_;   // var -> heap index or -1
  bool index_branching_ = false;

  std::vector<signed char> model_;
  std::vector<signed char> seen_;
  std::vector<int> analyze_stack_;

  int64_t total_conflicts_ = 0;
  int64_t conflict_budget_ = -1;
  bool has_deadline_ = false;
  std::chrono::steady_clock::time_point deadline_;
  bool top_level_conflict_ = false;

  // heap ops
  void heap_insert(int v);
  void heap_update(int v);
  int heap_pop();
  bool heap_less(int a, int b) const;
  void heap_sift_up(int i);
  void heap_sift_down(int i);

  void bump(int v);
  void decay() { var_inc_ /= 0.95; }

  signed char lit_value(int li) const {
    signed char a = assign_[idx_var(li)];
    if (a < 0) return -1;
    return (li & 1) ? (signed char)(1 - a) : a;
  }
  int decision_level() const { return (int)trail_lim_.size(); }

  void enqueue(int li, CRef reason);
  CRef propagate();
  void cancel_until(int lvl);
  int analyze(CRef conflict, std::vector<int>& learnt);  // returns backjump level
  bool lit_redundant(int li, unsigned ab_levels);
  CRef attach_clause(const std::vector<int>& lit_indices, bool learned);
  void reduce_db();
  static int64_t luby(int64_t i);
};

}  // namespace opmax
