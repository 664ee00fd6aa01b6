#include "opmax/sat_solver.hpp"

#include <algorithm>

namespace opmax {

void SatSolver::ensure_var(int v) {
  while ((int)assign_.size() <= v) {
    int nv = (int)assign_.size();
    assign_.push_back(-1);
    phase_.push_back(0);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    seen_.push_back(0);
    if (nv > 0) heap_insert(nv);
  }
}

bool SatSolver::heap_less(int a, int b) const {
  if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
  return a < b;  // deterministic tie-break
}

void SatSolver::heap_sift_up(int i) {
  int v = heap_[i];
  while (i > 0) {
    int p = (i - 1) >> 1;
    if (heap_less(v, heap_[p])) {
      heap_[i] = heap_[p];
      heap_pos_[heap_[i]] = i;
      i = p;
    } else {
      break;
    }
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void SatSolver::heap_sift_down(int i) {
  int v = heap_[i];
  int n = (int)heap_.size();
  for (;;) {
    int c = 2 * i + 1;
    if (c >= n) break;
    if (c + 1 < n && heap_less(heap_[c + 1], heap_[c])) ++c;
    if (heap_less(heap_[c], v)) {
      heap_[i] = heap_[c];
      heap_pos_[heap_[i]] = i;
      i = c;
    } else {
      break;
    }
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void SatSolver::heap_insert(int v) {
  if (heap_pos_[v] >= 0) return;
  heap_.push_back(v);
  heap_pos_[v] = (int)heap_.size() - 1;
  heap_sift_up((int)heap_.size() - 1);
}

void SatSolver::heap_update(int v) {
  if (heap_pos_[v] >= 0) heap_sift_up(heap_pos_[v]);
}

int SatSolver::heap_pop() {
  int v = heap_[0];
  heap_pos_[v] = -1;
  int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_sift_down(0);
  }
  return v;
}

void SatSolver::bump(int v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  heap_update(v);
}

SatSolver::CRef SatSolver::attach_clause(const std::vector<int>& lit_indices,
                                         bool learned) {
  Clause c;
  c.offset = (uint32_t)arena_.size();
  c.size = (uint32_t)lit_indices.size();
  c.learned = learned;
  c.activity = 0.f;
  c.lbd = 0;
  arena_.insert(arena_.end(), lit_indices.begin(), lit_indices.end());
  CRef ref = (CRef)clauses_.size();
  clauses_.push_back(c);
  watches_[neg_idx(lit_indices[0])].push_back(Watcher{ref, lit_indices[1]});
  watches_[neg_idx(lit_indices[1])].push_back(Watcher{ref, lit_indices[0]});
  return ref;
}

bool SatSolver::add_clause(const std::vector<int>& lits) {
  if (top_level_conflict_) return false;
  std::vector<int> lidxs;
  lidxs.reserve(lits.size());
  for (int l : lits) {
    ensure_var(l > 0 ? l : -l);
    lidxs.push_back(lidx(l));
  }
  std::sort(lidxs.begin(), lidxs.end());
  lidxs.erase(std::unique(lidxs.begin(), lidxs.end()), lidxs.end());
  std::vector<int> keep;
  for (size_t i = 0; i < lidxs.size(); ++i) {
    if (i + 1 < lidxs.size() && (lidxs[i] ^ 1) == lidxs[i + 1]) return true;  // tautology
    signed char v = lit_value(lidxs[i]);
    if (v == 1 && level_[idx_var(lidxs[i])] == 0) return true;
    if (v == 0 && level_[idx_var(lidxs[i])] == 0) continue;
    keep.push_back(lidxs[i]);
  }
  if (keep.empty()) {
    top_level_conflict_ = true;
    return false;
  }
  if (keep.size() == 1) {
    if (lit_value(keep[0]) == 0) {
      top_level_conflict_ = true;
      return false;
    }
    if (lit_value(keep[0]) == -1) {
      enqueue(keep[0], kNoReason);
      if (propagate() != kNoReason) {
        top_level_conflict_ = true;
        return false;
      }
    }
    return true;
  }
  attach_clause(keep, false);
  return true;
}

void SatSolver::enqueue(int li, CRef reason) {
  int v = idx_var(li);
  assign_[v] = (li & 1) ? 0 : 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(li);
}

SatSolver::CRef SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int li = trail_[qhead_++];    // became true
    int falsified = neg_idx(li);  // clauses watching this literal must move
    auto& ws = watches_[li];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (lit_value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.cref];
      int* lits = arena_.data() + c.offset;
      if (lits[0] == falsified) std::swap(lits[0], lits[1]);
      if (lit_value(lits[0]) == 1) {
        ws[j++] = Watcher{w.cref, lits[0]};
        ++i;
        continue;
      }
      bool moved = false;
      for (uint32_t k = 2; k < c.size; ++k) {
        if (lit_value(lits[k]) != 0) {
          std::swap(lits[1], lits[k]);
          watches_[neg_idx(lits[1])].push_back(Watcher{w.cref, lits[0]});
          moved = true;
          break;
        }
      }
      if (moved) {
        ++i;
        continue;
      }
      if (lit_value(lits[0]) == 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        return w.cref;
      }
      enqueue(lits[0], w.cref);
      ws[j++] = ws[i++];
    }
    ws.resize(j);
  }
  return kNoReason;
}

void SatSolver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  size_t bound = trail_lim_[lvl];
  for (size_t i = trail_.size(); i-- > bound;) {
    int v = idx_var(trail_[i]);
    phase_[v] = assign_[v];
    assign_[v] = -1;
    reason_[v] = kNoReason;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(bound);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

bool SatSolver::lit_redundant(int li, unsigned ab_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(li);
  std::vector<int> marked;
  while (!analyze_stack_.empty()) {
    int l = analyze_stack_.back();
    analyze_stack_.pop_back();
    int v = idx_var(l);
    if (reason_[v] == kNoReason) {
      for (int mv : marked) seen_[mv] = 0;
      return false;
    }
    const Clause& c = clauses_[reason_[v]];
    const int* lits = arena_.data() + c.offset;
    for (uint32_t k = 0; k < c.size; ++k) {
      int p = lits[k];
      int pv = idx_var(p);
      if (pv == v || seen_[pv] || level_[pv] == 0) continue;
      if (reason_[pv] == kNoReason || !((ab_levels >> (level_[pv] & 31)) & 1)) {
        for (int mv : marked) seen_[mv] = 0;
        return false;
      }
      seen_[pv] = 1;
      marked.push_back(pv);
      analyze_stack_.push_back(p);
    }
  }
  for (int mv : marked) seen_[mv] = 0;
  return true;
}

int SatSolver::analyze(CRef conflict, std::vector<int>& learnt) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int path = 0;
  int li = -1;
  size_t idx = trail_.size();
  CRef creason = conflict;

  for (;;) {
    Clause& c = clauses_[creason];
    if (c.learned) c.activity += 1.0f;
    const int* lits = arena_.data() + c.offset;
    for (uint32_t k = 0; k < c.size; ++k) {
      if (li != -1 && k == 0) continue;  // lits[0] is the propagated literal
      int q = lits[k];
      int v = idx_var(q);
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        bump(v);
        if (level_[v] >= decision_level()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
    }
    while (!seen_[idx_var(trail_[--idx])]) {}
    li = trail_[idx];
    int v = idx_var(li);
    seen_[v] = 0;
    --path;
    if (path == 0) break;
    creason = reason_[v];
  }
  learnt[0] = neg_idx(li);
  std::vector<int> to_clear(learnt.begin(), learnt.end());

  // conflict-clause minimization
  unsigned ab = 0;
  for (size_t k = 1; k < learnt.size(); ++k)
    ab |= 1u << (level_[idx_var(learnt[k])] & 31);
  size_t jj = 1;
  for (size_t k = 1; k < learnt.size(); ++k) {
    int v = idx_var(learnt[k]);
    if (reason_[v] == kNoReason || !lit_redundant(learnt[k], ab))
      learnt[jj++] = learnt[k];
  }
  learnt.resize(jj);

  int back = 0;
  size_t max_i = 1;
  for (size_t k = 1; k < learnt.size(); ++k) {
    int lv = level_[idx_var(learnt[k])];
    if (lv > back) {
      back = lv;
      max_i = k;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  // marks of literals dropped by minimization must be cleared too
  for (int l : to_clear) seen_[idx_var(l)] = 0;
  return back;
}

int64_t SatSolver::luby(int64_t i) {
  int64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return (int64_t)1 << seq;
}

void SatSolver::reduce_db() {
  std::vector<CRef> cand;
  for (CRef i = 0; i < (CRef)clauses_.size(); ++i)
    if (clauses_[i].learned && clauses_[i].size > 2 && clauses_[i].lbd > 3)
      cand.push_back(i);
  if (cand.size() < 4000) return;
  std::sort(cand.begin(), cand.end(), [&](CRef a, CRef b) {
    if (clauses_[a].activity != clauses_[b].activity)
      return clauses_[a].activity < clauses_[b].activity;
    return a < b;
  });
  std::vector<bool> del(clauses_.size(), false);
  for (size_t i = 0; i < cand.size() / 2; ++i) {
    CRef cr = cand[i];
    int v0 = idx_var(arena_[clauses_[cr].offset]);
    bool is_reason = assign_[v0] >= 0 && reason_[v0] == cr;
    if (!is_reason) del[cr] = true;
  }
  std::vector<int> new_arena;
  new_arena.reserve(arena_.size());
  std::vector<Clause> new_clauses;
  new_clauses.reserve(clauses_.size());
  std::vector<CRef> remap(clauses_.size(), kNoReason);
  for (CRef i = 0; i < (CRef)clauses_.size(); ++i) {
    if (del[i]) continue;
    Clause c = clauses_[i];
    uint32_t off = (uint32_t)new_arena.size();
    for (uint32_t k = 0; k < c.size; ++k) new_arena.push_back(arena_[c.offset + k]);
    c.offset = off;
    remap[i] = (CRef)new_clauses.size();
    new_clauses.push_back(c);
  }
  arena_ = std::move(new_arena);
  clauses_ = std::move(new_clauses);
  for (auto& r : reason_)
    if (r != kNoReason) r = remap[r];
  for (auto& wl : watches_) wl.clear();
  for (CRef i = 0; i < (CRef)clauses_.size(); ++i) {
    const Clause& c = clauses_[i];
    watches_[neg_idx(arena_[c.offset])].push_back(
        Watcher{i, (int)arena_[c.offset + 1]});
    watches_[neg_idx(arena_[c.offset + 1])].push_back(
        Watcher{i, (int)arena_[c.offset]});
  }
}

SatSolver::Result SatSolver::solve(const std::vector<int>& assumptions) {
  if (top_level_conflict_) return Result::Unsat;
  cancel_until(0);
  if (propagate() != kNoReason) {
    top_level_conflict_ = true;
    return Result::Unsat;
  }

  std::vector<int> assume;
  assume.reserve(assumptions.size());
  for (int l : assumptions) {
    ensure_var(l > 0 ? l : -l);
    assume.push_back(lidx(l));
  }

  int64_t conflicts_at_start = total_conflicts_;
  int64_t restart_idx = 0;
  int64_t next_restart = 64 * luby(restart_idx);
  std::vector<int> learnt;
  int check_counter = 0;

  for (;;) {
    CRef conf = propagate();
    if (conf != kNoReason) {
      ++total_conflicts_;
      if (decision_level() == 0) {
        top_level_conflict_ = true;
        return Result::Unsat;
      }
      int back = analyze(conf, learnt);
      cancel_until(back);
      if (learnt.size() == 1) {
        if (lit_value(learnt[0]) == 0) {
          // asserting unit contradicts an assumption-level assignment
          if (back == 0) {
            top_level_conflict_ = true;
            return Result::Unsat;
          }
          return Result::Unsat;
        }
        enqueue(learnt[0], kNoReason);
      } else {
        CRef cr = attach_clause(learnt, true);
        int lbd = 0;
        unsigned seen_levels = 0;
        for (int l : learnt) {
          int lv = level_[idx_var(l)] & 31;
          if (!((seen_levels >> lv) & 1)) {
            seen_levels |= 1u << lv;
            ++lbd;
          }
        }
        clauses_[cr].lbd = lbd;
        enqueue(learnt[0], cr);
      }
      decay();
      if (total_conflicts_ - conflicts_at_start >= next_restart) {
        ++restart_idx;
        next_restart = total_conflicts_ - conflicts_at_start + 64 * luby(restart_idx);
        int keep = (int)assume.size() < decision_level() ? (int)assume.size()
                                                         : decision_level();
        cancel_until(keep);
      }
      if (total_conflicts_ % 8192 == 0) reduce_db();
      if (conflict_budget_ >= 0 &&
          total_conflicts_ - conflicts_at_start > conflict_budget_)
        return Result::Unknown;
      continue;
    }

    if (++check_counter >= 256) {
      check_counter = 0;
      if (has_deadline_ && std::chrono::steady_clock::now() > deadline_)
        return Result::Unknown;
    }

    if ((size_t)decision_level() < assume.size()) {
      int li = assume[decision_level()];
      signed char v = lit_value(li);
      if (v == 0) return Result::Unsat;
      trail_lim_.push_back((int)trail_.size());
      if (v == -1) enqueue(li, kNoReason);
      continue;
    }

    int next = -1;
    if (index_branching_) {
      for (int v = 1; v <= num_vars(); ++v)
        if (assign_[v] < 0) {
          next = v;
          break;
        }
    } else {
      while (!heap_.empty()) {
        if (assign_[heap_[0]] < 0) {
          next = heap_pop();
          break;
        }
        heap_pop();
      }
      if (next == -1) {
        for (int v = 1; v <= num_vars(); ++v)
          if (assign_[v] < 0) {
            next = v;
            break;
          }
      }
    }
    if (next == -1) {
      model_.assign(assign_.begin(), assign_.end());
      cancel_until(0);
      return Result::Sat;
    }
    trail_lim_.push_back((int)trail_.size());
    bool phase = index_branching_ ? true : phase_[next] == 1;
    enqueue(2 * next + (phase ? 0 : 1), kNoReason);
  }
}

}  // namespace opmax
