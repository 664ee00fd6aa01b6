#pragma once

// Test-side oracles, independent of the pipeline under test:
//  - a direct interpreter over the parsed model (binders handled by
//    recursion, no grounding machinery),
//  - a deterministic generator of tiny integer models.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "opmax/ast.hpp"
#include "opmax/rational.hpp"

namespace oracle {

using opmax::BigInt;
using opmax::Rat;
using namespace opmax::ast;

struct Env {
  std::map<std::string, std::map<std::vector<long long>, Rat>> values;
  std::map<std::string, std::vector<Rat>> sets;  // concrete set quantities
  std::map<std::string, Rat> locals;             // binder variables

  std::optional<Rat> lookup(const std::string& name,
                            const std::vector<long long>& subs) const {
    auto it = values.find(name);
    if (it == values.end()) return std::nullopt;
    auto jt = it->second.find(subs);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
  }
};

inline Rat eval_num(const Expr& e, Env& env);

inline std::vector<Rat> eval_set(const Expr& e, Env& env) {
  switch (e.kind) {
    case ExprKind::SetLiteral: {
      std::vector<Rat> out;
      for (const auto& a : e.args) out.push_back(eval_num(a, env));
      return out;
    }
    case ExprKind::SetRange: {
      std::vector<Rat> out;
      Rat lo = eval_num(e.args[0], env), hi = eval_num(e.args[1], env);
      for (Rat v = lo; v <= hi; v += 1) out.push_back(v);
      return out;
    }
    case ExprKind::EmptySet:
      return {};
    case ExprKind::VarRef: {
      auto it = env.sets.find(e.name);
      if (it == env.sets.end()) throw std::runtime_error("unknown set " + e.name);
      return it->second;
    }
    case ExprKind::SetBinary: {
      auto l = eval_set(e.args[0], env), r = eval_set(e.args[1], env);
      std::vector<Rat> out;
      if (e.set_op == SetOp::Union) {
        out = l;
        for (const auto& v : r)
          if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      } else if (e.set_op == SetOp::Intersect) {
        for (const auto& v : l)
          if (std::find(r.begin(), r.end(), v) != r.end()) out.push_back(v);
      } else {
        for (const auto& v : l)
          if (std::find(r.begin(), r.end(), v) == r.end()) out.push_back(v);
      }
      return out;
    }
    default:
      throw std::runtime_error("not a set expression");
  }
}

inline bool eval_rel(const RelExpr& r, Env& env);

// expands binder conditions into local environments
inline void for_bindings(const std::vector<Condition>& conds, Env& env, size_t idx,
                         const std::function<void()>& body) {
  if (idx == conds.size()) {
    body();
    return;
  }
  const Condition& c = conds[idx];
  switch (c.kind) {
    case ConditionKind::RangeBinder: {
      Rat lo = eval_num(c.lo, env), hi = eval_num(c.hi, env);
      std::vector<std::string> names;
      for (const auto& v : c.vars) names.push_back(v.name);
      std::function<void(size_t)> assign = [&](size_t vi) {
        if (vi == names.size()) {
          for_bindings(conds, env, idx + 1, body);
          return;
        }
        for (Rat x = lo; x <= hi; x += 1) {
          env.locals[names[vi]] = x;
          assign(vi + 1);
        }
        env.locals.erase(names[vi]);
      };
      assign(0);
      return;
    }
    case ConditionKind::Membership: {
      auto members = eval_set(c.set, env);
      std::vector<std::string> names;
      for (const auto& v : c.vars) names.push_back(v.name);
      std::function<void(size_t)> assign = [&](size_t vi) {
        if (vi == names.size()) {
          for_bindings(conds, env, idx + 1, body);
          return;
        }
        for (const auto& x : members) {
          env.locals[names[vi]] = x;
          assign(vi + 1);
        }
        env.locals.erase(names[vi]);
      };
      assign(0);
      return;
    }
    case ConditionKind::ChainedBounds: {
      Rat lo = eval_num(c.lo, env), hi = eval_num(c.hi, env);
      std::vector<std::string> names;
      for (const auto& v : c.vars) names.push_back(v.name);
      std::function<void(size_t)> assign = [&](size_t vi) {
        if (vi == names.size()) {
          // verify the chain with strictness
          std::vector<Rat> seq{lo};
          for (const auto& n : names) seq.push_back(env.locals[n]);
          seq.push_back(hi);
          for (size_t i = 0; i + 1 < seq.size(); ++i) {
            if (c.strict[i] ? !(seq[i] < seq[i + 1]) : !(seq[i] <= seq[i + 1])) return;
          }
          for_bindings(conds, env, idx + 1, body);
          return;
        }
        for (Rat x = opmax::rat_ceil(lo); x <= hi; x += 1) {
          env.locals[names[vi]] = x;
          assign(vi + 1);
        }
        env.locals.erase(names[vi]);
      };
      assign(0);
      return;
    }
    case ConditionKind::Relation:
      if (eval_rel(c.relation, env)) for_bindings(conds, env, idx + 1, body);
      return;
    case ConditionKind::SubsetCond:
      throw std::runtime_error("subset condition unsupported");
  }
}

inline Rat eval_num(const Expr& e, Env& env) {
  switch (e.kind) {
    case ExprKind::Constant:
      return e.value;
    case ExprKind::VarRef: {
      if (e.args.empty()) {
        auto it = env.locals.find(e.name);
        if (it != env.locals.end()) return it->second;
      }
      std::vector<long long> subs;
      for (const auto& s : e.args) subs.push_back(opmax::rat_to_ll(eval_num(s, env)));
      auto v = env.lookup(e.name, subs);
      if (!v) throw std::runtime_error("no value for " + e.name);
      return *v;
    }
    case ExprKind::Negate:
      return -eval_num(e.args[0], env);
    case ExprKind::Add: {
      Rat s = 0;
      for (const auto& a : e.args) s += eval_num(a, env);
      return s;
    }
    case ExprKind::Mul: {
      Rat p = 1;
      for (const auto& a : e.args) p *= eval_num(a, env);
      return p;
    }
    case ExprKind::Div: {
      Rat d = eval_num(e.args[1], env);
      if (d == 0) throw std::runtime_error("division by zero");
      return eval_num(e.args[0], env) / d;
    }
    case ExprKind::Pow: {
      Rat b = eval_num(e.args[0], env);
      long long k = opmax::rat_to_ll(eval_num(e.args[1], env));
      Rat r = 1;
      bool inv = k < 0;
      if (inv) {
        if (b == 0) throw std::runtime_error("division by zero");
        b = Rat(1) / b;
        k = -k;
      }
      for (long long i = 0; i < k; ++i) r *= b;
      return r;
    }
    case ExprKind::BigSum:
    case ExprKind::BigProd: {
      Rat acc = e.kind == ExprKind::BigSum ? Rat(0) : Rat(1);
      for_bindings(e.binder, env, 0, [&] {
        Rat v = eval_num(e.args[0], env);
        if (e.kind == ExprKind::BigSum) acc += v;
        else acc *= v;
      });
      return acc;
    }
    case ExprKind::AbsOrCard: {
      try {
        return opmax::rat_abs(eval_num(e.args[0], env));
      } catch (const std::exception&) {
        return Rat(eval_set(e.args[0], env).size());
      }
    }
    case ExprKind::Indicator:
      return Rat(eval_rel(*e.rel, env) ? 1 : 0);
    case ExprKind::Floor:
      return opmax::rat_floor(eval_num(e.args[0], env));
    case ExprKind::Ceil:
      return opmax::rat_ceil(eval_num(e.args[0], env));
    case ExprKind::MaxOf:
    case ExprKind::MinOf: {
      std::vector<Rat> items;
      if (e.has_binder) {
        for_bindings(e.binder, env, 0, [&] { items.push_back(eval_num(e.args[0], env)); });
      } else if (e.args.size() == 1 && e.args[0].kind == ExprKind::SetLiteral) {
        for (const auto& a : e.args[0].args) items.push_back(eval_num(a, env));
      } else {
        for (const auto& a : e.args) items.push_back(eval_num(a, env));
      }
      if (items.empty()) throw std::runtime_error("empty max/min");
      Rat best = items[0];
      for (const auto& v : items)
        best = e.kind == ExprKind::MaxOf ? std::max(best, v) : std::min(best, v);
      return best;
    }
    default:
      throw std::runtime_error("not numeric");
  }
}

inline bool pair_holds(RelOp op, const Rat& a, const Rat& b) {
  switch (op) {
    case RelOp::Eq: return a == b;
    case RelOp::Ne: return a != b;
    case RelOp::Le: return a <= b;
    case RelOp::Lt: return a < b;
    case RelOp::Ge: return a >= b;
    case RelOp::Gt: return a > b;
    default: throw std::runtime_error("non-numeric relation");
  }
}

inline bool eval_rel(const RelExpr& r, Env& env) {
  // membership relations
  if (r.ops.size() == 1 && (r.ops[0] == RelOp::In || r.ops[0] == RelOp::NotIn)) {
    Rat v = eval_num(r.operands[0], env);
    auto set = eval_set(r.operands[1], env);
    bool in = std::find(set.begin(), set.end(), v) != set.end();
    return r.ops[0] == RelOp::In ? in : !in;
  }
  for (size_t i = 0; i + 1 < r.operands.size(); ++i)
    if (!pair_holds(r.ops[i], eval_num(r.operands[i], env),
                    eval_num(r.operands[i + 1], env)))
      return false;
  return true;
}

// Feasibility + objective of a full assignment, straight off the model AST.
// Domain memberships participate like any other relation.
struct ModelVerdict {
  bool feasible = true;
  Rat objective;
};

inline ModelVerdict judge(const Model& model, Env env) {
  ModelVerdict out;
  for (const auto& c : model.constraints) {
    bool ok = true;
    for_bindings(c.conditions, env, 0, [&] { ok = ok && eval_rel(c.relation, env); });
    if (!ok) {
      out.feasible = false;
      break;
    }
  }
  out.objective = eval_num(model.objective.expr, env);
  return out;
}

// ---- random tiny integer models -------------------------------------------

struct TinyModel {
  std::string text;              // model source
  std::vector<std::string> var_names;
  std::vector<std::vector<Rat>> domains;
  int width_n = 14, width_m = 2;
};

// operators drawn from the published operation table; widths chosen so no
// intermediate value can overflow
inline TinyModel generate_tiny_model(std::mt19937& rng) {
  TinyModel tm;
  int nvars = 1 + rng() % 4;
  std::ostringstream vars;
  for (int i = 0; i < nvars; ++i) tm.var_names.push_back("x_{" + std::to_string(i + 1) + "}");

  // domains: enumerations or small integer ranges within [-4, 7]
  std::ostringstream domains_text;
  for (int i = 0; i < nvars; ++i) {
    if (rng() % 2) {
      int lo = (int)(rng() % 5) - 2;
      int sz = 1 + rng() % 6;
      domains_text << tm.var_names[i] << " \\in \\{" << lo << ", \\dots, " << lo + sz
                   << "\\} \\\\ ";
      std::vector<Rat> d;
      for (int v = lo; v <= lo + sz; ++v) d.push_back(Rat(v));
      tm.domains.push_back(d);
    } else {
      std::vector<Rat> d;
      std::ostringstream lit;
      int sz = 1 + rng() % 4;
      lit << tm.var_names[i] << " \\in \\{";
      for (int k = 0; k <= sz; ++k) {
        int v = (int)(rng() % 10) - 3;
        while (std::find(d.begin(), d.end(), Rat(v)) != d.end()) v = (int)(rng() % 10) - 3;
        d.push_back(Rat(v));
        lit << (k ? ", " : "") << v;
      }
      lit << "\\} \\\\ ";
      domains_text << lit.str();
      tm.domains.push_back(d);
    }
  }

  // expression generator; depth-limited, overflow-safe by construction
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    auto var = [&] { return tm.var_names[rng() % nvars]; };
    if (depth == 0) {
      if (rng() % 3 == 0) {
        int v = (int)(rng() % 7) - 3;
        // negative literals need parentheses in term position
        return v < 0 ? "(" + std::to_string(v) + ")" : std::to_string(v);
      }
      return var();
    }
    switch (rng() % 9) {
      case 0: return gen(depth - 1) + " + " + gen(depth - 1);
      case 1: return gen(depth - 1) + " - " + gen(depth - 1);
      case 2: return std::to_string(1 + rng() % 3) + " " + var();
      case 3: return var() + " " + var();
      case 4: return "|" + gen(depth - 1) + "|";
      case 5: return "\\lfloor \\frac{" + gen(depth - 1) + "}{2} \\rfloor";
      case 6: return "\\lceil \\frac{" + gen(depth - 1) + "}{2} \\rceil";
      case 7: return "\\max \\{" + gen(depth - 1) + ", " + gen(depth - 1) + "\\}";
      default: return "(" + gen(depth - 1) + ")^2";
    }
  };

  std::ostringstream model;
  model << "\\begin{align}";
  model << (rng() % 2 ? "\\min" : "\\max") << " && " << gen(2) << " \\\\ ";
  int ncons = rng() % 3;
  for (int c = 0; c < ncons; ++c) {
    const char* ops[] = {"\\le", "<", "=", "\\neq", "\\ge", ">"};
    model << gen(1) << " " << ops[rng() % 6] << " " << gen(1) << " \\\\ ";
  }
  model << domains_text.str();
  std::string text = model.str();
  // drop the trailing " \\ "
  text.resize(text.size() - 4);
  text += "\\end{align}";
  tm.text = text;
  return tm;
}

}  // namespace oracle
