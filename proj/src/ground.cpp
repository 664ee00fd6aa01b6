#include "opmax/ground.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace opmax {

using namespace ast;

// ---- SetVal ---------------------------------------------------------------

std::vector<Rat> SetVal::members() const {
  if (!is_range) return elems;
  std::vector<Rat> out;
  for (Rat v = lo; v <= hi; v += 1) out.push_back(v);
  return out;
}

size_t SetVal::size() const {
  if (!is_range) return elems.size();
  if (hi < lo) return 0;
  return (size_t)rat_to_ll(rat_floor(hi - lo)) + 1;
}

bool SetVal::contains(const Rat& v) const {
  if (is_range) return v >= lo && v <= hi && rat_is_int(v - lo);
  return std::find(elems.begin(), elems.end(), v) != elems.end();
}

namespace {

// ---- folding context ------------------------------------------------------

struct FoldCtx {
  const KnownBindings& bindings;
  const std::map<VarKey, Expr>* defines = nullptr;
  std::map<std::string, Rat> local;   // binder variables in scope
  int define_depth = 0;
  long long* node_budget = nullptr;
};

bool is_const(const Expr& e) { return e.kind == ExprKind::Constant; }

Expr constant(Rat v, Span sp = {}) {
  Expr e(ExprKind::Constant);
  e.value = std::move(v);
  e.span = sp;
  return e;
}

Expr fold(const Expr& e, FoldCtx& ctx);

// A concrete finite set, or nullopt if the expression is not (yet) one.
std::optional<SetVal> concrete_set(const Expr& e) {
  switch (e.kind) {
    case ExprKind::EmptySet:
      return SetVal{};
    case ExprKind::SetLiteral: {
      SetVal s;
      for (const auto& a : e.args) {
        if (!is_const(a)) return std::nullopt;
        if (!s.contains(a.value)) s.elems.push_back(a.value);
      }
      return s;
    }
    case ExprKind::SetRange: {
      if (!is_const(e.args[0]) || !is_const(e.args[1])) return std::nullopt;
      if (!rat_is_int(e.args[0].value) || !rat_is_int(e.args[1].value))
        throw ground_error("NonIntegerRangeEndpoint",
                           "range set endpoints must be integers", e.span);
      SetVal s;
      s.is_range = true;
      s.lo = e.args[0].value;
      s.hi = e.args[1].value;
      return s;
    }
    case ExprKind::SetBinary: {
      auto l = concrete_set(e.args[0]);
      auto r = concrete_set(e.args[1]);
      if (!l || !r) return std::nullopt;
      SetVal out;
      auto lm = l->members();
      if (e.set_op == SetOp::Union) {
        out.elems = lm;
        for (const auto& v : r->members())
          if (!out.contains(v)) out.elems.push_back(v);
      } else if (e.set_op == SetOp::Intersect) {
        for (const auto& v : lm)
          if (r->contains(v)) out.elems.push_back(v);
      } else {
        for (const auto& v : lm)
          if (!r->contains(v)) out.elems.push_back(v);
      }
      return out;
    }
    default:
      return std::nullopt;
  }
}

Expr set_to_expr(const SetVal& s, Span sp) {
  if (s.is_range) {
    Expr e(ExprKind::SetRange);
    e.span = sp;
    e.args.push_back(constant(s.lo));
    e.args.push_back(constant(s.hi));
    return e;
  }
  if (s.elems.empty()) {
    Expr e(ExprKind::EmptySet);
    e.span = sp;
    return e;
  }
  Expr e(ExprKind::SetLiteral);
  e.span = sp;
  for (const auto& v : s.elems) e.args.push_back(constant(v));
  return e;
}

bool is_set_kind(const Expr& e) {
  switch (e.kind) {
    case ExprKind::SetLiteral: case ExprKind::SetRange: case ExprKind::SetPredef:
    case ExprKind::SetBinary: case ExprKind::SetBig: case ExprKind::EmptySet:
      return true;
    default:
      return false;
  }
}

// ---- relation folding -----------------------------------------------------

std::optional<bool> eval_pair(RelOp op, const Expr& a, const Expr& b) {
  if (op == RelOp::In || op == RelOp::NotIn) {
    if (!is_const(a)) return std::nullopt;
    auto s = concrete_set(b);
    if (!s) {
      if (b.kind == ExprKind::SetPredef) {
        bool in = false;
        const Rat& v = a.value;
        switch (b.predef) {
          case PredefSet::Real: in = true; break;
          case PredefSet::RealPos: in = v > 0; break;
          case PredefSet::RealNeg: in = v < 0; break;
          case PredefSet::Int: in = rat_is_int(v); break;
          case PredefSet::IntPos: in = rat_is_int(v) && v > 0; break;
          case PredefSet::IntNeg: in = rat_is_int(v) && v < 0; break;
          case PredefSet::Nat: in = rat_is_int(v) && v >= 0; break;
        }
        return op == RelOp::In ? in : !in;
      }
      return std::nullopt;
    }
    bool in = s->contains(a.value);
    return op == RelOp::In ? in : !in;
  }
  if (op == RelOp::Subset || op == RelOp::SubsetEq || op == RelOp::SubsetNeq) {
    auto sa = concrete_set(a), sb = concrete_set(b);
    if (!sa || !sb) return std::nullopt;
    bool subset = true;
    for (const auto& v : sa->members())
      if (!sb->contains(v)) { subset = false; break; }
    if (op == RelOp::SubsetEq) return subset;
    return subset && sa->size() < sb->size();  // proper subset
  }
  // numeric comparison; set operands compare by set equality for Eq/Ne
  auto sa = concrete_set(a), sb = concrete_set(b);
  if (sa && sb && (op == RelOp::Eq || op == RelOp::Ne)) {
    auto ma = sa->members(), mb = sb->members();
    std::sort(ma.begin(), ma.end());
    std::sort(mb.begin(), mb.end());
    bool eq = ma == mb;
    return op == RelOp::Eq ? eq : !eq;
  }
  if (!is_const(a) || !is_const(b)) return std::nullopt;
  const Rat &x = a.value, &y = b.value;
  switch (op) {
    case RelOp::Eq: return x == y;
    case RelOp::Ne: return x != y;
    case RelOp::Le: return x <= y;
    case RelOp::Lt: return x < y;
    case RelOp::Ge: return x >= y;
    case RelOp::Gt: return x > y;
    default: return std::nullopt;
  }
}

std::optional<bool> eval_relation(const RelExpr& r, FoldCtx& ctx) {
  std::vector<Expr> ops;
  ops.reserve(r.operands.size());
  for (const auto& o : r.operands) ops.push_back(fold(o, ctx));
  bool all = true;
  for (size_t i = 0; i + 1 < ops.size(); ++i) {
    auto v = eval_pair(r.ops[i], ops[i], ops[i + 1]);
    if (!v) return std::nullopt;
    all = all && *v;
  }
  return all;
}

// ---- condition expansion ---------------------------------------------------

struct BinderEnv {
  std::vector<std::pair<std::string, Rat>> vals;
};

// Expands a condition list into binder tuples. Returns nullopt when some
// endpoint or set is not yet known.
std::optional<std::vector<BinderEnv>> expand_conditions(
    const std::vector<Condition>& conds, FoldCtx& base, long long cap) {
  std::vector<BinderEnv> envs{BinderEnv{}};

  auto fold_with = [&](const Expr& e, const BinderEnv& env) {
    FoldCtx ctx = base;
    for (const auto& [n, v] : env.vals) ctx.local[n] = v;
    return fold(e, ctx);
  };

  for (const auto& c : conds) {
    std::vector<BinderEnv> next;
    switch (c.kind) {
      case ConditionKind::RangeBinder:
      case ConditionKind::ChainedBounds: {
        for (const auto& env : envs) {
          Expr lo = fold_with(c.lo, env), hi = fold_with(c.hi, env);
          if (!is_const(lo) || !is_const(hi)) return std::nullopt;
          if (!rat_is_int(lo.value) || !rat_is_int(hi.value)) {
            if (c.kind == ConditionKind::RangeBinder)
              throw ground_error("NonIntegerRangeEndpoint",
                                 "binder endpoints must be integers", c.span);
          }
          long long a = rat_to_ll(rat_ceil(lo.value));
          long long b = rat_to_ll(rat_floor(hi.value));
          // cartesian product over the bound variables
          std::vector<BinderEnv> local{env};
          for (const auto& v : c.vars) {
            std::vector<BinderEnv> grown;
            for (const auto& le : local) {
              for (long long x = a; x <= b; ++x) {
                BinderEnv g = le;
                g.vals.emplace_back(v.name, Rat(x));
                grown.push_back(std::move(g));
                if ((long long)grown.size() > cap)
                  throw ground_error("ExpansionLimitExceeded",
                                     "quantifier expansion exceeds limit", c.span);
              }
            }
            local = std::move(grown);
          }
          if (c.kind == ConditionKind::ChainedBounds) {
            // re-check the whole chain with strictness
            std::vector<BinderEnv> kept;
            for (auto& le : local) {
              std::vector<Rat> seq{lo.value};
              for (const auto& v : c.vars) {
                for (const auto& [n, val] : le.vals)
                  if (n == v.name) { seq.push_back(val); break; }
              }
              seq.push_back(hi.value);
              bool ok = true;
              for (size_t i = 0; i + 1 < seq.size(); ++i)
                ok &= c.strict[i] ? seq[i] < seq[i + 1] : seq[i] <= seq[i + 1];
              if (ok) kept.push_back(std::move(le));
            }
            local = std::move(kept);
          }
          for (auto& le : local) next.push_back(std::move(le));
          if ((long long)next.size() > cap)
            throw ground_error("ExpansionLimitExceeded",
                               "quantifier expansion exceeds limit", c.span);
        }
        break;
      }
      case ConditionKind::Membership: {
        for (const auto& env : envs) {
          Expr s = fold_with(c.set, env);
          if (s.kind == ExprKind::SetPredef)
            throw ground_error("UnboundedQuantifier",
                               "quantifier over an infinite set", c.span);
          auto sv = concrete_set(s);
          if (!sv) return std::nullopt;
          auto mem = sv->members();
          std::vector<BinderEnv> local{env};
          for (const auto& v : c.vars) {
            std::vector<BinderEnv> grown;
            for (const auto& le : local) {
              for (const auto& x : mem) {
                BinderEnv g = le;
                g.vals.emplace_back(v.name, x);
                grown.push_back(std::move(g));
              }
            }
            local = std::move(grown);
            if ((long long)local.size() > cap)
              throw ground_error("ExpansionLimitExceeded",
                                 "quantifier expansion exceeds limit", c.span);
          }
          for (auto& le : local) next.push_back(std::move(le));
        }
        break;
      }
      case ConditionKind::SubsetCond:
        throw ground_error("UnsupportedQuantifier",
                           "subset-valued quantifiers are not supported", c.span);
      case ConditionKind::Relation: {
        for (const auto& env : envs) {
          FoldCtx ctx = base;
          for (const auto& [n, v] : env.vals) ctx.local[n] = v;
          auto val = eval_relation(c.relation, ctx);
          if (!val) return std::nullopt;
          if (*val) next.push_back(env);
        }
        break;
      }
    }
    envs = std::move(next);
  }
  return envs;
}

// ---- expression folding ----------------------------------------------------

Expr fold_add(std::vector<Expr> terms, Span sp) {
  std::vector<Expr> out;
  Rat c = 0;
  for (auto& t : terms) {
    if (t.kind == ExprKind::Add) {
      for (auto& k : t.args) {
        if (is_const(k)) c += k.value;
        else out.push_back(std::move(k));
      }
    } else if (is_const(t)) {
      c += t.value;
    } else if (t.kind == ExprKind::Negate && is_const(t.args[0])) {
      c -= t.args[0].value;
    } else {
      out.push_back(std::move(t));
    }
  }
  if (out.empty()) return constant(c, sp);
  if (c != 0) out.push_back(constant(c, sp));
  if (out.size() == 1) return std::move(out[0]);
  Expr e(ExprKind::Add);
  e.span = sp;
  e.args = std::move(out);
  return e;
}

Expr fold_mul(std::vector<Expr> factors, Span sp) {
  std::vector<Expr> out;
  Rat c = 1;
  for (auto& f : factors) {
    if (f.kind == ExprKind::Mul) {
      for (auto& k : f.args) {
        if (is_const(k)) c *= k.value;
        else out.push_back(std::move(k));
      }
    } else if (is_const(f)) {
      c *= f.value;
    } else {
      out.push_back(std::move(f));
    }
  }
  if (c == 0) return constant(Rat(0), sp);
  if (out.empty()) return constant(c, sp);
  if (c != 1) {
    out.insert(out.begin(), constant(c, sp));
  }
  if (out.size() == 1) return std::move(out[0]);
  Expr e(ExprKind::Mul);
  e.span = sp;
  e.args = std::move(out);
  return e;
}

Expr fold(const Expr& e, FoldCtx& ctx) {
  if (ctx.node_budget && --*ctx.node_budget < 0)
    throw ground_error("ExpansionLimitExceeded",
                       "simplification exceeds the node budget", e.span);
  switch (e.kind) {
    case ExprKind::Constant:
    case ExprKind::SetPredef:
    case ExprKind::EmptySet:
      return e;

    case ExprKind::VarRef: {
      // binder variable
      if (e.args.empty()) {
        auto it = ctx.local.find(e.name);
        if (it != ctx.local.end()) return constant(it->second, e.span);
      }
      Expr out = e;
      bool all_const = true;
      for (auto& s : out.args) {
        s = fold(s, ctx);
        all_const &= is_const(s);
      }
      if (!all_const) return out;
      VarKey key{out.name, {}};
      for (const auto& s : out.args) {
        if (!rat_is_int(s.value)) return out;  // caught later as NonConstantSubscript
        key.subs.push_back(rat_to_ll(s.value));
      }
      auto it = ctx.bindings.find(key);
      if (it != ctx.bindings.end()) {
        if (it->second.is_set) return set_to_expr(it->second.set, e.span);
        return constant(it->second.num, e.span);
      }
      if (ctx.defines) {
        auto dit = ctx.defines->find(key);
        if (dit != ctx.defines->end()) {
          if (ctx.define_depth > 64)
            throw ground_error("CyclicDefinition",
                               "cyclic definition involving '" + key.str() + "'", e.span);
          FoldCtx sub{ctx.bindings, ctx.defines, {}, ctx.define_depth + 1};
          return fold(dit->second, sub);
        }
      }
      return out;
    }

    case ExprKind::Negate: {
      Expr k = fold(e.args[0], ctx);
      if (is_const(k)) return constant(-k.value, e.span);
      if (k.kind == ExprKind::Negate) return std::move(k.args[0]);
      Expr out(ExprKind::Negate);
      out.span = e.span;
      out.args.push_back(std::move(k));
      return out;
    }

    case ExprKind::Add: {
      std::vector<Expr> terms;
      for (const auto& a : e.args) terms.push_back(fold(a, ctx));
      return fold_add(std::move(terms), e.span);
    }

    case ExprKind::Mul: {
      std::vector<Expr> fs;
      for (const auto& a : e.args) fs.push_back(fold(a, ctx));
      return fold_mul(std::move(fs), e.span);
    }

    case ExprKind::Div: {
      Expr num = fold(e.args[0], ctx), den = fold(e.args[1], ctx);
      if (is_const(den) && den.value == 0)
        throw ground_error("DivisionByZeroConstant", "division by zero", e.span);
      if (is_const(num) && is_const(den)) return constant(num.value / den.value, e.span);
      if (is_const(num) && num.value == 0) return constant(Rat(0), e.span);
      Expr out(ExprKind::Div);
      out.span = e.span;
      out.args.push_back(std::move(num));
      out.args.push_back(std::move(den));
      return out;
    }

    case ExprKind::Pow: {
      Expr base = fold(e.args[0], ctx), ex = fold(e.args[1], ctx);
      if (is_const(ex) && rat_is_int(ex.value)) {
        long long k = rat_to_ll(ex.value);
        if (k == 0) return constant(Rat(1), e.span);
        if (k == 1) return base;
        if (is_const(base)) {
          if (base.value == 0 && k < 0)
            throw ground_error("DivisionByZeroConstant", "zero to a negative power", e.span);
          Rat r = 1;
          Rat b = k < 0 ? Rat(1) / base.value : base.value;
          for (long long i = 0; i < (k < 0 ? -k : k); ++i) r *= b;
          return constant(r, e.span);
        }
      }
      Expr out(ExprKind::Pow);
      out.span = e.span;
      out.args.push_back(std::move(base));
      out.args.push_back(std::move(ex));
      return out;
    }

    case ExprKind::BigSum:
    case ExprKind::BigProd: {
      auto envs = expand_conditions(e.binder, ctx, 2'000'000);
      if (!envs) {
        // leave in place; simplify body under shadowed binder names
        Expr out = e;
        FoldCtx sub = ctx;
        for (const auto& c : e.binder)
          for (const auto& v : c.vars) sub.local.erase(v.name);
        out.args[0] = fold(out.args[0], sub);
        return out;
      }
      std::vector<Expr> parts;
      for (const auto& env : *envs) {
        FoldCtx sub = ctx;
        for (const auto& [n, v] : env.vals) sub.local[n] = v;
        parts.push_back(fold(e.args[0], sub));
      }
      if (e.kind == ExprKind::BigSum) return fold_add(std::move(parts), e.span);
      return fold_mul(std::move(parts), e.span);
    }

    case ExprKind::AbsOrCard: {
      Expr k = fold(e.args[0], ctx);
      if (auto s = concrete_set(k)) return constant(Rat(s->size()), e.span);
      if (is_set_kind(k))
        throw ground_error("UnresolvedSet", "cardinality of an unresolved set", e.span);
      if (is_const(k)) return constant(rat_abs(k.value), e.span);
      Expr out(ExprKind::AbsOrCard);
      out.span = e.span;
      out.args.push_back(std::move(k));
      return out;
    }

    case ExprKind::Indicator: {
      auto v = eval_relation(*e.rel, ctx);
      if (v) return constant(Rat(*v ? 1 : 0), e.span);
      Expr out(ExprKind::Indicator);
      out.span = e.span;
      out.rel = std::make_unique<RelExpr>(*e.rel);
      for (auto& o : out.rel->operands) o = fold(o, ctx);
      return out;
    }

    case ExprKind::Floor:
    case ExprKind::Ceil: {
      Expr k = fold(e.args[0], ctx);
      if (is_const(k))
        return constant(e.kind == ExprKind::Floor ? rat_floor(k.value)
                                                  : rat_ceil(k.value), e.span);
      Expr out(e.kind);
      out.span = e.span;
      out.args.push_back(std::move(k));
      return out;
    }

    case ExprKind::MaxOf:
    case ExprKind::MinOf: {
      bool is_max = e.kind == ExprKind::MaxOf;
      std::vector<Expr> items;
      if (e.has_binder) {
        auto envs = expand_conditions(e.binder, ctx, 2'000'000);
        if (!envs) {
          Expr out = e;
          FoldCtx sub = ctx;
          for (const auto& c : e.binder)
            for (const auto& v : c.vars) sub.local.erase(v.name);
          out.args[0] = fold(out.args[0], sub);
          return out;
        }
        for (const auto& env : *envs) {
          FoldCtx sub = ctx;
          for (const auto& [n, v] : env.vals) sub.local[n] = v;
          items.push_back(fold(e.args[0], sub));
        }
      } else if (e.args.size() > 1) {
        // an already-expanded argument list
        for (const auto& a : e.args) items.push_back(fold(a, ctx));
      } else {
        Expr arg = fold(e.args[0], ctx);
        if (arg.kind == ExprKind::SetLiteral) {
          for (auto& a : arg.args) items.push_back(std::move(a));
        } else if (auto s = concrete_set(arg)) {
          for (const auto& v : s->members()) items.push_back(constant(v, e.span));
        } else if (is_set_kind(arg)) {
          throw ground_error("UnresolvedSet", "max/min over an unresolved set", e.span);
        } else {
          items.push_back(std::move(arg));
        }
      }
      if (items.empty())
        throw ground_error("EmptyMaxMin", "max/min over an empty collection", e.span);
      if (items.size() == 1) return std::move(items[0]);
      bool all_const = true;
      for (const auto& i : items) all_const &= is_const(i);
      if (all_const) {
        Rat best = items[0].value;
        for (const auto& i : items)
          best = is_max ? std::max(best, i.value) : std::min(best, i.value);
        return constant(best, e.span);
      }
      Expr out(e.kind);
      out.span = e.span;
      out.args = std::move(items);
      return out;
    }

    case ExprKind::SetLiteral:
    case ExprKind::SetRange: {
      Expr out = e;
      for (auto& a : out.args) a = fold(a, ctx);
      return out;
    }
    case ExprKind::SetBinary: {
      Expr out = e;
      out.args[0] = fold(e.args[0], ctx);
      out.args[1] = fold(e.args[1], ctx);
      if (auto s = concrete_set(out)) return set_to_expr(*s, e.span);
      return out;
    }
    case ExprKind::SetBig: {
      auto envs = expand_conditions(e.binder, ctx, 2'000'000);
      if (!envs) return e;
      SetVal acc;
      bool first = true;
      for (const auto& env : *envs) {
        FoldCtx sub = ctx;
        for (const auto& [n, v] : env.vals) sub.local[n] = v;
        Expr part = fold(e.args[0], sub);
        auto s = concrete_set(part);
        if (!s) return e;
        auto mem = s->members();
        if (first) {
          acc.elems = mem;
          first = false;
        } else if (e.set_op == SetOp::Union) {
          for (const auto& v : mem)
            if (!acc.contains(v)) acc.elems.push_back(v);
        } else {
          std::vector<Rat> kept;
          for (const auto& v : acc.elems)
            if (std::find(mem.begin(), mem.end(), v) != mem.end()) kept.push_back(v);
          acc.elems = std::move(kept);
        }
      }
      return set_to_expr(acc, e.span);
    }
  }
  return e;
}

}  // namespace

ast::Expr simplify_expr(const ast::Expr& expr, const KnownBindings& bindings) {
  FoldCtx ctx{bindings};
  return fold(expr, ctx);
}

// ---- grounding -------------------------------------------------------------

namespace {

struct WorkItem {
  RelExpr relation;
  std::vector<Condition> conditions;
  Span span;
};

struct Grounder {
  const ExpansionLimits& limits;
  KnownBindings bindings;
  std::map<VarKey, Expr> defines;
  std::set<std::string> domain_names;  // base names carrying a domain constraint
  std::vector<WorkItem> items;
  Expr objective;
  ast::Direction direction;
  std::vector<std::string> warnings;
  long long aux_counter = 0;
  long long node_budget = 0;

  explicit Grounder(const ExpansionLimits& lim) : limits(lim) {
    node_budget = lim.max_nodes;
  }

  FoldCtx ctx() { return FoldCtx{bindings, &defines, {}, 0, &node_budget}; }

  static bool is_bare_varref(const Expr& e) { return e.kind == ExprKind::VarRef; }

  static std::optional<VarKey> concrete_key(const Expr& e) {
    if (e.kind != ExprKind::VarRef) return std::nullopt;
    VarKey k{e.name, {}};
    for (const auto& s : e.args) {
      if (!is_const(s) || !rat_is_int(s.value)) return std::nullopt;
      k.subs.push_back(rat_to_ll(s.value));
    }
    return k;
  }

  static bool mentions(const Expr& e, const std::string& name) {
    if (e.kind == ExprKind::VarRef && e.name == name) return true;
    for (const auto& a : e.args)
      if (mentions(a, name)) return true;
    if (e.rel)
      for (const auto& o : e.rel->operands)
        if (mentions(o, name)) return true;
    for (const auto& c : e.binder) {
      if (mentions(c.lo, name) || mentions(c.hi, name) || mentions(c.set, name))
        return true;
      for (const auto& o : c.relation.operands)
        if (mentions(o, name)) return true;
    }
    return false;
  }

  void scan_domain_names(const ast::Model& model) {
    auto scan_rel = [&](const RelExpr& r) {
      if (r.ops.size() == 1 && (r.ops[0] == RelOp::In || r.ops[0] == RelOp::NotIn)) {
        if (r.operands[0].kind == ExprKind::VarRef)
          domain_names.insert(r.operands[0].name);
      }
      bool all_le = !r.ops.empty();
      for (RelOp op : r.ops) all_le &= op == RelOp::Le || op == RelOp::Lt;
      bool all_ge = !r.ops.empty();
      for (RelOp op : r.ops) all_ge &= op == RelOp::Ge || op == RelOp::Gt;
      if (r.ops.size() >= 2 && (all_le || all_ge)) {
        for (size_t i = 1; i + 1 < r.operands.size(); ++i)
          if (r.operands[i].kind == ExprKind::VarRef)
            domain_names.insert(r.operands[i].name);
      }
    };
    for (const auto& c : model.constraints) scan_rel(c.relation);
  }

  // Assignment expression: an equality whose one side is a bare varref with
  // concrete subscripts, whose base name carries no domain constraint, and
  // whose other side does not mention it.
  bool try_extract_assignment(WorkItem& it) {
    if (!it.conditions.empty()) return false;
    const RelExpr& r = it.relation;
    if (r.ops.size() != 1 || r.ops[0] != RelOp::Eq) return false;
    for (int side = 0; side < 2; ++side) {
      const Expr& lhs = r.operands[side];
      const Expr& rhs = r.operands[1 - side];
      auto key = concrete_key(lhs);
      if (!key) continue;
      if (domain_names.count(key->name)) continue;
      if (mentions(rhs, key->name)) continue;  // stays a relation
      FoldCtx c = ctx();
      Expr folded = fold(rhs, c);
      if (is_const(folded)) {
        bindings[*key] = Binding{false, folded.value, {}};
      } else if (auto s = concrete_set(folded)) {
        bindings[*key] = Binding{true, Rat(0), *s};
      } else if (bool(concrete_key(folded)) || !has_unknown_structure(folded)) {
        // defining equality for a quantity without a domain: substitute
        defines[*key] = std::move(folded);
      } else {
        continue;
      }
      return true;
    }
    return false;
  }

  // True when the expression still contains binders or set syntax that may
  // fold away later; such right-hand sides are not captured as defines yet.
  static bool has_unknown_structure(const Expr& e) {
    switch (e.kind) {
      case ExprKind::BigSum: case ExprKind::BigProd: case ExprKind::SetBig:
      case ExprKind::SetLiteral: case ExprKind::SetRange: case ExprKind::SetPredef:
      case ExprKind::SetBinary: case ExprKind::EmptySet:
        return true;
      default:
        break;
    }
    for (const auto& a : e.args)
      if (has_unknown_structure(a)) return true;
    if (e.rel)
      for (const auto& o : e.rel->operands)
        if (has_unknown_structure(o)) return true;
    return false;
  }

  void run(const ast::Model& model, const std::vector<ast::Assignment>& data) {
    direction = model.objective.direction;
    objective = model.objective.expr;
    if (!model.objective.conditions.empty())
      throw ground_error("UnsupportedQuantifier",
                         "objective-level quantifiers are not supported",
                         model.objective.span);
    scan_domain_names(model);
    for (const auto& c : model.constraints)
      items.push_back(WorkItem{c.relation, c.conditions, c.span});
    for (const auto& a : data) {
      RelExpr r;
      r.span = a.span;
      r.operands.push_back(a.lhs);
      r.operands.push_back(a.rhs);
      r.ops.push_back(RelOp::Eq);
      items.push_back(WorkItem{std::move(r), {}, a.span});
    }

    bool changed = true;
    while (changed) {
      changed = false;

      // extract assignment expressions, first match in document order,
      // repeating until none qualify
      for (;;) {
        bool found = false;
        for (size_t i = 0; i < items.size(); ++i) {
          if (try_extract_assignment(items[i])) {
            items.erase(items.begin() + (long)i);
            found = true;
            changed = true;
            break;
          }
        }
        if (!found) break;
      }

      // fold everything against current knowledge
      for (auto& it : items) {
        FoldCtx c = ctx();
        for (auto& o : it.relation.operands) o = fold(o, c);
      }
      {
        FoldCtx c = ctx();
        objective = fold(objective, c);
      }

      // expand quantifiers whose scopes are concrete
      std::vector<WorkItem> expanded;
      for (auto& it : items) {
        if (it.conditions.empty()) {
          expanded.push_back(std::move(it));
          continue;
        }
        FoldCtx c = ctx();
        auto envs = expand_conditions(it.conditions, c, limits.max_constraints);
        if (!envs) {
          expanded.push_back(std::move(it));
          continue;
        }
        changed = true;
        for (const auto& env : *envs) {
          WorkItem inst;
          inst.span = it.span;
          inst.relation = it.relation;
          FoldCtx sub = ctx();
          for (const auto& [n, v] : env.vals) sub.local[n] = v;
          for (auto& o : inst.relation.operands) o = fold(o, sub);
          expanded.push_back(std::move(inst));
          if ((long long)expanded.size() > limits.max_constraints)
            throw ground_error("ExpansionLimitExceeded",
                               "grounded constraint count exceeds limit", it.span);
        }
      }
      items = std::move(expanded);
    }

    for (const auto& it : items)
      if (!it.conditions.empty())
        throw ground_error("UnboundedQuantifier",
                           "quantifier scope references unknown quantities",
                           it.span);
  }
};

// ---- AST -> ground expression ----------------------------------------------

struct GroundBuilder {
  Grounder& g;
  std::vector<GroundConstraint> extra;  // aux constraints from division

  GExpr build(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Constant:
        return GExpr::constant(e.value);
      case ExprKind::VarRef: {
        auto key = Grounder::concrete_key(e);
        if (!key)
          throw ground_error("NonConstantSubscript",
                             "subscript of '" + e.name + "' does not resolve to an integer",
                             e.span);
        return GExpr::variable(*key);
      }
      case ExprKind::Negate: {
        GExpr k = build(e.args[0]);
        return scale(Rat(-1), std::move(k));
      }
      case ExprKind::Add: {
        GExpr out;
        out.kind = GKind::Sum;
        for (const auto& a : e.args) out.kids.push_back(build(a));
        return normalize_sum(std::move(out));
      }
      case ExprKind::Mul: {
        std::vector<GExpr> fs;
        for (const auto& a : e.args) fs.push_back(build(a));
        return make_product(std::move(fs));
      }
      case ExprKind::Div: {
        GExpr num = build(e.args[0]);
        GExpr den = build(e.args[1]);
        if (den.is_const()) {
          if (den.value == 0)
            throw ground_error("DivisionByZeroConstant", "division by zero", e.span);
          return scale(Rat(1) / den.value, std::move(num));
        }
        // non-constant divisor: fresh variable t with divisor * t = dividend
        VarKey t{"_quot", {++g.aux_counter}};
        GExpr prod;
        prod.kind = GKind::Product;
        prod.kids.push_back(den);
        prod.kids.push_back(GExpr::variable(t));
        extra.push_back(RelationC{GRel::Eq, std::move(prod), num});
        return GExpr::variable(t);
      }
      case ExprKind::Pow: {
        const Expr& ex = e.args[1];
        if (!is_const(ex) || !rat_is_int(ex.value))
          throw ground_error("ExponentNotConstant",
                             "power exponent must be an integer constant", e.span);
        long long k = rat_to_ll(ex.value);
        GExpr base = build(e.args[0]);
        if (k == 0) return GExpr::constant(Rat(1));
        if (k == 1) return base;
        GExpr out;
        out.kind = GKind::Power;
        out.ipow = k;
        out.kids.push_back(std::move(base));
        return out;
      }
      case ExprKind::AbsOrCard: {
        GExpr out;
        out.kind = GKind::Abs;
        out.kids.push_back(build(e.args[0]));
        return out;
      }
      case ExprKind::Indicator: {
        const RelExpr& r = *e.rel;
        if (r.ops.size() != 1)
          throw ground_error("UnsupportedNode",
                             "indicator over chained relations is not supported", e.span);
        GRel op;
        switch (r.ops[0]) {
          case RelOp::Eq: op = GRel::Eq; break;
          case RelOp::Ne: op = GRel::Ne; break;
          case RelOp::Le: op = GRel::Le; break;
          case RelOp::Lt: op = GRel::Lt; break;
          case RelOp::Ge: op = GRel::Ge; break;
          case RelOp::Gt: op = GRel::Gt; break;
          default:
            throw ground_error("UnsupportedNode",
                               "indicator argument must be a numeric relation", e.span);
        }
        GExpr out;
        out.kind = GKind::Indicator;
        out.rel = op;
        out.kids.push_back(build(r.operands[0]));
        out.kids.push_back(build(r.operands[1]));
        return out;
      }
      case ExprKind::Floor:
      case ExprKind::Ceil: {
        GExpr out;
        out.kind = e.kind == ExprKind::Floor ? GKind::Floor : GKind::Ceil;
        out.kids.push_back(build(e.args[0]));
        return out;
      }
      case ExprKind::MaxOf:
      case ExprKind::MinOf: {
        GExpr out;
        out.kind = e.kind == ExprKind::MaxOf ? GKind::Max : GKind::Min;
        if (e.has_binder)
          throw ground_error("UnboundedQuantifier",
                             "max/min binder did not resolve", e.span);
        if (e.args.size() == 1 && e.args[0].kind == ExprKind::SetLiteral) {
          for (const auto& a : e.args[0].args) out.kids.push_back(build(a));
        } else {
          for (const auto& a : e.args) out.kids.push_back(build(a));
        }
        if (out.kids.size() == 1) return std::move(out.kids[0]);
        return out;
      }
      default:
        throw ground_error("UnresolvedSet",
                           "set expression outside a domain constraint", e.span);
    }
  }

  static GExpr scale(Rat k, GExpr e) {
    if (k == 1) return e;
    if (e.is_const()) return GExpr::constant(k * e.value);
    if (e.kind == GKind::Scale) {
      e.value *= k;
      if (e.value == 1) return std::move(e.kids[0]);
      return e;
    }
    GExpr out;
    out.kind = GKind::Scale;
    out.value = std::move(k);
    out.kids.push_back(std::move(e));
    return out;
  }

  static GExpr normalize_sum(GExpr sum) {
    std::vector<GExpr> out;
    Rat c = 0;
    for (auto& k : sum.kids) {
      if (k.kind == GKind::Sum) {
        for (auto& kk : k.kids) {
          if (kk.is_const()) c += kk.value;
          else out.push_back(std::move(kk));
        }
      } else if (k.is_const()) {
        c += k.value;
      } else {
        out.push_back(std::move(k));
      }
    }
    if (out.empty()) return GExpr::constant(c);
    if (c != 0) out.push_back(GExpr::constant(c));
    if (out.size() == 1) return std::move(out[0]);
    GExpr e;
    e.kind = GKind::Sum;
    e.kids = std::move(out);
    return e;
  }

  static GExpr make_product(std::vector<GExpr> factors) {
    std::vector<GExpr> out;
    Rat c = 1;
    for (auto& f : factors) {
      if (f.is_const()) {
        c *= f.value;
      } else if (f.kind == GKind::Scale) {
        c *= f.value;
        out.push_back(std::move(f.kids[0]));
      } else if (f.kind == GKind::Product) {
        for (auto& k : f.kids) out.push_back(std::move(k));
      } else {
        out.push_back(std::move(f));
      }
    }
    if (c == 0) return GExpr::constant(Rat(0));
    if (out.empty()) return GExpr::constant(c);
    GExpr prod;
    if (out.size() == 1) {
      prod = std::move(out[0]);
    } else {
      prod.kind = GKind::Product;
      prod.kids = std::move(out);
    }
    return scale(std::move(c), std::move(prod));
  }
};

void collect_vars(const GExpr& e, std::set<VarKey>& out) {
  if (e.kind == GKind::Var) out.insert(e.var);
  for (const auto& k : e.kids) collect_vars(k, out);
}

// Merges per-variable domain information gathered during grounding.
struct DomainInfo {
  bool integral = false;
  bool has_enum = false;
  std::vector<Rat> enum_values;
  std::optional<Rat> lo, hi;
  bool lo_strict = false, hi_strict = false;
  Span span;

  void add_bound_lo(const Rat& v, bool strict) {
    if (!lo || v > *lo || (v == *lo && strict)) { lo = v; lo_strict = strict; }
  }
  void add_bound_hi(const Rat& v, bool strict) {
    if (!hi || v < *hi || (v == *hi && strict)) { hi = v; hi_strict = strict; }
  }
  void add_enum(const std::vector<Rat>& vals) {
    if (!has_enum) {
      has_enum = true;
      enum_values = vals;
      return;
    }
    std::vector<Rat> kept;
    for (const auto& v : enum_values)
      if (std::find(vals.begin(), vals.end(), v) != vals.end()) kept.push_back(v);
    enum_values = std::move(kept);
  }

  Domain finish(std::vector<std::string>& warnings, const VarKey& key) const {
    if (has_enum) {
      std::vector<Rat> vals;
      for (const auto& v : enum_values) {
        if (lo && (*lo > v || (v == *lo && lo_strict))) continue;
        if (hi && (*hi < v || (v == *hi && hi_strict))) continue;
        if (integral && !rat_is_int(v)) continue;
        vals.push_back(v);
      }
      return Enumeration{std::move(vals)};
    }
    if (integral) {
      IntegerRange r;
      if (lo) r.lo = lo_strict ? rat_floor(*lo) + 1 : rat_ceil(*lo);
      if (hi) r.hi = hi_strict ? rat_ceil(*hi) - 1 : rat_floor(*hi);
      return r;
    }
    if (!lo && !hi && (key.name.empty() || key.name[0] != '_'))
      warnings.push_back("decision variable '" + key.str() +
                         "' has no domain constraint; assuming full-width real range");
    return RealRange{lo, hi, lo_strict, hi_strict};
  }
};

}  // namespace

Domain classify_domain(const GroundConstraint& c) {
  if (std::holds_alternative<DomainC>(c)) return std::get<DomainC>(c).domain;
  throw ground_error("UnsupportedDomainShape",
                     "constraint is not a domain constraint");
}

GroundResult ground_model(const ast::Model& model,
                          const std::vector<ast::Assignment>& data,
                          const ExpansionLimits& limits) {
  Grounder g(limits);
  g.run(model, data);

  GroundBuilder builder{g};
  GroundModel gm;
  gm.direction = g.direction;

  // Separate domain-shaped constraints from plain relations.
  std::map<VarKey, DomainInfo> domains;
  std::vector<RelationC> relations;

  auto note_membership = [&](const Expr& lhs, const Expr& rhs, Span span, bool negated) {
    auto key = Grounder::concrete_key(lhs);
    if (!key)
      throw ground_error("UnsupportedDomainShape",
                         "membership constraint needs a plain variable on the left",
                         span);
    if (negated)
      throw ground_error("UnsupportedDomainShape",
                         "negated memberships are not supported as domains", span);
    DomainInfo& info = domains[*key];
    info.span = span;
    if (rhs.kind == ExprKind::SetPredef) {
      switch (rhs.predef) {
        case PredefSet::Real: break;
        case PredefSet::RealPos: info.add_bound_lo(Rat(0), true); break;
        case PredefSet::RealNeg: info.add_bound_hi(Rat(0), true); break;
        case PredefSet::Int: info.integral = true; break;
        case PredefSet::IntPos: info.integral = true; info.add_bound_lo(Rat(1), false); break;
        case PredefSet::IntNeg: info.integral = true; info.add_bound_hi(Rat(-1), false); break;
        case PredefSet::Nat: info.integral = true; info.add_bound_lo(Rat(0), false); break;
      }
      return;
    }
    if (rhs.kind == ExprKind::SetRange) {
      if (!is_const(rhs.args[0]) || !is_const(rhs.args[1]))
        throw ground_error("UnsupportedDomainShape",
                           "range domain endpoints did not resolve", span);
      if (!rat_is_int(rhs.args[0].value) || !rat_is_int(rhs.args[1].value))
        throw ground_error("NonIntegerRangeEndpoint",
                           "range domain endpoints must be integers", span);
      info.integral = true;
      info.add_bound_lo(rhs.args[0].value, false);
      info.add_bound_hi(rhs.args[1].value, false);
      return;
    }
    auto s = concrete_set(rhs);
    if (!s)
      throw ground_error("UnsupportedDomainShape",
                         "membership set did not resolve to a concrete set", span);
    if (s->size() == 0)
      throw ground_error("EmptyDomain", "variable domain is empty", span);
    info.add_enum(s->members());
  };

  for (const auto& it : g.items) {
    const RelExpr& r = it.relation;
    // membership → domain
    if (r.ops.size() == 1 && (r.ops[0] == RelOp::In || r.ops[0] == RelOp::NotIn)) {
      note_membership(r.operands[0], r.operands[1], it.span, r.ops[0] == RelOp::NotIn);
      continue;
    }
    if (r.ops.size() == 1 &&
        (r.ops[0] == RelOp::Subset || r.ops[0] == RelOp::SubsetEq ||
         r.ops[0] == RelOp::SubsetNeq))
      throw ground_error("UnsupportedDomainShape",
                         "set-valued decision variables are not supported", it.span);

    // chained const ≤ var ≤ const → bounds
    bool all_le = !r.ops.empty(), all_ge = !r.ops.empty();
    for (RelOp op : r.ops) {
      all_le &= op == RelOp::Le || op == RelOp::Lt;
      all_ge &= op == RelOp::Ge || op == RelOp::Gt;
    }
    if (r.ops.size() == 2 && (all_le || all_ge) && is_const(r.operands[0]) &&
        is_const(r.operands[2]) && bool(Grounder::concrete_key(r.operands[1]))) {
      VarKey key = *Grounder::concrete_key(r.operands[1]);
      DomainInfo& info = domains[key];
      info.span = it.span;
      const Rat& a = r.operands[0].value;
      const Rat& b = r.operands[2].value;
      bool s0 = r.ops[0] == RelOp::Lt || r.ops[0] == RelOp::Gt;
      bool s1 = r.ops[1] == RelOp::Lt || r.ops[1] == RelOp::Gt;
      if (all_le) {
        info.add_bound_lo(a, s0);
        info.add_bound_hi(b, s1);
      } else {
        info.add_bound_hi(a, s0);
        info.add_bound_lo(b, s1);
      }
      continue;
    }

    // plain relation; split chains into binary relations
    for (size_t i = 0; i + 1 < r.operands.size(); ++i) {
      GRel op;
      switch (r.ops[i]) {
        case RelOp::Eq: op = GRel::Eq; break;
        case RelOp::Ne: op = GRel::Ne; break;
        case RelOp::Le: op = GRel::Le; break;
        case RelOp::Lt: op = GRel::Lt; break;
        case RelOp::Ge: op = GRel::Ge; break;
        case RelOp::Gt: op = GRel::Gt; break;
        default:
          throw ground_error("UnsupportedDomainShape",
                             "set relation between non-variables", it.span);
      }
      relations.push_back(
          RelationC{op, builder.build(r.operands[i]), builder.build(r.operands[i + 1])});
    }
  }

  gm.objective = builder.build(g.objective);

  for (auto& rc : relations) gm.constraints.push_back(std::move(rc));
  for (auto& ec : builder.extra) gm.constraints.push_back(std::move(ec));

  // decision variables = every var mentioned anywhere
  std::set<VarKey> vars;
  collect_vars(gm.objective, vars);
  for (const auto& c : gm.constraints) {
    if (std::holds_alternative<RelationC>(c)) {
      collect_vars(std::get<RelationC>(c).lhs, vars);
      collect_vars(std::get<RelationC>(c).rhs, vars);
    } else {
      vars.insert(std::get<DomainC>(c).var);
    }
  }
  for (const auto& [key, info] : domains) vars.insert(key);

  for (const auto& key : vars) {
    DecisionVar dv;
    dv.key = key;
    auto it = domains.find(key);
    if (it != domains.end()) {
      dv.domain = it->second.finish(gm.warnings, key);
      if (std::holds_alternative<Enumeration>(dv.domain) &&
          std::get<Enumeration>(dv.domain).values.empty())
        throw ground_error("EmptyDomain",
                           "domain of '" + key.str() + "' is empty", it->second.span);
      if (std::holds_alternative<IntegerRange>(dv.domain)) {
        const auto& r = std::get<IntegerRange>(dv.domain);
        if (r.lo && r.hi && *r.lo > *r.hi)
          throw ground_error("EmptyDomain",
                             "domain of '" + key.str() + "' is empty", it->second.span);
      }
    } else {
      size_t before = gm.warnings.size();
      dv.domain = DomainInfo{}.finish(gm.warnings, key);
      dv.defaulted = gm.warnings.size() > before;
    }
    gm.constraints.push_back(DomainC{key, dv.domain});
    gm.decision_vars.push_back(std::move(dv));
  }

  return GroundResult{std::move(gm), std::move(g.bindings)};
}

// ---- printing ---------------------------------------------------------------

std::string print_gexpr(const GExpr& e) {
  std::ostringstream os;
  switch (e.kind) {
    case GKind::Const: os << rat_to_string(e.value); break;
    case GKind::Var: os << e.var.str(); break;
    case GKind::Sum: {
      os << "(+";
      for (const auto& k : e.kids) os << ' ' << print_gexpr(k);
      os << ')';
      break;
    }
    case GKind::Product: {
      os << "(*";
      for (const auto& k : e.kids) os << ' ' << print_gexpr(k);
      os << ')';
      break;
    }
    case GKind::Scale:
      os << "(scale " << rat_to_string(e.value) << ' ' << print_gexpr(e.kids[0]) << ')';
      break;
    case GKind::Power:
      os << "(pow " << print_gexpr(e.kids[0]) << ' ' << e.ipow << ')';
      break;
    case GKind::Abs: os << "(abs " << print_gexpr(e.kids[0]) << ')'; break;
    case GKind::Floor: os << "(floor " << print_gexpr(e.kids[0]) << ')'; break;
    case GKind::Ceil: os << "(ceil " << print_gexpr(e.kids[0]) << ')'; break;
    case GKind::Max: {
      os << "(max";
      for (const auto& k : e.kids) os << ' ' << print_gexpr(k);
      os << ')';
      break;
    }
    case GKind::Min: {
      os << "(min";
      for (const auto& k : e.kids) os << ' ' << print_gexpr(k);
      os << ')';
      break;
    }
    case GKind::Indicator: {
      const char* op = e.rel == GRel::Eq ? "=" : e.rel == GRel::Ne ? "!=" :
                       e.rel == GRel::Le ? "<=" : e.rel == GRel::Lt ? "<" :
                       e.rel == GRel::Ge ? ">=" : ">";
      os << "(ind " << op << ' ' << print_gexpr(e.kids[0]) << ' '
         << print_gexpr(e.kids[1]) << ')';
      break;
    }
  }
  return os.str();
}

std::string print_ground_constraint(const GroundConstraint& c) {
  std::ostringstream os;
  if (std::holds_alternative<RelationC>(c)) {
    const auto& r = std::get<RelationC>(c);
    const char* op = r.op == GRel::Eq ? "=" : r.op == GRel::Ne ? "!=" :
                     r.op == GRel::Le ? "<=" : r.op == GRel::Lt ? "<" :
                     r.op == GRel::Ge ? ">=" : ">";
    os << print_gexpr(r.lhs) << ' ' << op << ' ' << print_gexpr(r.rhs);
  } else {
    const auto& d = std::get<DomainC>(c);
    os << d.var.str() << " in ";
    if (std::holds_alternative<IntegerRange>(d.domain)) {
      const auto& r = std::get<IntegerRange>(d.domain);
      os << "int[" << (r.lo ? rat_to_string(*r.lo) : "-inf") << ", "
         << (r.hi ? rat_to_string(*r.hi) : "+inf") << ']';
    } else if (std::holds_alternative<RealRange>(d.domain)) {
      const auto& r = std::get<RealRange>(d.domain);
      os << (r.lo_strict ? '(' : '[') << (r.lo ? rat_to_string(*r.lo) : "-inf") << ", "
         << (r.hi ? rat_to_string(*r.hi) : "+inf") << (r.hi_strict ? ')' : ']');
    } else {
      const auto& en = std::get<Enumeration>(d.domain);
      os << '{';
      for (size_t i = 0; i < en.values.size(); ++i)
        os << (i ? "," : "") << rat_to_string(en.values[i]);
      os << '}';
    }
  }
  return os.str();
}

}  // namespace opmax
