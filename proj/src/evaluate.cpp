#include "opmax/evaluate.hpp"

#include <algorithm>
#include <functional>

namespace opmax {

Rat evaluate_numeric(const GExpr& e, const ValueMap& values) {
  switch (e.kind) {
    case GKind::Const:
      return e.value;
    case GKind::Var: {
      auto it = values.find(e.var);
      if (it == values.end())
        throw Error(ErrorClass::Decode, "MissingValue",
                    "no value for variable '" + e.var.str() + "'");
      return it->second;
    }
    case GKind::Sum: {
      Rat s = 0;
      for (const auto& k : e.kids) s += evaluate_numeric(k, values);
      return s;
    }
    case GKind::Product: {
      Rat p = 1;
      for (const auto& k : e.kids) p *= evaluate_numeric(k, values);
      return p;
    }
    case GKind::Scale:
      return e.value * evaluate_numeric(e.kids[0], values);
    case GKind::Power: {
      Rat b = evaluate_numeric(e.kids[0], values);
      long long k = e.ipow;
      if (k < 0) {
        if (b == 0)
          throw Error(ErrorClass::Decode, "DivisionByZero", "zero to a negative power");
        b = Rat(1) / b;
        k = -k;
      }
      Rat r = 1;
      for (long long i = 0; i < k; ++i) r *= b;
      return r;
    }
    case GKind::Abs:
      return rat_abs(evaluate_numeric(e.kids[0], values));
    case GKind::Floor:
      return rat_floor(evaluate_numeric(e.kids[0], values));
    case GKind::Ceil:
      return rat_ceil(evaluate_numeric(e.kids[0], values));
    case GKind::Max: {
      Rat best = evaluate_numeric(e.kids[0], values);
      for (size_t i = 1; i < e.kids.size(); ++i)
        best = std::max(best, evaluate_numeric(e.kids[i], values));
      return best;
    }
    case GKind::Min: {
      Rat best = evaluate_numeric(e.kids[0], values);
      for (size_t i = 1; i < e.kids.size(); ++i)
        best = std::min(best, evaluate_numeric(e.kids[i], values));
      return best;
    }
    case GKind::Indicator: {
      Rat l = evaluate_numeric(e.kids[0], values);
      Rat r = evaluate_numeric(e.kids[1], values);
      bool holds = false;
      switch (e.rel) {
        case GRel::Eq: holds = l == r; break;
        case GRel::Ne: holds = l != r; break;
        case GRel::Le: holds = l <= r; break;
        case GRel::Lt: holds = l < r; break;
        case GRel::Ge: holds = l >= r; break;
        case GRel::Gt: holds = l > r; break;
      }
      return Rat(holds ? 1 : 0);
    }
  }
  return Rat(0);
}

namespace {

bool relation_holds(GRel op, const Rat& l, const Rat& r) {
  switch (op) {
    case GRel::Eq: return l == r;
    case GRel::Ne: return l != r;
    case GRel::Le: return l <= r;
    case GRel::Lt: return l < r;
    case GRel::Ge: return l >= r;
    case GRel::Gt: return l > r;
  }
  return false;
}

bool domain_admits(const Domain& d, const Rat& v) {
  if (std::holds_alternative<IntegerRange>(d)) {
    const auto& r = std::get<IntegerRange>(d);
    if (!rat_is_int(v)) return false;
    if (r.lo && v < *r.lo) return false;
    if (r.hi && v > *r.hi) return false;
    return true;
  }
  if (std::holds_alternative<RealRange>(d)) {
    const auto& r = std::get<RealRange>(d);
    if (r.lo && (v < *r.lo || (v == *r.lo && r.lo_strict))) return false;
    if (r.hi && (v > *r.hi || (v == *r.hi && r.hi_strict))) return false;
    return true;
  }
  const auto& en = std::get<Enumeration>(d);
  return std::find(en.values.begin(), en.values.end(), v) != en.values.end();
}

}  // namespace

FeasibilityReport check_feasibility(const GroundModel& model, const ValueMap& values) {
  FeasibilityReport rep;
  rep.feasible = true;
  for (const auto& c : model.constraints) {
    ConstraintVerdict v;
    if (std::holds_alternative<RelationC>(c)) {
      const auto& r = std::get<RelationC>(c);
      Rat l = evaluate_numeric(r.lhs, values);
      Rat rv = evaluate_numeric(r.rhs, values);
      v.satisfied = relation_holds(r.op, l, rv);
      if (!v.satisfied)
        v.text = print_ground_constraint(c) + "  [lhs=" + rat_to_string(l) +
                 ", rhs=" + rat_to_string(rv) + "]";
    } else {
      const auto& d = std::get<DomainC>(c);
      auto it = values.find(d.var);
      if (it == values.end())
        throw Error(ErrorClass::Decode, "MissingValue",
                    "no value for variable '" + d.var.str() + "'");
      v.satisfied = domain_admits(d.domain, it->second);
      if (!v.satisfied)
        v.text = print_ground_constraint(c) + "  [value=" + rat_to_string(it->second) + "]";
    }
    rep.feasible &= v.satisfied;
    rep.verdicts.push_back(std::move(v));
  }
  rep.objective = evaluate_numeric(model.objective, values);
  return rep;
}

OptimizationResult brute_force_optimum(const GroundModel& model, BitWidth grid,
                                       long long cap) {
  // enumerate each variable's domain
  std::vector<std::vector<Rat>> domains;
  std::vector<VarKey> keys;
  long long space = 1;
  for (const auto& dv : model.decision_vars) {
    std::vector<Rat> vals;
    if (std::holds_alternative<Enumeration>(dv.domain)) {
      vals = std::get<Enumeration>(dv.domain).values;
    } else if (std::holds_alternative<IntegerRange>(dv.domain)) {
      const auto& r = std::get<IntegerRange>(dv.domain);
      Rat lo = r.lo ? *r.lo : -grid.max_magnitude();
      Rat hi = r.hi ? *r.hi : grid.max_magnitude();
      for (Rat v = rat_ceil(lo); v <= hi; v += 1) {
        vals.push_back(v);
        if ((long long)vals.size() > cap)
          throw Error(ErrorClass::Solve, "SearchSpaceTooLarge",
                      "brute-force domain too large");
      }
    } else {
      const auto& r = std::get<RealRange>(dv.domain);
      // the representable grid at the given width
      Rat step = grid.step();
      Rat lo = r.lo ? std::max(*r.lo, -grid.max_magnitude()) : -grid.max_magnitude();
      Rat hi = r.hi ? std::min(*r.hi, grid.max_magnitude()) : grid.max_magnitude();
      Rat start = rat_ceil(lo / step) * step;
      for (Rat v = start; v <= hi; v += step) {
        if (r.lo && v == *r.lo && r.lo_strict) continue;
        if (r.hi && v == *r.hi && r.hi_strict) continue;
        vals.push_back(v);
        if ((long long)vals.size() > cap)
          throw Error(ErrorClass::Solve, "SearchSpaceTooLarge",
                      "brute-force domain too large");
      }
    }
    if (vals.empty()) return OptimizationResult{};
    space *= (long long)vals.size();
    if (space > cap)
      throw Error(ErrorClass::Solve, "SearchSpaceTooLarge",
                  "brute-force search space exceeds cap");
    domains.push_back(std::move(vals));
    keys.push_back(dv.key);
  }

  OptimizationResult best;
  ValueMap values;
  bool minimize = model.direction == ast::Direction::Minimize;

  std::function<void(size_t)> walk = [&](size_t i) {
    if (i == keys.size()) {
      for (const auto& c : model.constraints) {
        if (std::holds_alternative<RelationC>(c)) {
          const auto& r = std::get<RelationC>(c);
          if (!relation_holds(r.op, evaluate_numeric(r.lhs, values),
                              evaluate_numeric(r.rhs, values)))
            return;
        }
        // domain constraints hold by construction of the enumeration
      }
      Rat obj = evaluate_numeric(model.objective, values);
      if (!best.feasible || (minimize ? obj < best.objective : obj > best.objective)) {
        best.feasible = true;
        best.objective = obj;
        best.optimizer = values;
      }
      return;
    }
    for (const Rat& v : domains[i]) {
      values[keys[i]] = v;
      walk(i + 1);
    }
  };
  walk(0);
  return best;
}

std::pair<ValueMap, FeasibilityReport> decode_solution(
    const std::map<VarKey, FixedPointWord>& varmap,
    const std::vector<signed char>& assignment, const GroundModel& model) {
  ValueMap values;
  for (const auto& [key, word] : varmap) values[key] = decode_word(word, assignment);
  FeasibilityReport rep = check_feasibility(model, values);
  return {std::move(values), std::move(rep)};
}

}  // namespace opmax
