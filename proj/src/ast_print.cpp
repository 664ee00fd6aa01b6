#include <sstream>

#include "opmax/ast.hpp"

namespace opmax::ast {

namespace {

// Precedence levels for parenthesization: Add < Mul < unary/postfix.
int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add: return 1;
    case ExprKind::Negate: return 1;
    case ExprKind::Mul: case ExprKind::Div: return 2;
    case ExprKind::BigSum: case ExprKind::BigProd: return 2;
    case ExprKind::MaxOf: case ExprKind::MinOf: return e.has_binder ? 2 : 3;
    case ExprKind::Pow: return 3;
    default: return 4;
  }
}

void print(std::ostream& os, const Expr& e, int parent_prec);

void print_braced(std::ostream& os, const Expr& e) {
  os << '{';
  print(os, e, 0);
  os << '}';
}

void print_binder(std::ostream& os, const std::vector<Condition>& binder) {
  // range binder with constant-free extras prints as _{v=lo,...}^{hi}
  if (!binder.empty() && binder[0].kind == ConditionKind::RangeBinder &&
      binder[0].vars.size() == 1) {
    os << "_{";
    print(os, binder[0].vars[0], 0);
    os << " = ";
    print(os, binder[0].lo, 0);
    for (size_t i = 1; i < binder.size(); ++i) os << ", " << print_condition(binder[i]);
    os << "}^";
    print_braced(os, binder[0].hi);
    return;
  }
  os << "_{";
  for (size_t i = 0; i < binder.size(); ++i) {
    if (i) os << ", ";
    os << print_condition(binder[i]);
  }
  os << "}";
}

void print(std::ostream& os, const Expr& e, int parent_prec) {
  bool paren = precedence(e) < parent_prec;
  if (paren) os << '(';
  switch (e.kind) {
    case ExprKind::Constant:
      if (rat_is_int(e.value)) {
        os << rat_num(e.value).str();
      } else {
        os << rat_to_decimal(e.value);
      }
      break;
    case ExprKind::VarRef:
      os << e.name;
      if (!e.args.empty()) {
        os << "_{";
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i) os << ',';
          print(os, e.args[i], 0);
        }
        os << '}';
      }
      break;
    case ExprKind::Negate:
      os << '-';
      print(os, e.args[0], 2);
      break;
    case ExprKind::Add:
      for (size_t i = 0; i < e.args.size(); ++i) {
        const Expr* t = &e.args[i];
        if (i) {
          if (t->kind == ExprKind::Negate) {
            os << " - ";
            print(os, t->args[0], 2);
            continue;
          }
          os << " + ";
        }
        print(os, *t, 2);
      }
      break;
    case ExprKind::Mul:
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << " \\cdot ";
        print(os, e.args[i], 3);
      }
      break;
    case ExprKind::Div:
      os << "\\frac";
      print_braced(os, e.args[0]);
      print_braced(os, e.args[1]);
      break;
    case ExprKind::Pow:
      print(os, e.args[0], 4);
      os << '^';
      print_braced(os, e.args[1]);
      break;
    case ExprKind::BigSum:
    case ExprKind::BigProd:
      os << (e.kind == ExprKind::BigSum ? "\\sum" : "\\prod");
      print_binder(os, e.binder);
      os << ' ';
      print(os, e.args[0], 2);
      break;
    case ExprKind::AbsOrCard:
      os << '|';
      print(os, e.args[0], 0);
      os << '|';
      break;
    case ExprKind::Indicator:
      os << "\\mathbb{I}(" << print_relation(*e.rel) << ')';
      break;
    case ExprKind::Floor:
      os << "\\lfloor ";
      print(os, e.args[0], 0);
      os << " \\rfloor";
      break;
    case ExprKind::Ceil:
      os << "\\lceil ";
      print(os, e.args[0], 0);
      os << " \\rceil";
      break;
    case ExprKind::MaxOf:
    case ExprKind::MinOf:
      os << (e.kind == ExprKind::MaxOf ? "\\max" : "\\min");
      if (e.has_binder) {
        print_binder(os, e.binder);
        os << " \\{";
        print(os, e.args[0], 0);
        os << "\\}";
      } else if (e.args.size() > 1) {
        os << " \\{";
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i) os << ", ";
          print(os, e.args[i], 0);
        }
        os << "\\}";
      } else {
        os << ' ';
        print(os, e.args[0], 4);
      }
      break;
    case ExprKind::SetLiteral:
      os << "\\{";
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print(os, e.args[i], 0);
      }
      os << "\\}";
      break;
    case ExprKind::SetRange:
      os << "\\{";
      print(os, e.args[0], 0);
      os << ", \\dots, ";
      print(os, e.args[1], 0);
      os << "\\}";
      break;
    case ExprKind::SetPredef:
      switch (e.predef) {
        case PredefSet::Real: os << "\\mathbb{R}"; break;
        case PredefSet::RealPos: os << "\\mathbb{R}^+"; break;
        case PredefSet::RealNeg: os << "\\mathbb{R}^-"; break;
        case PredefSet::Int: os << "\\mathbb{Z}"; break;
        case PredefSet::IntPos: os << "\\mathbb{Z}^+"; break;
        case PredefSet::IntNeg: os << "\\mathbb{Z}^-"; break;
        case PredefSet::Nat: os << "\\mathbb{N}"; break;
      }
      break;
    case ExprKind::SetBinary:
      print(os, e.args[0], 0);
      os << (e.set_op == SetOp::Union ? " \\cup "
             : e.set_op == SetOp::Intersect ? " \\cap " : " \\setminus ");
      print(os, e.args[1], 4);
      break;
    case ExprKind::SetBig:
      os << (e.set_op == SetOp::Union ? "\\bigcup" : "\\bigcap");
      print_binder(os, e.binder);
      os << ' ';
      print(os, e.args[0], 4);
      break;
    case ExprKind::EmptySet:
      os << "\\emptyset";
      break;
  }
  if (paren) os << ')';
}

}  // namespace

const char* rel_op_text(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "\\neq";
    case RelOp::Le: return "\\le";
    case RelOp::Lt: return "<";
    case RelOp::Ge: return "\\ge";
    case RelOp::Gt: return ">";
    case RelOp::In: return "\\in";
    case RelOp::NotIn: return "\\notin";
    case RelOp::Subset: return "\\subset";
    case RelOp::SubsetEq: return "\\subseteq";
    case RelOp::SubsetNeq: return "\\subsetneq";
  }
  return "?";
}

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

std::string print_relation(const RelExpr& r) {
  std::ostringstream os;
  for (size_t i = 0; i < r.operands.size(); ++i) {
    if (i) os << ' ' << rel_op_text(r.ops[i - 1]) << ' ';
    print(os, r.operands[i], 1);
  }
  return os.str();
}

std::string print_condition(const Condition& c) {
  std::ostringstream os;
  switch (c.kind) {
    case ConditionKind::RangeBinder:
      for (size_t i = 0; i < c.vars.size(); ++i) {
        if (i) os << ',';
        print(os, c.vars[i], 0);
      }
      os << " = ";
      print(os, c.lo, 0);
      os << ", \\dots, ";
      print(os, c.hi, 0);
      break;
    case ConditionKind::Membership:
      for (size_t i = 0; i < c.vars.size(); ++i) {
        if (i) os << ',';
        print(os, c.vars[i], 0);
      }
      os << " \\in ";
      print(os, c.set, 0);
      break;
    case ConditionKind::SubsetCond:
      for (size_t i = 0; i < c.vars.size(); ++i) {
        if (i) os << ',';
        print(os, c.vars[i], 0);
      }
      os << " \\subseteq ";
      print(os, c.set, 0);
      break;
    case ConditionKind::ChainedBounds:
      print(os, c.lo, 2);
      for (size_t i = 0; i < c.vars.size(); ++i) {
        os << (c.strict[i] ? " < " : " \\le ");
        print(os, c.vars[i], 2);
      }
      os << (c.strict.back() ? " < " : " \\le ");
      print(os, c.hi, 2);
      break;
    case ConditionKind::Relation:
      os << print_relation(c.relation);
      break;
  }
  return os.str();
}

std::string print_model(const Model& m) {
  std::ostringstream os;
  os << "\\begin{align}\n";
  os << (m.objective.direction == Direction::Minimize ? "\\min" : "\\max") << " && ";
  os << print_expr(m.objective.expr);
  if (!m.objective.conditions.empty()) {
    os << " && ";
    for (size_t i = 0; i < m.objective.conditions.size(); ++i) {
      if (i) os << ", ";
      os << print_condition(m.objective.conditions[i]);
    }
  }
  for (const auto& c : m.constraints) {
    os << " \\\\\n&& " << print_relation(c.relation);
    if (!c.conditions.empty()) {
      os << " && ";
      for (size_t i = 0; i < c.conditions.size(); ++i) {
        if (i) os << ", ";
        os << print_condition(c.conditions[i]);
      }
    }
  }
  os << "\n\\end{align}\n";
  return os.str();
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size())
    return false;
  if (a.kind == ExprKind::Constant && a.value != b.value) return false;
  if (a.kind == ExprKind::SetPredef && a.predef != b.predef) return false;
  if ((a.kind == ExprKind::SetBinary || a.kind == ExprKind::SetBig) &&
      a.set_op != b.set_op)
    return false;
  if (a.has_binder != b.has_binder || a.binder.size() != b.binder.size()) return false;
  if (a.kind == ExprKind::Indicator) {
    if (!a.rel || !b.rel || !relation_equal(*a.rel, *b.rel)) return false;
  }
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!expr_equal(a.args[i], b.args[i])) return false;
  for (size_t i = 0; i < a.binder.size(); ++i) {
    const Condition &ca = a.binder[i], &cb = b.binder[i];
    if (print_condition(ca) != print_condition(cb)) return false;
  }
  return true;
}

bool relation_equal(const RelExpr& a, const RelExpr& b) {
  if (a.ops != b.ops || a.operands.size() != b.operands.size()) return false;
  for (size_t i = 0; i < a.operands.size(); ++i)
    if (!expr_equal(a.operands[i], b.operands[i])) return false;
  return true;
}

bool model_equal(const Model& a, const Model& b) {
  if (a.objective.direction != b.objective.direction) return false;
  if (!expr_equal(a.objective.expr, b.objective.expr)) return false;
  if (a.constraints.size() != b.constraints.size()) return false;
  for (size_t i = 0; i < a.constraints.size(); ++i) {
    if (!relation_equal(a.constraints[i].relation, b.constraints[i].relation))
      return false;
    if (a.constraints[i].conditions.size() != b.constraints[i].conditions.size())
      return false;
    for (size_t j = 0; j < a.constraints[i].conditions.size(); ++j)
      if (print_condition(a.constraints[i].conditions[j]) !=
          print_condition(b.constraints[i].conditions[j]))
        return false;
  }
  return true;
}

}  // namespace opmax::ast
