#pragma once

#include <memory>
#include <string>
#include <vector>

#include "opmax/diagnostics.hpp"
#include "opmax/rational.hpp"

namespace opmax::ast {

// One expression tree covers both numeric and set expressions; the grammar
// cannot always distinguish them at parse time (a bare variable may name a
// set), so typing is resolved during grounding.
enum class ExprKind {
  Constant,     // exact rational literal
  VarRef,       // base name + subscript expressions
  Negate,       // -e
  Add,          // sum of terms (signs folded into Negate children)
  Mul,          // product of factors
  Div,          // fraction or '/'
  Pow,          // base ^ exponent
  BigSum,       // \sum with binder
  BigProd,      // \prod with binder
  AbsOrCard,    // |e| : absolute value or set cardinality, typed later
  Indicator,    // \mathbb{I}(relation)
  Floor,
  Ceil,
  MaxOf,        // \max over explicit args, a set, or binder+body
  MinOf,
  // set expressions
  SetLiteral,   // {a, b, c}
  SetRange,     // {a, ..., b}
  SetPredef,    // \mathbb{R} etc.
  SetBinary,    // union / intersection / difference
  SetBig,       // \bigcup / \bigcap with binder
  EmptySet,
};

enum class PredefSet { Real, RealPos, RealNeg, Int, IntPos, IntNeg, Nat };

enum class RelOp { Eq, Ne, Le, Lt, Ge, Gt, In, NotIn, Subset, SubsetEq, SubsetNeq };

enum class SetOp { Union, Intersect, Difference };

struct Expr;
struct RelExpr;
struct Condition;

struct Expr {
  ExprKind kind;
  Span span;

  Rat value;                      // Constant
  std::string name;               // VarRef base name
  std::vector<Expr> args;         // children (subscripts for VarRef)
  PredefSet predef{};             // SetPredef
  SetOp set_op{};                 // SetBinary
  std::unique_ptr<RelExpr> rel;   // Indicator
  // binder for BigSum/BigProd/SetBig/MaxOf/MinOf binder forms
  std::vector<Condition> binder;
  bool has_binder = false;

  Expr() : kind(ExprKind::Constant) {}
  explicit Expr(ExprKind k) : kind(k) {}
  Expr(const Expr& o);
  Expr& operator=(const Expr& o);
  Expr(Expr&&) = default;
  Expr& operator=(Expr&&) = default;
};

// Relations are stored as chains (a <= b <= c), not desugared.
struct RelExpr {
  std::vector<Expr> operands;
  std::vector<RelOp> ops;  // ops.size() == operands.size() - 1
  Span span;

  RelExpr() = default;
  RelExpr(const RelExpr&) = default;
  RelExpr& operator=(const RelExpr&) = default;
  RelExpr(RelExpr&&) = default;
  RelExpr& operator=(RelExpr&&) = default;
};

enum class ConditionKind {
  RangeBinder,    // i, j = a, ..., b
  Membership,     // [forall] v1, v2 \in S
  SubsetCond,     // [forall] v1 \subset S
  ChainedBounds,  // lo (<|<=) v1 (<|<=) ... (<|<=) hi
  Relation,       // arbitrary relational filter (i != j, c_{i,j} = 1)
};

struct Condition {
  ConditionKind kind;
  Span span;
  std::vector<Expr> vars;      // bound variables (VarRef shapes)
  Expr lo, hi;                 // RangeBinder / ChainedBounds endpoints
  Expr set;                    // Membership / SubsetCond
  std::vector<bool> strict;    // ChainedBounds: strictness per link
  RelExpr relation;            // Relation
};

enum class Direction { Minimize, Maximize };

struct ObjectiveSpec {
  Direction direction;
  Expr expr;
  std::vector<Condition> conditions;
  Span span;
};

struct ConstraintSpec {
  RelExpr relation;
  std::vector<Condition> conditions;
  Span span;
};

struct Model {
  ObjectiveSpec objective;
  std::vector<ConstraintSpec> constraints;
};

// Instance-data assignment: lhs is a varref, rhs numeric or set expression.
struct Assignment {
  Expr lhs;
  Expr rhs;
  Span span;
};

inline Expr::Expr(const Expr& o)
    : kind(o.kind), span(o.span), value(o.value), name(o.name), args(o.args),
      predef(o.predef), set_op(o.set_op),
      rel(o.rel ? std::make_unique<RelExpr>(*o.rel) : nullptr),
      binder(o.binder), has_binder(o.has_binder) {}

inline Expr& Expr::operator=(const Expr& o) {
  if (this == &o) return *this;
  kind = o.kind; span = o.span; value = o.value; name = o.name; args = o.args;
  predef = o.predef; set_op = o.set_op;
  rel = o.rel ? std::make_unique<RelExpr>(*o.rel) : nullptr;
  binder = o.binder; has_binder = o.has_binder;
  return *this;
}

// Canonical text form; parse(print(m)) is structurally identical to m.
std::string print_expr(const Expr& e);
std::string print_relation(const RelExpr& r);
std::string print_condition(const Condition& c);
std::string print_model(const Model& m);

bool expr_equal(const Expr& a, const Expr& b);
bool relation_equal(const RelExpr& a, const RelExpr& b);
bool model_equal(const Model& a, const Model& b);

const char* rel_op_text(RelOp op);

}  // namespace opmax::ast
