#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "opmax/ast.hpp"
#include "opmax/diagnostics.hpp"
#include "opmax/rational.hpp"

namespace opmax {

// Concrete scalar identity: base name plus fully evaluated integer subscripts.
struct VarKey {
  std::string name;
  std::vector<long long> subs;

  bool operator<(const VarKey& o) const {
    if (name != o.name) return name < o.name;
    return subs < o.subs;
  }
  bool operator==(const VarKey& o) const { return name == o.name && subs == o.subs; }
  std::string str() const {
    std::string s = name;
    for (size_t i = 0; i < subs.size(); ++i)
      s += (i ? "," : "_") + std::to_string(subs[i]);
    return s;
  }
};

// A known quantity: an exact rational or a concrete finite set.
struct SetVal {
  bool is_range = false;       // integer range lo..hi
  Rat lo, hi;
  std::vector<Rat> elems;      // explicit members (insertion order)

  std::vector<Rat> members() const;
  size_t size() const;
  bool contains(const Rat& v) const;
};

struct Binding {
  bool is_set = false;
  Rat num;
  SetVal set;
};

using KnownBindings = std::map<VarKey, Binding>;

// ---- ground expressions ---------------------------------------------------

enum class GKind {
  Const, Var, Sum, Product, Scale, Power, Abs, Floor, Ceil, Max, Min, Indicator,
};

enum class GRel { Eq, Ne, Le, Lt, Ge, Gt };

struct GExpr {
  GKind kind = GKind::Const;
  Rat value;                 // Const payload, Scale factor
  long long ipow = 0;        // Power exponent
  GRel rel{};                // Indicator relation (kids = lhs, rhs)
  VarKey var;                // Var payload
  std::vector<GExpr> kids;

  static GExpr constant(Rat v) {
    GExpr e; e.kind = GKind::Const; e.value = std::move(v); return e;
  }
  static GExpr variable(VarKey k) {
    GExpr e; e.kind = GKind::Var; e.var = std::move(k); return e;
  }
  bool is_const() const { return kind == GKind::Const; }
};

struct IntegerRange {
  std::optional<Rat> lo, hi;  // integral when present
};
struct RealRange {
  std::optional<Rat> lo, hi;
  bool lo_strict = false, hi_strict = false;
};
struct Enumeration {
  std::vector<Rat> values;
};
using Domain = std::variant<IntegerRange, RealRange, Enumeration>;

struct RelationC {
  GRel op;
  GExpr lhs, rhs;
};
struct DomainC {
  VarKey var;
  Domain domain;
};
using GroundConstraint = std::variant<RelationC, DomainC>;

struct DecisionVar {
  VarKey key;
  Domain domain;
  bool defaulted = false;  // no domain constraint in the model
};

struct GroundModel {
  ast::Direction direction = ast::Direction::Minimize;
  GExpr objective;
  std::vector<GroundConstraint> constraints;
  std::vector<DecisionVar> decision_vars;
  std::vector<std::string> warnings;

  const DecisionVar* find_var(const VarKey& k) const {
    for (const auto& dv : decision_vars)
      if (dv.key == k) return &dv;
    return nullptr;
  }
};

struct ExpansionLimits {
  long long max_constraints = 1'000'000;
  long long max_nodes = 10'000'000;
};

struct GroundResult {
  GroundModel model;
  KnownBindings bindings;
};

GroundResult ground_model(const ast::Model& model,
                          const std::vector<ast::Assignment>& data,
                          const ExpansionLimits& limits = {});

// Algebraic simplification against known quantities: constant folding,
// binder unrolling, neutral-element removal. Total on any expression; parts
// that cannot be resolved are left in place.
ast::Expr simplify_expr(const ast::Expr& expr, const KnownBindings& bindings);

// Normalizes one domain-shaped ground constraint. Throws
// UnsupportedDomainShape when the constraint is not one of the three
// supported forms.
Domain classify_domain(const GroundConstraint& c);

std::string print_gexpr(const GExpr& e);
std::string print_ground_constraint(const GroundConstraint& c);

}  // namespace opmax
