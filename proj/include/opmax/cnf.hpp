#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opmax/bitvec.hpp"

namespace opmax {

using Clause = std::vector<int>;

// Rule variants: Published emits the clause sets verbatim; Exact applies the
// documented corrections where the published sets provably deviate from the
// arithmetic they model (see the conformance report). The pipeline defaults
// to Exact; conformance checks run both.
enum class RuleVariant { Published, Exact };

enum class RuleId {
  FullAdder, HalfAdder, Complement, Adder, MultiAdder, Sum,
  Equal, NotEqual, LessThan, LessEqual,
  Multiplier, Product, Power, Absolute, Floor, Ceil, Max, Min,
  IntegerDomain, RealDomain, EnumerationDomain, Normalization,
  Scale, Indicator,
};

const char* rule_name(RuleId id);

struct CnfFragment {
  RuleId rule;
  size_t first_clause = 0;
  long long clause_count = 0;
  long long aux_var_count = 0;
};

// Clause sink shared by one encoding session. In raw mode constant bits are
// pinned to two reserved variables so emitted clause shapes and counts match
// the published rules exactly; otherwise clauses simplify (true constant
// drops the clause, false constants drop the literal, duplicate literals
// merge, tautologies vanish).
class EmitSession {
 public:
  EmitSession(BitRegistry& reg, bool raw, RuleVariant variant)
      : reg_(reg), raw_(raw), variant_(variant) {
    if (raw_) true_var_ = pin_constant();
  }

  BitRegistry& reg() { return reg_; }
  RuleVariant variant() const { return variant_; }
  bool raw() const { return raw_; }
  bool shift_scale = false;

  std::vector<Clause>& clauses() { return clauses_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  bool unsatisfiable() const { return unsat_; }

  void add(const std::vector<Bit>& bits);
  void add_lits(std::initializer_list<Bit> bits) { add(std::vector<Bit>(bits)); }

  FixedPointWord fresh_word(BitWidth w) { return reg_.alloc_word(w); }
  Bit fresh_bit() { return Bit::literal(reg_.fresh_var()); }

 private:
  int pin_constant() {
    int v = reg_.fresh_var();
    clauses_.push_back({v});
    return v;
  }

  BitRegistry& reg_;
  std::vector<Clause> clauses_;
  bool raw_;
  RuleVariant variant_;
  int true_var_ = 0;
  bool unsat_ = false;
};

// Counts clauses and fresh variables emitted within its lifetime.
class FragmentScope {
 public:
  FragmentScope(EmitSession& s, RuleId rule)
      : s_(s), rule_(rule), c0_(s.clauses().size()), v0_(s.reg().var_count()) {}
  CnfFragment done() const {
    return CnfFragment{rule_, c0_, (long long)(s_.clauses().size() - c0_),
                       (long long)(s_.reg().var_count() - v0_)};
  }

 private:
  EmitSession& s_;
  RuleId rule_;
  size_t c0_;
  int v0_;
};

using Guard = std::vector<Bit>;

// Boolean adders (clauses only, no fresh variables).
CnfFragment emit_full_adder(EmitSession& s, Bit x, Bit y, Bit cin, Bit z, Bit cout,
                            const Guard& guard = {});
CnfFragment emit_half_adder(EmitSession& s, Bit x, Bit y, Bit z, Bit cout,
                            const Guard& guard = {});

// Word rules. Output words are supplied by the caller; intermediate
// variables are allocated inside and counted in the fragment.
CnfFragment emit_complement(EmitSession& s, const FixedPointWord& a,
                            const FixedPointWord& aprime);
CnfFragment emit_adder(EmitSession& s, const FixedPointWord& a,
                       const FixedPointWord& b, const FixedPointWord& c);
CnfFragment emit_multi_adder(EmitSession& s, const std::vector<FixedPointWord>& as,
                             const FixedPointWord& c);
CnfFragment emit_sum(EmitSession& s, const std::vector<FixedPointWord>& as,
                     const FixedPointWord& c);

CnfFragment emit_equal(EmitSession& s, const FixedPointWord& a, const FixedPointWord& b);
CnfFragment emit_not_equal(EmitSession& s, const FixedPointWord& a,
                           const FixedPointWord& b);
CnfFragment emit_less_than(EmitSession& s, const FixedPointWord& a,
                           const FixedPointWord& b);
CnfFragment emit_less_equal(EmitSession& s, const FixedPointWord& a,
                            const FixedPointWord& b);

CnfFragment emit_multiplier(EmitSession& s, const FixedPointWord& a,
                            const FixedPointWord& b, const FixedPointWord& c,
                            const Guard& guard = {});
CnfFragment emit_product(EmitSession& s, const std::vector<FixedPointWord>& as,
                         const FixedPointWord& c);
CnfFragment emit_power(EmitSession& s, const FixedPointWord& a, long long k,
                       const FixedPointWord& c, Rounding rounding);
CnfFragment emit_absolute(EmitSession& s, const FixedPointWord& a,
                          const FixedPointWord& c);
CnfFragment emit_floor(EmitSession& s, const FixedPointWord& a, const FixedPointWord& c);
CnfFragment emit_ceil(EmitSession& s, const FixedPointWord& a, const FixedPointWord& c);
CnfFragment emit_max(EmitSession& s, const std::vector<FixedPointWord>& as,
                     const FixedPointWord& c);
CnfFragment emit_min(EmitSession& s, const std::vector<FixedPointWord>& as,
                     const FixedPointWord& c);
CnfFragment emit_scale(EmitSession& s, const FixedPointWord& a, const Rat& k,
                       const FixedPointWord& c, Rounding rounding);

CnfFragment emit_integer_domain(EmitSession& s, const FixedPointWord& a,
                                std::optional<BigInt> lo, std::optional<BigInt> hi,
                                Rounding rounding);
struct RealBounds {
  std::optional<BigInt> closed_lo, closed_hi;  // L1, R1
  std::optional<BigInt> open_lo, open_hi;      // L2, R2
};
CnfFragment emit_real_domain(EmitSession& s, const FixedPointWord& a,
                             const RealBounds& b, Rounding rounding);
CnfFragment emit_enumeration_domain(EmitSession& s, const FixedPointWord& a,
                                    const std::vector<FixedPointWord>& bs);
CnfFragment emit_normalization(EmitSession& s, const FixedPointWord& a,
                               const FixedPointWord& c);

// Reified relation: output word equals 1 when the relation holds, 0
// otherwise. kind is one of Eq/Ne/Le/Lt (Ge/Gt are mapped before the call).
CnfFragment emit_indicator(EmitSession& s, GRel kind, const FixedPointWord& a,
                           const FixedPointWord& b, const FixedPointWord& c);

}  // namespace opmax
