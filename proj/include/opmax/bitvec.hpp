#pragma once

#include <map>
#include <string>
#include <vector>

#include "opmax/diagnostics.hpp"
#include "opmax/ground.hpp"
#include "opmax/rational.hpp"

namespace opmax {

// Signed binary fixed-point width: 1 sign bit + n integer bits + m
// fractional bits.
struct BitWidth {
  int n = 1;  // integer bits, >= 1
  int m = 0;  // fractional bits, >= 0

  int total() const { return m + n + 1; }
  Rat max_magnitude() const { return Rat(pow2(n)) - pow2_inv(m); }
  Rat step() const { return pow2_inv(m); }
};

// One word bit: either a literal over a solver variable (possibly negated)
// or a fixed constant. Constants let encoded numbers participate in rules
// without fresh variables.
struct Bit {
  int lit = 0;       // nonzero: +id or -id
  bool cval = false; // constant value when lit == 0

  static Bit constant(bool v) { return Bit{0, v}; }
  static Bit literal(int l) { return Bit{l, false}; }
  bool is_const() const { return lit == 0; }
  Bit negated() const { return is_const() ? constant(!cval) : literal(-lit); }
};

// Ordered list of m+n+1 bits; index 0 is the least fractional bit, index
// m+n the sign bit.
struct FixedPointWord {
  BitWidth width;
  std::vector<Bit> bits;

  const Bit& sign() const { return bits.back(); }
  bool all_const() const {
    for (const auto& b : bits)
      if (!b.is_const()) return false;
    return true;
  }
};

enum class Rounding { Reject, Nearest };

struct RoundingEvent {
  Rat requested;
  Rat stored;
};

// Allocates fresh Boolean ids and tracks per-decision-variable words (the
// shared encoding table Q) plus known quantities P.
class BitRegistry {
 public:
  int fresh_var() { return next_++; }
  int var_count() const { return next_ - 1; }

  FixedPointWord alloc_word(BitWidth w) {
    FixedPointWord word;
    word.width = w;
    word.bits.reserve(w.total());
    for (int i = 0; i < w.total(); ++i) word.bits.push_back(Bit::literal(fresh_var()));
    return word;
  }

  std::map<VarKey, FixedPointWord>& table() { return q_; }
  const std::map<VarKey, FixedPointWord>& table() const { return q_; }

  KnownBindings known;
  std::vector<RoundingEvent> rounding_events;

 private:
  int next_ = 1;
  std::map<VarKey, FixedPointWord> q_;
};

// Encodes an exact rational as a constant-bit word. Under Reject the value
// must be exactly representable; under Nearest it is rounded half away from
// zero and the introduced error recorded.
FixedPointWord encode_constant(BitRegistry& reg, const Rat& value, BitWidth w,
                               Rounding rounding);

// Decodes a word under a total assignment (1-based var id -> bool).
Rat decode_word(const FixedPointWord& word, const std::vector<signed char>& assignment);

// The decoded value of an all-constant word.
Rat const_word_value(const FixedPointWord& word);

// All representable values at a width, ascending, with 0 listed once.
std::vector<Rat> representable_values(BitWidth w);

bool is_representable(const Rat& v, BitWidth w);
Rat round_to_width(const Rat& v, BitWidth w);  // nearest, half away from zero

}  // namespace opmax
