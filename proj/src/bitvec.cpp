#include "opmax/bitvec.hpp"

#include <algorithm>

namespace opmax {

FixedPointWord encode_constant(BitRegistry& reg, const Rat& value, BitWidth w,
                               Rounding rounding) {
  Rat stored = value;
  Rat scaled = value * pow2(w.m);
  if (!rat_is_int(scaled)) {
    if (rounding == Rounding::Reject)
      throw encode_error("InexactConstant",
                         "constant " + rat_to_string(value) +
                             " is not representable with " + std::to_string(w.m) +
                             " fractional bits");
    stored = round_to_width(value, w);
    reg.rounding_events.push_back(RoundingEvent{value, stored});
    scaled = stored * pow2(w.m);
  }
  if (rat_abs(stored) > w.max_magnitude())
    throw encode_error("Overflow",
                       "constant " + rat_to_string(value) + " exceeds range of (n=" +
                           std::to_string(w.n) + ", m=" + std::to_string(w.m) + ")");

  bool negative = stored < 0;
  BigInt mag = rat_num(rat_abs(scaled));
  FixedPointWord word;
  word.width = w;
  for (int i = 0; i < w.m + w.n; ++i) {
    word.bits.push_back(Bit::constant(boost::multiprecision::bit_test(mag, i)));
  }
  word.bits.push_back(Bit::constant(negative));  // zero always encodes sign 0
  return word;
}

Rat decode_word(const FixedPointWord& word, const std::vector<signed char>& assignment) {
  const BitWidth& w = word.width;
  BigInt mag = 0;
  auto bit_value = [&](const Bit& b) -> bool {
    if (b.is_const()) return b.cval;
    int v = b.lit > 0 ? b.lit : -b.lit;
    if (v >= (int)assignment.size() || assignment[v] < 0)
      throw decode_error("MissingBit", "assignment missing bit " + std::to_string(v));
    bool val = assignment[v] != 0;
    return b.lit > 0 ? val : !val;
  };
  for (int i = 0; i < w.m + w.n; ++i)
    if (bit_value(word.bits[i])) boost::multiprecision::bit_set(mag, i);
  Rat v = Rat(mag) / pow2(w.m);
  return bit_value(word.bits[w.m + w.n]) ? Rat(-v) : v;
}

Rat const_word_value(const FixedPointWord& word) {
  const BitWidth& w = word.width;
  BigInt mag = 0;
  for (int i = 0; i < w.m + w.n; ++i) {
    if (!word.bits[i].is_const())
      throw decode_error("MissingBit", "word is not constant");
    if (word.bits[i].cval) boost::multiprecision::bit_set(mag, i);
  }
  Rat v = Rat(mag) / pow2(w.m);
  return word.bits[w.m + w.n].cval ? Rat(-v) : v;
}

std::vector<Rat> representable_values(BitWidth w) {
  std::vector<Rat> out;
  Rat step = w.step();
  Rat maxmag = w.max_magnitude();
  for (Rat v = -maxmag; v <= maxmag; v += step) out.push_back(v);
  return out;
}

bool is_representable(const Rat& v, BitWidth w) {
  return rat_is_int(v * pow2(w.m)) && rat_abs(v) <= w.max_magnitude();
}

Rat round_to_width(const Rat& v, BitWidth w) {
  Rat scaled = v * pow2(w.m);
  Rat fl = rat_floor(scaled);
  Rat frac = scaled - fl;
  BigInt rounded;
  if (frac < Rat(1, 2)) {
    rounded = rat_num(fl);
  } else if (frac > Rat(1, 2)) {
    rounded = rat_num(fl) + 1;
  } else {
    // ties round half away from zero
    rounded = v >= 0 ? rat_num(fl) + 1 : rat_num(fl);
  }
  return Rat(rounded) / pow2(w.m);
}

}  // namespace opmax
