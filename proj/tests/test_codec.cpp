#include <doctest.h>

#include "opmax/bitvec.hpp"

using namespace opmax;

TEST_CASE("alloc_word advances the counter and never reuses ids") {
  BitRegistry reg;
  auto w1 = reg.alloc_word(BitWidth{2, 1});
  CHECK(w1.bits.size() == 4);
  CHECK(w1.bits[0].lit == 1);
  CHECK(w1.bits[3].lit == 4);
  auto w2 = reg.alloc_word(BitWidth{2, 1});
  for (const auto& a : w1.bits)
    for (const auto& b : w2.bits) CHECK(a.lit != b.lit);
  auto w3 = reg.alloc_word(BitWidth{1, 0});
  CHECK(w3.bits.size() == 2);
}

TEST_CASE("constant encoding") {
  BitRegistry reg;
  SUBCASE("2.5 at (n=2,m=1)") {
    auto w = encode_constant(reg, Rat(5, 2), BitWidth{2, 1}, Rounding::Reject);
    CHECK(w.bits[0].cval == true);   // fractional half
    CHECK(w.bits[1].cval == false);  // 2^0
    CHECK(w.bits[2].cval == true);   // 2^1
    CHECK(w.bits[3].cval == false);  // sign
    CHECK(const_word_value(w) == Rat(5, 2));
  }
  SUBCASE("0.1 under nearest rounding stores 2/16 at m=4") {
    auto w = encode_constant(reg, Rat(1, 10), BitWidth{2, 4}, Rounding::Nearest);
    CHECK(const_word_value(w) == Rat(2, 16));
    REQUIRE(reg.rounding_events.size() == 1);
    CHECK(reg.rounding_events[0].requested == Rat(1, 10));
  }
  SUBCASE("overflow is rejected: 5 does not fit (n=2,m=1)") {
    CHECK_THROWS_AS(encode_constant(reg, Rat(5), BitWidth{2, 1}, Rounding::Reject), Error);
  }
  SUBCASE("inexact constants are rejected under reject") {
    try {
      encode_constant(reg, Rat(1, 10), BitWidth{2, 1}, Rounding::Reject);
      FAIL("expected InexactConstant");
    } catch (const Error& e) {
      CHECK(e.kind() == "InexactConstant");
    }
  }
  SUBCASE("the overflow bound is tight") {
    BitWidth w{2, 1};
    CHECK_NOTHROW(encode_constant(reg, w.max_magnitude(), w, Rounding::Reject));
    CHECK_THROWS_AS(encode_constant(reg, w.max_magnitude() + w.step(), w, Rounding::Reject),
                    Error);
  }
  SUBCASE("zero always encodes with sign 0") {
    auto w = encode_constant(reg, Rat(0), BitWidth{3, 2}, Rounding::Reject);
    CHECK(w.bits.back().cval == false);
  }
}

TEST_CASE("decoding") {
  BitRegistry reg;
  BitWidth w{2, 1};
  auto word = reg.alloc_word(w);
  SUBCASE("all-zero decodes to 0") {
    std::vector<signed char> assign(5, 0);
    CHECK(decode_word(word, assign) == Rat(0));
  }
  SUBCASE("sign=1 int=11 frac=0 decodes to -3") {
    std::vector<signed char> assign(5, 0);
    assign[word.bits[1].lit] = 1;
    assign[word.bits[2].lit] = 1;
    assign[word.bits[3].lit] = 1;  // sign
    CHECK(decode_word(word, assign) == Rat(-3));
  }
  SUBCASE("negative zero decodes to 0") {
    std::vector<signed char> assign(5, 0);
    assign[word.bits[3].lit] = 1;
    CHECK(decode_word(word, assign) == Rat(0));
  }
  SUBCASE("missing bits are reported") {
    std::vector<signed char> assign(5, -1);
    CHECK_THROWS_AS(decode_word(word, assign), Error);
  }
}

TEST_CASE("round-trip over every representable value at small widths") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 2; ++m) {
      BitRegistry reg;
      BitWidth w{n, m};
      for (const Rat& v : representable_values(w)) {
        auto word = encode_constant(reg, v, w, Rounding::Reject);
        CHECK(const_word_value(word) == v);
      }
      // value count: two signs for every nonzero magnitude, zero once
      CHECK(representable_values(w).size() ==
            2 * ((size_t)1 << (n + m)) - 1);
    }
}

TEST_CASE("nearest rounding is half away from zero") {
  BitWidth w{3, 1};
  CHECK(round_to_width(Rat(1, 4), w) == Rat(1, 2));    // tie, away from zero
  CHECK(round_to_width(Rat(-1, 4), w) == Rat(-1, 2));
  CHECK(round_to_width(Rat(3, 10), w) == Rat(1, 2));
  CHECK(round_to_width(Rat(1, 5), w) == Rat(0));
}
