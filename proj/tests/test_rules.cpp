#include <doctest.h>

#include "opmax/cnf.hpp"
#include "opmax/solve.hpp"

using namespace opmax;

namespace {

struct Emitted {
  BitRegistry reg;
  EmitSession session{reg, /*raw=*/true, RuleVariant::Published};
  std::vector<FixedPointWord> words;

  explicit Emitted(RuleVariant v = RuleVariant::Published)
      : session(reg, true, v) {}

  FixedPointWord word(BitWidth w) {
    words.push_back(session.fresh_word(w));
    return words.back();
  }
};

}  // namespace

TEST_CASE("full adder truth table") {
  BitRegistry reg;
  EmitSession s(reg, false, RuleVariant::Published);
  Bit x = s.fresh_bit(), y = s.fresh_bit(), ci = s.fresh_bit();
  Bit z = s.fresh_bit(), co = s.fresh_bit();
  emit_full_adder(s, x, y, ci, z, co);
  auto rows = sat_enumerate(s.clauses(), {x.lit, y.lit, ci.lit, z.lit, co.lit});
  CHECK(rows.size() == 8);
  for (const auto& r : rows) {
    int sum = r[0] + r[1] + r[2];
    CHECK((int)r[3] == sum % 2);
    CHECK((int)r[4] == sum / 2);
  }
}

TEST_CASE("half adder truth table") {
  BitRegistry reg;
  EmitSession s(reg, false, RuleVariant::Published);
  Bit x = s.fresh_bit(), y = s.fresh_bit(), z = s.fresh_bit(), co = s.fresh_bit();
  emit_half_adder(s, x, y, z, co);
  auto rows = sat_enumerate(s.clauses(), {x.lit, y.lit, z.lit, co.lit});
  CHECK(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK((int)r[2] == (r[0] + r[1]) % 2);
    CHECK((int)r[3] == (r[0] && r[1] ? 1 : 0));
  }
}

TEST_CASE("published counts at (2,1): the worked examples") {
  BitWidth w{2, 1};
  SUBCASE("complement has 4 intermediates and 29 clauses") {
    Emitted e;
    auto a = e.word(w), ap = e.word(w);
    auto frag = emit_complement(e.session, a, ap);
    CHECK(frag.aux_var_count == 4);
    CHECK(frag.clause_count == 8 * 1 + 8 * 2 + 5);
  }
  SUBCASE("equal has 1 intermediate and 4m+4n+4 clauses") {
    Emitted e;
    auto a = e.word(w), b = e.word(w);
    auto frag = emit_equal(e.session, a, b);
    CHECK(frag.aux_var_count == 1);
    CHECK(frag.clause_count == 4 * 1 + 4 * 2 + 4);
  }
  SUBCASE("adder emits 12m+12n+15 clauses") {
    Emitted e;
    auto a = e.word(w), b = e.word(w), c = e.word(w);
    auto frag = emit_adder(e.session, a, b, c);
    CHECK(frag.clause_count == 12 * 1 + 12 * 2 + 15);
  }
  SUBCASE("normalization matches the complement counts") {
    Emitted e;
    auto a = e.word(w), c = e.word(w);
    auto frag = emit_normalization(e.session, a, c);
    CHECK(frag.aux_var_count == 4);
    CHECK(frag.clause_count == 29);
  }
  SUBCASE("soft-weight layout: m+n+1 bits") {
    CHECK(w.total() == 4);
  }
}

TEST_CASE("width mismatch is rejected") {
  Emitted e;
  auto a = e.word(BitWidth{2, 1});
  auto b = e.word(BitWidth{2, 0});
  CHECK_THROWS_AS(emit_equal(e.session, a, b), Error);
}

TEST_CASE("multi adder requires at least two operands") {
  Emitted e;
  auto a = e.word(BitWidth{2, 0});
  auto c = e.word(BitWidth{2, 0});
  CHECK_THROWS_AS(emit_multi_adder(e.session, {a}, c), Error);
}

TEST_CASE("adder projections are exactly in-range two's-complement sums") {
  BitWidth w{2, 0};
  BitRegistry reg;
  EmitSession s(reg, false, RuleVariant::Published);
  auto a = s.fresh_word(w), b = s.fresh_word(w), c = s.fresh_word(w);
  emit_adder(s, a, b, c);
  std::vector<int> pins;
  for (auto* word : {&a, &b, &c})
    for (auto& bit : word->bits) pins.push_back(bit.lit);
  auto rows = sat_enumerate(s.clauses(), pins);
  auto tc = [](const std::vector<bool>& r, int off) {
    int v = (r[off] ? 1 : 0) + (r[off + 1] ? 2 : 0);
    return r[off + 2] ? v - 4 : v;
  };
  int count = 0;
  for (const auto& r : rows) {
    int va = tc(r, 0), vb = tc(r, 3), vc = tc(r, 6);
    CHECK(va + vb == vc);
    ++count;
  }
  // every in-range pair appears exactly once
  int expect = 0;
  for (int va = -4; va <= 3; ++va)
    for (int vb = -4; vb <= 3; ++vb)
      if (va + vb >= -4 && va + vb <= 3) ++expect;
  CHECK(count == expect);
}

TEST_CASE("floor matches exact semantics including negatives") {
  BitWidth w{2, 2};
  BitRegistry reg;
  EmitSession s(reg, false, RuleVariant::Exact);
  auto a = s.fresh_word(w), c = s.fresh_word(w);
  emit_floor(s, a, c);
  std::vector<int> pins;
  for (auto* word : {&a, &c})
    for (auto& bit : word->bits) pins.push_back(bit.lit);
  auto rows = sat_enumerate(s.clauses(), pins, 26);
  auto sm = [&](const std::vector<bool>& r, int off) {
    Rat mag = Rat(r[off] ? 1 : 0, 4) + Rat(r[off + 1] ? 1 : 0, 2) +
              Rat(r[off + 2] ? 1 : 0) + Rat(r[off + 3] ? 2 : 0);
    return r[off + 4] ? -mag : mag;
  };
  bool saw_neg_frac = false;
  for (const auto& r : rows) {
    Rat va = sm(r, 0), vc = sm(r, 5);
    CHECK(vc == rat_floor(va));
    if (va == Rat(-5, 4)) {
      CHECK(vc == Rat(-2));
      saw_neg_frac = true;
    }
  }
  CHECK(saw_neg_frac);
}

TEST_CASE("power overflow behavior at (2,0)") {
  BitWidth w{2, 0};
  BitRegistry reg;
  EmitSession s(reg, false, RuleVariant::Exact);
  auto a = s.fresh_word(w), c = s.fresh_word(w);
  emit_power(s, a, 2, c, Rounding::Reject);
  std::vector<int> pins;
  for (auto& bit : a.bits) pins.push_back(bit.lit);
  for (auto& bit : c.bits) pins.push_back(bit.lit);
  auto rows = sat_enumerate(s.clauses(), pins);
  auto sm = [](const std::vector<bool>& r, int off) {
    int mag = (r[off] ? 1 : 0) + (r[off + 1] ? 2 : 0);
    return r[off + 2] ? -mag : mag;
  };
  std::set<int> a_values;
  for (const auto& r : rows) {
    int va = sm(r, 0), vc = sm(r, 3);
    CHECK(vc == va * va);
    a_values.insert(va);
  }
  // |a| <= 1 representable squares only; |a| >= 2 has no satisfying extension
  CHECK(a_values == std::set<int>{-1, 0, 1});
}

TEST_CASE("scale by a power of two via the shift encoding") {
  BitWidth w{3, 1};
  BitRegistry reg;
  EmitSession s(reg, false, RuleVariant::Exact);
  s.shift_scale = true;
  auto a = s.fresh_word(w), c = s.fresh_word(w);
  emit_scale(s, a, Rat(2), c, Rounding::Reject);
  std::vector<int> pins;
  for (auto& bit : a.bits) pins.push_back(bit.lit);
  for (auto& bit : c.bits) pins.push_back(bit.lit);
  auto rows = sat_enumerate(s.clauses(), pins, 26);
  auto sm = [](const std::vector<bool>& r, int off) {
    Rat mag = Rat(r[off] ? 1 : 0, 2) + Rat(r[off + 1] ? 1 : 0) +
              Rat(r[off + 2] ? 2 : 0) + Rat(r[off + 3] ? 4 : 0);
    return r[off + 4] ? -mag : mag;
  };
  int count = 0;
  for (const auto& r : rows) {
    CHECK(sm(r, 5) == 2 * sm(r, 0));
    ++count;
  }
  CHECK(count > 0);
}

TEST_CASE("indicator reifies a relation into a 0/1 word") {
  BitWidth w{2, 0};
  BitRegistry reg;
  EmitSession s(reg, false, RuleVariant::Exact);
  auto a = s.fresh_word(w), b = s.fresh_word(w);
  FixedPointWord c;
  c.width = w;
  for (int i = 0; i < w.total(); ++i) c.bits.push_back(Bit::constant(false));
  c.bits[w.m] = s.fresh_bit();
  emit_indicator(s, GRel::Lt, a, b, c);
  std::vector<int> pins;
  for (auto& bit : a.bits) pins.push_back(bit.lit);
  for (auto& bit : b.bits) pins.push_back(bit.lit);
  pins.push_back(c.bits[w.m].lit);
  auto rows = sat_enumerate(s.clauses(), pins);
  auto sm = [](const std::vector<bool>& r, int off) {
    int mag = (r[off] ? 1 : 0) + (r[off + 1] ? 2 : 0);
    return r[off + 2] ? -mag : mag;
  };
  CHECK(rows.size() == 64);  // 8 x 8 bit patterns, each with a forced flag
  for (const auto& r : rows) CHECK((sm(r, 0) < sm(r, 3)) == r[6]);
}
