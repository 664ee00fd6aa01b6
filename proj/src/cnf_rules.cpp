#include "opmax/cnf.hpp"

#include <algorithm>
#include <cmath>

namespace opmax {

const char* rule_name(RuleId id) {
  switch (id) {
    case RuleId::FullAdder: return "FullAdder";
    case RuleId::HalfAdder: return "HalfAdder";
    case RuleId::Complement: return "Complement";
    case RuleId::Adder: return "Adder";
    case RuleId::MultiAdder: return "MultiAdder";
    case RuleId::Sum: return "Sum";
    case RuleId::Equal: return "Equal";
    case RuleId::NotEqual: return "NotEqual";
    case RuleId::LessThan: return "LessThan";
    case RuleId::LessEqual: return "LessEqual";
    case RuleId::Multiplier: return "Multiplier";
    case RuleId::Product: return "Product";
    case RuleId::Power: return "Power";
    case RuleId::Absolute: return "Absolute";
    case RuleId::Floor: return "Floor";
    case RuleId::Ceil: return "Ceil";
    case RuleId::Max: return "Max";
    case RuleId::Min: return "Min";
    case RuleId::IntegerDomain: return "IntegerDomain";
    case RuleId::RealDomain: return "RealDomain";
    case RuleId::EnumerationDomain: return "EnumerationDomain";
    case RuleId::Normalization: return "Normalization";
    case RuleId::Scale: return "Scale";
    case RuleId::Indicator: return "Indicator";
  }
  return "?";
}

void EmitSession::add(const std::vector<Bit>& bits) {
  Clause c;
  c.reserve(bits.size());
  if (raw_) {
    for (const Bit& b : bits)
      c.push_back(b.is_const() ? (b.cval ? true_var_ : -true_var_) : b.lit);
    clauses_.push_back(std::move(c));
    return;
  }
  for (const Bit& b : bits) {
    if (b.is_const()) {
      if (b.cval) return;  // satisfied
      continue;            // false literal drops out
    }
    c.push_back(b.lit);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i] == -c[i + 1]) return;  // tautology
  if (c.empty()) unsat_ = true;
  clauses_.push_back(std::move(c));
}

namespace {

Bit pos(const FixedPointWord& w, int i) { return w.bits[i]; }
Bit neg(const FixedPointWord& w, int i) { return w.bits[i].negated(); }

std::vector<Bit> with_guard(const Guard& g, std::initializer_list<Bit> bits) {
  std::vector<Bit> out(g);
  out.insert(out.end(), bits);
  return out;
}

void check_widths(const FixedPointWord& a, const FixedPointWord& b) {
  if (a.width.n != b.width.n || a.width.m != b.width.m)
    throw encode_error("WidthMismatch", "operand widths differ");
}

}  // namespace

CnfFragment emit_full_adder(EmitSession& s, Bit x, Bit y, Bit cin, Bit z, Bit cout,
                            const Guard& g) {
  FragmentScope fs(s, RuleId::FullAdder);
  s.add(with_guard(g, {x, y.negated(), cin, z}));
  s.add(with_guard(g, {x, y, cin.negated(), z}));
  s.add(with_guard(g, {x.negated(), y.negated(), cin, z.negated()}));
  s.add(with_guard(g, {x.negated(), y, cin.negated(), z.negated()}));
  s.add(with_guard(g, {x.negated(), cout, z}));
  s.add(with_guard(g, {x, cout.negated(), z.negated()}));
  s.add(with_guard(g, {y.negated(), cin.negated(), cout}));
  s.add(with_guard(g, {y, cin, cout.negated()}));
  s.add(with_guard(g, {x.negated(), y.negated(), cin.negated(), z}));
  s.add(with_guard(g, {x, y, cin, z.negated()}));
  return fs.done();
}

CnfFragment emit_half_adder(EmitSession& s, Bit x, Bit y, Bit z, Bit cout,
                            const Guard& g) {
  FragmentScope fs(s, RuleId::HalfAdder);
  s.add(with_guard(g, {x, y.negated(), z}));
  s.add(with_guard(g, {x.negated(), y.negated(), z.negated()}));
  s.add(with_guard(g, {x.negated(), cout, z}));
  s.add(with_guard(g, {x, cout.negated(), z.negated()}));
  s.add(with_guard(g, {y, cout.negated()}));
  s.add(with_guard(g, {x, y, z.negated()}));
  return fs.done();
}

CnfFragment emit_complement(EmitSession& s, const FixedPointWord& a,
                            const FixedPointWord& ap) {
  check_widths(a, ap);
  FragmentScope fs(s, RuleId::Complement);
  int sb = a.width.m + a.width.n;  // sign position
  Bit as = pos(a, sb);

  for (int i = 0; i < sb; ++i) s.add_lits({as, neg(a, i), pos(ap, i)});
  for (int i = 0; i < sb; ++i) s.add_lits({as, pos(a, i), neg(ap, i)});
  s.add_lits({as, neg(ap, sb)});

  std::vector<Bit> d;
  for (int i = 0; i <= sb; ++i) d.push_back(s.fresh_bit());
  s.add_lits({as.negated(), d[0]});
  Guard g{as.negated()};
  for (int i = 0; i < sb; ++i)
    emit_half_adder(s, neg(a, i), d[i], pos(ap, i), d[i + 1], g);
  s.add_lits({as.negated(), d[sb], pos(ap, sb)});
  s.add_lits({as.negated(), d[sb].negated(), neg(ap, sb)});

  std::vector<Bit> nz;
  for (int i = 0; i < sb; ++i) nz.push_back(pos(ap, i));
  nz.push_back(neg(ap, sb));
  s.add(nz);
  return fs.done();
}

CnfFragment emit_adder(EmitSession& s, const FixedPointWord& a,
                       const FixedPointWord& b, const FixedPointWord& c) {
  check_widths(a, b);
  check_widths(a, c);
  FragmentScope fs(s, RuleId::Adder);
  int sb = a.width.m + a.width.n;

  std::vector<Bit> d;
  for (int i = 0; i <= sb + 1; ++i) d.push_back(s.fresh_bit());
  s.add_lits({d[0].negated()});
  s.add_lits({neg(a, sb), neg(b, sb), pos(c, sb)});
  s.add_lits({pos(a, sb), pos(b, sb), neg(c, sb)});
  for (int i = 0; i <= sb; ++i) s.add_lits({pos(a, i), pos(b, i), d[i + 1].negated()});
  for (int i = 0; i <= sb; ++i) s.add_lits({neg(a, i), neg(b, i), d[i + 1]});
  for (int i = 0; i <= sb; ++i)
    emit_full_adder(s, pos(a, i), pos(b, i), d[i], pos(c, i), d[i + 1]);
  return fs.done();
}

CnfFragment emit_multi_adder(EmitSession& s, const std::vector<FixedPointWord>& as,
                             const FixedPointWord& c) {
  if (as.size() < 2) throw encode_error("ArityError", "MultiAdder requires k >= 2");
  FragmentScope fs(s, RuleId::MultiAdder);
  size_t k = as.size();
  if (k == 2) {
    emit_adder(s, as[0], as[1], c);
  } else if (k == 3) {
    FixedPointWord e = s.fresh_word(c.width);
    emit_adder(s, as[0], as[1], e);
    emit_adder(s, e, as[2], c);
  } else {
    size_t half = k / 2;
    FixedPointWord b1 = s.fresh_word(c.width);
    FixedPointWord b2 = s.fresh_word(c.width);
    std::vector<FixedPointWord> left(as.begin(), as.begin() + half);
    std::vector<FixedPointWord> right(as.begin() + half, as.end());
    emit_multi_adder(s, left, b1);
    emit_multi_adder(s, right, b2);
    emit_adder(s, b1, b2, c);
  }
  return fs.done();
}

CnfFragment emit_sum(EmitSession& s, const std::vector<FixedPointWord>& as,
                     const FixedPointWord& c) {
  FragmentScope fs(s, RuleId::Sum);
  std::vector<FixedPointWord> primes;
  for (const auto& a : as) {
    check_widths(a, c);
    FixedPointWord ap = s.fresh_word(c.width);
    emit_complement(s, a, ap);
    primes.push_back(std::move(ap));
  }
  FixedPointWord cp = s.fresh_word(c.width);
  emit_multi_adder(s, primes, cp);
  emit_complement(s, c, cp);
  return fs.done();
}

CnfFragment emit_equal(EmitSession& s, const FixedPointWord& a,
                       const FixedPointWord& b) {
  check_widths(a, b);
  FragmentScope fs(s, RuleId::Equal);
  int sb = a.width.m + a.width.n;
  Bit e = s.fresh_bit();
  s.add_lits({neg(a, sb), neg(b, sb), e});
  s.add_lits({pos(a, sb), pos(b, sb), e});
  s.add_lits({pos(a, sb), neg(b, sb), e.negated()});
  s.add_lits({neg(a, sb), pos(b, sb), e.negated()});
  for (int i = 0; i < sb; ++i) s.add_lits({e.negated(), neg(a, i), pos(b, i)});
  for (int i = 0; i < sb; ++i) s.add_lits({e.negated(), pos(a, i), neg(b, i)});
  for (int i = 0; i < sb; ++i) s.add_lits({e, neg(a, i)});
  for (int i = 0; i < sb; ++i) s.add_lits({e, neg(b, i)});
  return fs.done();
}

CnfFragment emit_not_equal(EmitSession& s, const FixedPointWord& a,
                           const FixedPointWord& b) {
  check_widths(a, b);
  FragmentScope fs(s, RuleId::NotEqual);
  int sb = a.width.m + a.width.n;
  Bit e = s.fresh_bit();
  std::vector<Bit> p;
  for (int i = 0; i < sb; ++i) p.push_back(s.fresh_bit());

  s.add_lits({neg(a, sb), neg(b, sb), e});
  s.add_lits({pos(a, sb), pos(b, sb), e});
  s.add_lits({pos(a, sb), neg(b, sb), e.negated()});
  s.add_lits({neg(a, sb), pos(b, sb), e.negated()});
  for (int i = 0; i < sb; ++i) s.add_lits({e.negated(), neg(a, i), pos(b, i), p[i]});
  for (int i = 0; i < sb; ++i) s.add_lits({e.negated(), pos(a, i), neg(b, i), p[i]});
  for (int i = 0; i < sb; ++i)
    s.add_lits({e.negated(), neg(a, i), neg(b, i), p[i].negated()});
  for (int i = 0; i < sb; ++i)
    s.add_lits({e.negated(), pos(a, i), pos(b, i), p[i].negated()});
  std::vector<Bit> any{e.negated()};
  for (int i = 0; i < sb; ++i) any.push_back(p[i]);
  s.add(any);
  std::vector<Bit> nz{e};
  for (int i = 0; i < sb; ++i) nz.push_back(pos(a, i));
  for (int i = 0; i < sb; ++i) nz.push_back(pos(b, i));
  s.add(nz);
  return fs.done();
}

namespace {

// shared q/p cascade of LessThan / LessEqual (families 3-25 of each)
struct OrderCascade {
  std::vector<Bit> q, p;
  Bit d;
};

OrderCascade emit_order_cascade(EmitSession& s, const FixedPointWord& a,
                                const FixedPointWord& b) {
  int m = a.width.m, sb = a.width.m + a.width.n;
  OrderCascade oc;
  for (int i = 0; i <= sb; ++i) oc.q.push_back(s.fresh_bit());
  for (int i = 0; i <= sb; ++i) oc.p.push_back(s.fresh_bit());
  oc.d = s.fresh_bit();

  s.add_lits({oc.q[sb].negated()});
  s.add_lits({oc.p[sb].negated()});
  for (int i = m; i < sb; ++i) s.add_lits({neg(a, i), pos(b, i), oc.q[i]});
  for (int i = m; i < sb; ++i) s.add_lits({oc.q[i + 1].negated(), oc.q[i]});
  for (int i = m; i < sb; ++i) s.add_lits({pos(a, i), oc.q[i + 1], oc.q[i].negated()});
  for (int i = m; i < sb; ++i) s.add_lits({neg(b, i), oc.q[i + 1], oc.q[i].negated()});
  for (int i = m; i < sb; ++i) s.add_lits({pos(a, i), neg(b, i), oc.p[i]});
  for (int i = m; i < sb; ++i) s.add_lits({oc.p[i + 1].negated(), oc.p[i]});
  for (int i = m; i < sb; ++i) s.add_lits({neg(a, i), oc.p[i + 1], oc.p[i].negated()});
  for (int i = m; i < sb; ++i) s.add_lits({pos(b, i), oc.p[i + 1], oc.p[i].negated()});

  std::vector<Bit> dz;
  for (int i = 0; i < m; ++i) dz.push_back(pos(a, i));
  for (int i = 0; i < m; ++i) dz.push_back(pos(b, i));
  dz.push_back(oc.d);
  s.add(dz);
  for (int i = 0; i < m; ++i) s.add_lits({neg(a, i), oc.d.negated()});
  for (int i = 0; i < m; ++i) s.add_lits({neg(b, i), oc.d.negated()});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d.negated(), oc.q[i]});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d.negated(), oc.p[i]});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d, neg(a, i), pos(b, i), oc.q[i]});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d, oc.q[i + 1].negated(), oc.q[i]});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d, pos(a, i), oc.q[i + 1], oc.q[i].negated()});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d, neg(b, i), oc.q[i + 1], oc.q[i].negated()});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d, pos(a, i), neg(b, i), oc.p[i]});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d, oc.p[i + 1].negated(), oc.p[i]});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d, neg(a, i), oc.p[i + 1], oc.p[i].negated()});
  for (int i = 0; i < m; ++i) s.add_lits({oc.d, pos(b, i), oc.p[i + 1], oc.p[i].negated()});
  return oc;
}

}  // namespace

CnfFragment emit_less_than(EmitSession& s, const FixedPointWord& a,
                           const FixedPointWord& b) {
  check_widths(a, b);
  FragmentScope fs(s, RuleId::LessThan);
  int sb = a.width.m + a.width.n;
  Bit as = pos(a, sb), bs = pos(b, sb);

  s.add_lits({as, bs.negated()});
  std::vector<Bit> nz{as.negated(), bs};
  for (int i = 0; i < sb; ++i) nz.push_back(pos(a, i));
  for (int i = 0; i < sb; ++i) nz.push_back(pos(b, i));
  s.add(nz);

  OrderCascade oc = emit_order_cascade(s, a, b);

  if (s.variant() == RuleVariant::Published) {
    s.add_lits({oc.q[0], oc.p[0]});
    for (int i = 0; i < sb; ++i)
      s.add_lits({oc.q[i].negated(), oc.p[i].negated(), oc.q[i + 1], oc.p[i + 1]});
  } else {
    // strictness applies only when signs agree; the published form wrongly
    // rejects pairs (-x, +x)
    s.add_lits({as, bs, oc.q[0], oc.p[0]});
    s.add_lits({as.negated(), bs.negated(), oc.q[0], oc.p[0]});
    for (int i = 0; i < sb; ++i)
      s.add_lits({as, bs, oc.q[i].negated(), oc.p[i].negated(), oc.q[i + 1], oc.p[i + 1]});
    for (int i = 0; i < sb; ++i)
      s.add_lits({as.negated(), bs.negated(), oc.q[i].negated(), oc.p[i].negated(),
                  oc.q[i + 1], oc.p[i + 1]});
  }
  for (int i = 0; i < sb; ++i) s.add_lits({as, bs, oc.q[i].negated(), oc.p[i]});
  for (int i = 0; i < sb; ++i)
    s.add_lits({as.negated(), bs.negated(), oc.q[i], oc.p[i].negated()});
  return fs.done();
}

CnfFragment emit_less_equal(EmitSession& s, const FixedPointWord& a,
                            const FixedPointWord& b) {
  check_widths(a, b);
  FragmentScope fs(s, RuleId::LessEqual);
  int sb = a.width.m + a.width.n;
  Bit as = pos(a, sb), bs = pos(b, sb);

  for (int i = 0; i < sb; ++i) s.add_lits({as, bs.negated(), neg(a, i)});
  for (int i = 0; i < sb; ++i) s.add_lits({as, bs.negated(), neg(b, i)});

  OrderCascade oc = emit_order_cascade(s, a, b);

  for (int i = 0; i < sb; ++i) s.add_lits({as, bs, oc.q[i].negated(), oc.p[i]});
  for (int i = 0; i < sb; ++i)
    s.add_lits({as.negated(), bs.negated(), oc.q[i], oc.p[i].negated()});
  return fs.done();
}

CnfFragment emit_multiplier(EmitSession& s, const FixedPointWord& a,
                            const FixedPointWord& b, const FixedPointWord& c,
                            const Guard& g) {
  check_widths(a, b);
  check_widths(a, c);
  FragmentScope fs(s, RuleId::Multiplier);
  int m = a.width.m, n = a.width.n;
  int sb = m + n;
  int top = 2 * m + n - 1;  // heaviest kept diagonal
  bool exact = s.variant() == RuleVariant::Exact;
  // the published pair range starts at diagonal 1; at m = 0 that leaves the
  // weight-2^0 column undefined, so the exact variant includes (0,0)
  int lo_diag = (exact && m == 0) ? 0 : 1;

  Bit as = pos(a, sb), bs = pos(b, sb), cs = pos(c, sb);
  s.add(with_guard(g, {as.negated(), bs, cs}));
  s.add(with_guard(g, {as, bs.negated(), cs}));
  s.add(with_guard(g, {as.negated(), bs.negated(), cs.negated()}));
  s.add(with_guard(g, {as, bs, cs.negated()}));

  auto in_pairs = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < sb && j < sb && i + j >= lo_diag && i + j <= top;
  };

  // partial products
  std::vector<std::vector<Bit>> T(sb, std::vector<Bit>(sb));
  for (int i = 0; i < sb; ++i)
    for (int j = 0; j < sb; ++j)
      if (in_pairs(i, j)) {
        T[i][j] = s.fresh_bit();
        s.add(with_guard(g, {neg(a, i), neg(b, j), T[i][j]}));
        s.add(with_guard(g, {pos(a, i), T[i][j].negated()}));
        s.add(with_guard(g, {pos(b, j), T[i][j].negated()}));
      }

  // column 0 seeds and the top-row zero
  std::vector<std::vector<Bit>> D(sb + 1, std::vector<Bit>(sb));
  std::vector<std::vector<Bit>> E(sb + 1, std::vector<Bit>(sb));
  int d0_start = (exact && m == 0) ? 0 : 1;
  for (int i = d0_start; i < sb; ++i) {
    D[i][0] = s.fresh_bit();
    s.add(with_guard(g, {D[i][0].negated(), T[i][0]}));
    s.add(with_guard(g, {D[i][0], T[i][0].negated()}));
  }
  D[sb][0] = s.fresh_bit();
  s.add(with_guard(g, {D[sb][0].negated()}));
  for (int i = 1; i < sb; ++i) {
    E[0][i] = s.fresh_bit();
    s.add(with_guard(g, {E[0][i].negated()}));
  }
  // boundary sum bits fed from the carry row, used by the next column
  for (int j = 1; j < m; ++j) D[sb][j] = s.fresh_bit();

  // adder array: cell (i, j) sums T[i][j], the diagonal input d[i+1][j-1]
  // and the column carry e[i][j]
  for (int j = 1; j < sb; ++j)
    for (int i = 0; i < sb; ++i) {
      if (i + j > top) continue;
      D[i][j] = s.fresh_bit();
      E[i + 1][j] = s.fresh_bit();
      Bit cin = (i == 0) ? E[0][j] : E[i][j];
      emit_full_adder(s, T[i][j], D[i + 1][j - 1], cin, D[i][j], E[i + 1][j], g);
    }

  for (int j = 1; j < m; ++j) {
    s.add(with_guard(g, {D[sb][j].negated(), E[sb][j]}));
    s.add(with_guard(g, {D[sb][j], E[sb][j].negated()}));
  }

  // outputs along the result diagonals; an undefined slot at m = 0 mirrors
  // the published rule, which leaves that column unconstrained
  for (int i = 0; i < sb; ++i) {
    int jj = std::min(i + m, sb - 1);
    int ii = i + m - jj;
    if (D[ii][jj].lit == 0) D[ii][jj] = s.fresh_bit();
    s.add(with_guard(g, {neg(c, i), D[ii][jj]}));
    s.add(with_guard(g, {pos(c, i), D[ii][jj].negated()}));
  }

  // overflow carries off the top of each heavy column
  for (int j = m; j < sb; ++j) {
    int ii = 2 * m + n - j;
    if (E[ii][j].lit == 0) E[ii][j] = s.fresh_bit();
    s.add(with_guard(g, {E[ii][j].negated()}));
  }

  // pairs beyond the heaviest diagonal cannot both be set
  for (int i = 0; i < sb; ++i)
    for (int j = 0; j < sb; ++j)
      if (i + j > top) s.add(with_guard(g, {neg(a, i), neg(b, j)}));

  if (exact) {
    // sub-precision mass must vanish for the product to be exact
    if (m >= 1) s.add(with_guard(g, {neg(a, 0), neg(b, 0)}));
    for (int w = 1; w < m; ++w) s.add(with_guard(g, {D[0][w].negated()}));
  }
  return fs.done();
}

CnfFragment emit_product(EmitSession& s, const std::vector<FixedPointWord>& as,
                         const FixedPointWord& c) {
  if (as.size() < 2) throw encode_error("ArityError", "Product requires k >= 2");
  FragmentScope fs(s, RuleId::Product);
  size_t k = as.size();
  int sb = c.width.m + c.width.n;

  Bit d = s.fresh_bit();
  std::vector<Bit> e;
  for (size_t i = 0; i < k; ++i) e.push_back(s.fresh_bit());

  for (size_t i = 0; i < k; ++i) {
    check_widths(as[i], c);
    std::vector<Bit> cl;
    for (int j = 0; j < sb; ++j) cl.push_back(pos(as[i], j));
    cl.push_back(d);
    s.add(cl);
  }
  for (size_t i = 0; i < k; ++i) {
    std::vector<Bit> cl;
    for (int j = 0; j < sb; ++j) cl.push_back(pos(as[i], j));
    cl.push_back(e[i]);
    s.add(cl);
  }
  for (size_t i = 0; i < k; ++i)
    for (int j = 0; j < sb; ++j) s.add_lits({neg(as[i], j), e[i].negated()});
  {
    std::vector<Bit> cl(e);
    cl.push_back(d.negated());
    s.add(cl);
  }
  {
    std::vector<Bit> cl;
    for (int j = 0; j < sb; ++j) cl.push_back(pos(c, j));
    cl.push_back(d);
    s.add(cl);
  }
  for (int j = 0; j < sb; ++j) s.add_lits({d.negated(), neg(c, j)});

  Guard g{d};
  std::vector<FixedPointWord> b(k + 1);
  b[1] = as[0];
  for (size_t i = 2; i <= k; ++i) {
    b[i] = s.fresh_word(c.width);
    emit_multiplier(s, b[i - 1], as[i - 1], b[i], g);
  }
  for (int j = 0; j <= sb; ++j) {
    s.add_lits({d, neg(b[k], j), pos(c, j)});
    s.add_lits({d, pos(b[k], j), neg(c, j)});
  }
  return fs.done();
}

CnfFragment emit_power(EmitSession& s, const FixedPointWord& a, long long k,
                       const FixedPointWord& c, Rounding rounding) {
  check_widths(a, c);
  FragmentScope fs(s, RuleId::Power);
  int sb = a.width.m + a.width.n;
  int m = a.width.m;

  if (k == 0) {
    for (int i = 0; i <= sb; ++i) {
      if (i == m) s.add_lits({pos(c, i)});
      else s.add_lits({neg(c, i)});
    }
    return fs.done();
  }
  if (k == 1) {
    for (int i = 0; i <= sb; ++i) s.add_lits({neg(a, i), pos(c, i)});
    for (int i = 0; i <= sb; ++i) s.add_lits({pos(a, i), neg(c, i)});
    return fs.done();
  }
  FixedPointWord one = encode_constant(s.reg(), Rat(1), a.width, rounding);
  if (k == -1) {
    emit_product(s, {a, c}, one);
    return fs.done();
  }
  long long ak = k < 0 ? -k : k;
  FixedPointWord d1 = s.fresh_word(a.width);
  emit_power(s, a, ak / 2, d1, rounding);
  FixedPointWord d2 = s.fresh_word(a.width);
  emit_product(s, {d1, d1}, d2);
  FixedPointWord dp = d2;
  if (ak % 2 == 1) {
    FixedPointWord d3 = s.fresh_word(a.width);
    emit_product(s, {d2, a}, d3);
    dp = d3;
  }
  if (k > 1) {
    for (int i = 0; i <= sb; ++i) s.add_lits({neg(dp, i), pos(c, i)});
    for (int i = 0; i <= sb; ++i) s.add_lits({pos(dp, i), neg(c, i)});
  } else {
    emit_product(s, {dp, c}, one);
  }
  return fs.done();
}

CnfFragment emit_absolute(EmitSession& s, const FixedPointWord& a,
                          const FixedPointWord& c) {
  check_widths(a, c);
  FragmentScope fs(s, RuleId::Absolute);
  int sb = a.width.m + a.width.n;
  s.add_lits({neg(c, sb)});
  for (int i = 0; i < sb; ++i) s.add_lits({neg(a, i), pos(c, i)});
  for (int i = 0; i < sb; ++i) s.add_lits({pos(a, i), neg(c, i)});
  return fs.done();
}

namespace {

// Floor and Ceil share everything except the definition of the copy flag e:
// for Floor, e holds when the value is negative-free of truncation (a >= 0
// or the fraction is zero); for Ceil the mirrored case.
CnfFragment emit_round(EmitSession& s, const FixedPointWord& a,
                       const FixedPointWord& c, bool is_floor) {
  check_widths(a, c);
  FragmentScope fs(s, is_floor ? RuleId::Floor : RuleId::Ceil);
  int m = a.width.m, sb = a.width.m + a.width.n;
  Bit as = pos(a, sb);

  for (int i = 0; i < m; ++i) s.add_lits({neg(c, i)});
  s.add_lits({as.negated(), pos(c, sb)});
  s.add_lits({as, neg(c, sb)});

  Bit d = s.fresh_bit();
  std::vector<Bit> dz;
  for (int i = 0; i < m; ++i) dz.push_back(pos(a, i));
  dz.push_back(d);
  s.add(dz);
  for (int i = 0; i < m; ++i) s.add_lits({neg(a, i), d.negated()});

  Bit e = s.fresh_bit();
  s.add_lits({d.negated(), e});
  if (is_floor) {
    s.add_lits({as, e});
    s.add_lits({d, as.negated(), e.negated()});
  } else {
    s.add_lits({as.negated(), e});
    s.add_lits({d, as, e.negated()});
  }
  for (int i = m; i < sb; ++i) s.add_lits({e.negated(), neg(a, i), pos(c, i)});
  for (int i = m; i < sb; ++i) s.add_lits({e.negated(), pos(a, i), neg(c, i)});

  std::vector<Bit> h;
  for (int i = 0; i <= a.width.n; ++i) h.push_back(s.fresh_bit());
  if (s.variant() == RuleVariant::Published) {
    s.add_lits({h[0].negated()});
  } else {
    // the increment branch needs a carry-in of 1 and must not overflow
    s.add_lits({e, h[0]});
    s.add_lits({e, h[a.width.n].negated()});
  }
  Guard g{e};
  for (int i = m; i < sb; ++i)
    emit_half_adder(s, pos(a, i), h[i - m], pos(c, i), h[i - m + 1], g);
  return fs.done();
}

}  // namespace

CnfFragment emit_floor(EmitSession& s, const FixedPointWord& a,
                       const FixedPointWord& c) {
  return emit_round(s, a, c, true);
}

CnfFragment emit_ceil(EmitSession& s, const FixedPointWord& a,
                      const FixedPointWord& c) {
  return emit_round(s, a, c, false);
}

CnfFragment emit_enumeration_domain(EmitSession& s, const FixedPointWord& a,
                                    const std::vector<FixedPointWord>& bs) {
  if (bs.empty()) throw encode_error("EmptyDomain", "enumeration domain is empty");
  FragmentScope fs(s, RuleId::EnumerationDomain);
  int sb = a.width.m + a.width.n;
  size_t k = bs.size();

  std::vector<std::vector<Bit>> d(k);
  std::vector<Bit> e;
  for (size_t i = 0; i < k; ++i) {
    check_widths(a, bs[i]);
    for (int j = 0; j <= sb; ++j) d[i].push_back(s.fresh_bit());
    e.push_back(s.fresh_bit());
  }
  for (size_t i = 0; i < k; ++i)
    for (int j = 0; j <= sb; ++j) {
      s.add_lits({neg(a, j), neg(bs[i], j), d[i][j]});
      s.add_lits({pos(a, j), pos(bs[i], j), d[i][j]});
      s.add_lits({pos(a, j), neg(bs[i], j), d[i][j].negated()});
      s.add_lits({neg(a, j), pos(bs[i], j), d[i][j].negated()});
    }
  for (size_t i = 0; i < k; ++i) {
    std::vector<Bit> cl;
    for (int j = 0; j <= sb; ++j) cl.push_back(d[i][j].negated());
    cl.push_back(e[i]);
    s.add(cl);
  }
  for (size_t i = 0; i < k; ++i)
    for (int j = 0; j <= sb; ++j) s.add_lits({d[i][j], e[i].negated()});
  s.add(e);
  for (int j = 0; j <= sb; ++j) {
    std::vector<Bit> cl;
    for (size_t i = 0; i < k; ++i) cl.push_back(neg(bs[i], j));
    cl.push_back(pos(a, j));
    s.add(cl);
  }
  for (int j = 0; j <= sb; ++j) {
    std::vector<Bit> cl;
    for (size_t i = 0; i < k; ++i) cl.push_back(pos(bs[i], j));
    cl.push_back(neg(a, j));
    s.add(cl);
  }
  return fs.done();
}

CnfFragment emit_max(EmitSession& s, const std::vector<FixedPointWord>& as,
                     const FixedPointWord& c) {
  FragmentScope fs(s, RuleId::Max);
  for (const auto& a : as) emit_less_equal(s, a, c);
  emit_enumeration_domain(s, c, as);
  return fs.done();
}

CnfFragment emit_min(EmitSession& s, const std::vector<FixedPointWord>& as,
                     const FixedPointWord& c) {
  FragmentScope fs(s, RuleId::Min);
  for (const auto& a : as) emit_less_equal(s, c, a);
  emit_enumeration_domain(s, c, as);
  return fs.done();
}

CnfFragment emit_scale(EmitSession& s, const FixedPointWord& a, const Rat& k,
                       const FixedPointWord& c, Rounding rounding) {
  check_widths(a, c);
  FragmentScope fs(s, RuleId::Scale);
  int m = a.width.m, n = a.width.n, sb = m + n;

  // power-of-two factors admit a pure relabeling; enabled by flag
  if (s.shift_scale && k != 0) {
    Rat mag = rat_abs(k);
    BigInt num = rat_num(mag), den = rat_den(mag);
    int shift = 0;
    bool pow2factor = false;
    if (den == 1 && (num & (num - 1)) == 0) {
      BigInt t = num;
      while (t > 1) { t >>= 1; ++shift; }
      pow2factor = true;
    } else if (num == 1 && (den & (den - 1)) == 0) {
      BigInt t = den;
      while (t > 1) { t >>= 1; --shift; }
      pow2factor = true;
    }
    if (pow2factor) {
      bool flip = k < 0;
      // c_i = a_{i-shift}; out-of-range source bits force zero
      for (int i = 0; i < sb; ++i) {
        int src = i - shift;
        if (src >= 0 && src < sb) {
          s.add_lits({neg(c, i), pos(a, src)});
          s.add_lits({pos(c, i), neg(a, src)});
        } else {
          s.add_lits({neg(c, i)});
        }
      }
      // magnitude bits shifted out of the word must be zero
      for (int src = 0; src < sb; ++src) {
        int dst = src + shift;
        if (dst < 0 || dst >= sb) s.add_lits({neg(a, src)});
      }
      Bit as = pos(a, sb), cs = pos(c, sb);
      if (flip) {
        s.add_lits({as.negated(), cs});
        s.add_lits({as, cs.negated()});
      } else {
        s.add_lits({as, cs.negated()});
        s.add_lits({as.negated(), cs});
      }
      return fs.done();
    }
  }

  FixedPointWord kw;
  try {
    kw = encode_constant(s.reg(), k, a.width, rounding);
  } catch (const Error& e) {
    if (e.kind() == "InexactConstant")
      throw encode_error("ScaleFactorInexact",
                         "scale factor " + rat_to_string(k) +
                             " is not representable at this width");
    throw;
  }
  emit_product(s, {kw, a}, c);
  return fs.done();
}

namespace {

int ceil_log2(const BigInt& v) {
  // smallest t with 2^t >= v, v >= 1
  int t = 0;
  BigInt p = 1;
  while (p < v) { p <<= 1; ++t; }
  return t;
}
int floor_log2(const BigInt& v) {
  int t = -1;
  BigInt p = 1;
  while (p <= v) { p <<= 1; ++t; }
  return t;
}

}  // namespace

CnfFragment emit_integer_domain(EmitSession& s, const FixedPointWord& a,
                                std::optional<BigInt> lo, std::optional<BigInt> hi,
                                Rounding rounding) {
  FragmentScope fs(s, RuleId::IntegerDomain);
  int m = a.width.m, n = a.width.n, sb = m + n;
  BigInt repr_max = pow2(n) - 1;
  BigInt L = lo ? *lo : -repr_max;
  BigInt R = hi ? *hi : repr_max;
  if (L > R) throw encode_error("EmptyDomain", "integer domain is empty");
  if (-L > repr_max || R > repr_max)
    throw encode_error("BoundOverflow", "integer domain bound exceeds the word range");

  for (int i = 0; i < m; ++i) s.add_lits({neg(a, i)});
  if (L > 0) s.add_lits({neg(a, sb)});
  if (R < 0) s.add_lits({pos(a, sb)});
  if (L == 0)
    for (int i = m; i < sb; ++i) s.add_lits({neg(a, sb), neg(a, i)});
  if (R == 0)
    for (int i = m; i < sb; ++i) s.add_lits({pos(a, sb), neg(a, i)});

  BigInt maxLR = std::max(L < 0 ? -L : L, R < 0 ? -R : R);
  for (int i = m; i < sb; ++i)
    if (pow2(i - m) > maxLR) s.add_lits({neg(a, i)});

  auto emit_le = [&](const BigInt& bound, bool bound_on_left) {
    FixedPointWord w = encode_constant(s.reg(), Rat(bound), a.width, rounding);
    if (bound_on_left) emit_less_equal(s, w, a);
    else emit_less_equal(s, a, w);
  };

  if (s.variant() == RuleVariant::Published) {
    BigInt absL = L < 0 ? -L : L, absR = R < 0 ? -R : R;
    BigInt guard_pow = maxLR >= 1 ? pow2(ceil_log2(maxLR)) : BigInt(1);
    BigInt Lm1 = L - 1, Rp1 = R + 1;
    BigInt absLm1 = Lm1 < 0 ? BigInt(-Lm1) : Lm1;
    BigInt absRp1 = Rp1 < 0 ? BigInt(-Rp1) : Rp1;
    if (L != 0 && absL < repr_max && absLm1 != guard_pow) emit_le(L, true);
    if (R != 0 && absR < repr_max && absRp1 != guard_pow) emit_le(R, false);
  } else {
    // sound skip: omit a side only when the magnitude clamp already implies it
    BigInt reach = maxLR >= 1 ? pow2(floor_log2(maxLR) + 1) - 1 : BigInt(0);
    if (reach > repr_max) reach = repr_max;
    if (L > 0 || (L < 0 && -L < reach)) emit_le(L, true);
    if (R < 0 || (R > 0 && R < reach)) emit_le(R, false);
  }
  return fs.done();
}

CnfFragment emit_real_domain(EmitSession& s, const FixedPointWord& a,
                             const RealBounds& b, Rounding rounding) {
  FragmentScope fs(s, RuleId::RealDomain);
  int m = a.width.m, n = a.width.n, sb = m + n;
  BigInt repr_int_max = pow2(n);
  const auto& L1 = b.closed_lo;
  const auto& R1 = b.closed_hi;
  const auto& L2 = b.open_lo;
  const auto& R2 = b.open_hi;

  if ((L1 && *L1 > 0) || (L2 && *L2 >= 0)) s.add_lits({neg(a, sb)});
  if ((R1 && *R1 < 0) || (R2 && *R2 <= 0)) s.add_lits({pos(a, sb)});
  if (L1 && *L1 == 0)
    for (int i = 0; i < sb; ++i) s.add_lits({neg(a, sb), neg(a, i)});
  if (R1 && *R1 == 0)
    for (int i = 0; i < sb; ++i) s.add_lits({pos(a, sb), neg(a, i)});
  if ((L2 && *L2 == 0) || (R2 && *R2 == 0)) {
    std::vector<Bit> nz;
    for (int i = 0; i < sb; ++i) nz.push_back(pos(a, i));
    s.add(nz);
  }

  // effective bound for the magnitude clamp
  std::optional<BigInt> eff_lo, eff_hi;
  if (L1) eff_lo = *L1;
  if (L2 && (!eff_lo || *L2 > *eff_lo)) eff_lo = *L2;
  if (R1) eff_hi = *R1;
  if (R2 && (!eff_hi || *R2 < *eff_hi)) eff_hi = *R2;
  std::optional<BigInt> maxeff;
  if (eff_lo && eff_hi) {
    BigInt alo = *eff_lo < 0 ? -*eff_lo : *eff_lo;
    BigInt ahi = *eff_hi < 0 ? -*eff_hi : *eff_hi;
    maxeff = std::max(alo, ahi);
  }
  if (maxeff)
    for (int i = 0; i < sb; ++i) {
      // weight of bit i is 2^{i-m}: clamp when 2^{i-m} > maxeff
      if (i - m >= 0 && pow2(i - m) > *maxeff) s.add_lits({neg(a, i)});
    }

  auto emit_cmp = [&](const BigInt& bound, bool bound_on_left, bool strict) {
    FixedPointWord w = encode_constant(s.reg(), Rat(bound), a.width, rounding);
    if (strict) {
      if (bound_on_left) emit_less_than(s, w, a);
      else emit_less_than(s, a, w);
    } else {
      if (bound_on_left) emit_less_equal(s, w, a);
      else emit_less_equal(s, a, w);
    }
  };

  if (s.variant() == RuleVariant::Published) {
    BigInt guard_pow = (maxeff && *maxeff >= 1) ? pow2(ceil_log2(*maxeff)) : BigInt(1);
    auto absv = [](const BigInt& v) { return v < 0 ? -v : v; };
    if (L1 && *L1 != 0 && absv(*L1) < repr_int_max) emit_cmp(*L1, true, false);
    if (L2 && *L2 != 0 && absv(*L2) < repr_int_max && absv(*L2) != guard_pow)
      emit_cmp(*L2, true, true);
    if (R1 && *R1 != 0 && absv(*R1) < repr_int_max) emit_cmp(*R1, false, false);
    if (R2 && *R2 != 0 && absv(*R2) < repr_int_max && absv(*R2) != guard_pow)
      emit_cmp(*R2, false, true);
  } else {
    Rat reach = maxeff ? Rat(pow2(floor_log2(std::max(*maxeff, BigInt(1))) + 1)) -
                             pow2_inv(m)
                       : a.width.max_magnitude();
    if (reach > a.width.max_magnitude()) reach = a.width.max_magnitude();
    auto absv = [](const BigInt& v) { return v < 0 ? -v : v; };
    if (L1 && *L1 != 0 && (*L1 > 0 || Rat(absv(*L1)) < reach)) emit_cmp(*L1, true, false);
    if (L2 && (*L2 > 0 || (*L2 < 0 && Rat(absv(*L2)) <= reach))) emit_cmp(*L2, true, true);
    if (R1 && *R1 != 0 && (*R1 < 0 || Rat(absv(*R1)) < reach)) emit_cmp(*R1, false, false);
    if (R2 && (*R2 < 0 || (*R2 > 0 && Rat(absv(*R2)) <= reach))) emit_cmp(*R2, false, true);
  }
  return fs.done();
}

CnfFragment emit_normalization(EmitSession& s, const FixedPointWord& a,
                               const FixedPointWord& c) {
  check_widths(a, c);
  FragmentScope fs(s, RuleId::Normalization);
  FixedPointWord flipped = c;
  flipped.bits.back() = flipped.bits.back().negated();
  emit_complement(s, a, flipped);
  return fs.done();
}

CnfFragment emit_indicator(EmitSession& s, GRel kind, const FixedPointWord& a,
                           const FixedPointWord& b, const FixedPointWord& c) {
  check_widths(a, b);
  FragmentScope fs(s, RuleId::Indicator);
  int m = a.width.m;
  // output word is fixed zero except its 2^0 bit, which carries the flag
  Bit r = c.bits[m];

  auto emit_rel = [&](GRel op, const FixedPointWord& x, const FixedPointWord& y,
                      Bit guard_bit) {
    size_t before = s.clauses().size();
    switch (op) {
      case GRel::Eq: emit_equal(s, x, y); break;
      case GRel::Ne: emit_not_equal(s, x, y); break;
      case GRel::Le: emit_less_equal(s, x, y); break;
      case GRel::Lt: emit_less_than(s, x, y); break;
      default: throw encode_error("UnsupportedNode", "indicator relation");
    }
    if (s.raw()) {
      for (size_t i = before; i < s.clauses().size(); ++i)
        s.clauses()[i].push_back(guard_bit.lit);
    } else {
      // re-add with guard: pull the clauses and extend
      std::vector<Clause> tail(s.clauses().begin() + before, s.clauses().end());
      s.clauses().resize(before);
      for (auto& cl : tail) {
        cl.push_back(guard_bit.lit);
        s.clauses().push_back(std::move(cl));
      }
    }
  };

  // r -> relation holds; ~r -> complement holds
  switch (kind) {
    case GRel::Eq:
      emit_rel(GRel::Eq, a, b, r.negated());
      emit_rel(GRel::Ne, a, b, r);
      break;
    case GRel::Ne:
      emit_rel(GRel::Ne, a, b, r.negated());
      emit_rel(GRel::Eq, a, b, r);
      break;
    case GRel::Le:
      emit_rel(GRel::Le, a, b, r.negated());
      emit_rel(GRel::Lt, b, a, r);
      break;
    case GRel::Lt:
      emit_rel(GRel::Lt, a, b, r.negated());
      emit_rel(GRel::Le, b, a, r);
      break;
    default:
      throw encode_error("UnsupportedNode", "indicator relation");
  }
  return fs.done();
}

}  // namespace opmax
