#include "opmax/encode.hpp"

#include <sstream>

namespace opmax {

namespace {

class Encoder {
 public:
  Encoder(const GroundModel& model, const EncodeOptions& opts)
      : model_(model), opts_(opts), session_(reg_, /*raw=*/false, opts.variant) {
    session_.shift_scale = opts.shift_scale;
  }

  EncodeResult run() {
    for (const auto& c : model_.constraints) encode_constraint(c);
    encode_objective();

    EncodeResult res;
    res.instance.variable_count = reg_.var_count();
    res.instance.hard = session_.clauses();
    for (const auto& [lit, w] : obj_.soft)
      res.instance.soft.emplace_back(Clause{lit}, w);
    res.varmap = reg_.table();
    res.objective = obj_;
    res.rounding_events = reg_.rounding_events;
    res.bool_vars = reg_.var_count();
    res.hard_clauses = (long long)res.instance.hard.size();
    res.soft_clauses = (long long)res.instance.soft.size();
    return res;
  }

 private:
  const GroundModel& model_;
  EncodeOptions opts_;
  BitRegistry reg_;
  EmitSession session_;
  ObjectiveEncoding obj_;

  FixedPointWord var_word(const VarKey& key) {
    auto& q = reg_.table();
    auto it = q.find(key);
    if (it != q.end()) return it->second;
    FixedPointWord w = reg_.alloc_word(opts_.width);
    q.emplace(key, w);
    return w;
  }

  FixedPointWord constant_word(const Rat& v) {
    return encode_constant(reg_, v, opts_.width, opts_.rounding);
  }

  // post-order encoding; constant subtrees fold to constant-bit words
  FixedPointWord encode_expr(const GExpr& e) {
    switch (e.kind) {
      case GKind::Const:
        return constant_word(e.value);
      case GKind::Var:
        return var_word(e.var);
      case GKind::Sum: {
        std::vector<FixedPointWord> kids;
        for (const auto& k : e.kids) kids.push_back(encode_expr(k));
        if (kids.size() == 1) return kids[0];
        FixedPointWord out = reg_.alloc_word(opts_.width);
        emit_sum(session_, kids, out);
        return out;
      }
      case GKind::Product: {
        std::vector<FixedPointWord> kids;
        for (const auto& k : e.kids) kids.push_back(encode_expr(k));
        if (kids.size() == 1) return kids[0];
        FixedPointWord out = reg_.alloc_word(opts_.width);
        emit_product(session_, kids, out);
        return out;
      }
      case GKind::Scale: {
        FixedPointWord kid = encode_expr(e.kids[0]);
        FixedPointWord out = reg_.alloc_word(opts_.width);
        emit_scale(session_, kid, e.value, out, opts_.rounding);
        return out;
      }
      case GKind::Power: {
        FixedPointWord base = encode_expr(e.kids[0]);
        FixedPointWord out = reg_.alloc_word(opts_.width);
        emit_power(session_, base, e.ipow, out, opts_.rounding);
        return out;
      }
      case GKind::Abs: {
        FixedPointWord kid = encode_expr(e.kids[0]);
        FixedPointWord out = reg_.alloc_word(opts_.width);
        emit_absolute(session_, kid, out);
        return out;
      }
      case GKind::Floor:
      case GKind::Ceil: {
        FixedPointWord kid = encode_expr(e.kids[0]);
        FixedPointWord out = reg_.alloc_word(opts_.width);
        if (e.kind == GKind::Floor) emit_floor(session_, kid, out);
        else emit_ceil(session_, kid, out);
        return out;
      }
      case GKind::Max:
      case GKind::Min: {
        std::vector<FixedPointWord> kids;
        for (const auto& k : e.kids) kids.push_back(encode_expr(k));
        if (kids.size() == 1) return kids[0];
        FixedPointWord out = reg_.alloc_word(opts_.width);
        if (e.kind == GKind::Max) emit_max(session_, kids, out);
        else emit_min(session_, kids, out);
        return out;
      }
      case GKind::Indicator: {
        FixedPointWord a = encode_expr(e.kids[0]);
        FixedPointWord b = encode_expr(e.kids[1]);
        FixedPointWord out;
        out.width = opts_.width;
        for (int i = 0; i < opts_.width.total(); ++i)
          out.bits.push_back(Bit::constant(false));
        out.bits[opts_.width.m] = session_.fresh_bit();
        GRel op = e.rel;
        if (op == GRel::Ge) { std::swap(a, b); op = GRel::Le; }
        else if (op == GRel::Gt) { std::swap(a, b); op = GRel::Lt; }
        emit_indicator(session_, op, a, b, out);
        return out;
      }
    }
    throw encode_error("UnsupportedNode", "unknown expression node");
  }

  void encode_constraint(const GroundConstraint& c) {
    if (std::holds_alternative<RelationC>(c)) {
      const auto& r = std::get<RelationC>(c);
      FixedPointWord a = encode_expr(r.lhs);
      FixedPointWord b = encode_expr(r.rhs);
      switch (r.op) {
        case GRel::Eq: emit_equal(session_, a, b); break;
        case GRel::Ne: emit_not_equal(session_, a, b); break;
        case GRel::Le: emit_less_equal(session_, a, b); break;
        case GRel::Lt: emit_less_than(session_, a, b); break;
        case GRel::Ge: emit_less_equal(session_, b, a); break;
        case GRel::Gt: emit_less_than(session_, b, a); break;
      }
      return;
    }
    const auto& d = std::get<DomainC>(c);
    FixedPointWord w = var_word(d.var);
    if (std::holds_alternative<IntegerRange>(d.domain)) {
      const auto& r = std::get<IntegerRange>(d.domain);
      std::optional<BigInt> lo, hi;
      if (r.lo) lo = rat_num(*r.lo);
      if (r.hi) hi = rat_num(*r.hi);
      emit_integer_domain(session_, w, lo, hi, opts_.rounding);
      return;
    }
    if (std::holds_alternative<RealRange>(d.domain)) {
      const auto& r = std::get<RealRange>(d.domain);
      RealBounds b;
      // integer bounds go through the published rule; fractional bounds are
      // asserted directly as comparisons against constant words
      auto place = [&](const std::optional<Rat>& bound, bool is_lo, bool strict) {
        if (!bound) return;
        if (rat_is_int(*bound)) {
          auto& slot = is_lo ? (strict ? b.open_lo : b.closed_lo)
                             : (strict ? b.open_hi : b.closed_hi);
          slot = rat_num(*bound);
          return;
        }
        FixedPointWord cw = constant_word(*bound);
        if (is_lo) {
          if (strict) emit_less_than(session_, cw, w);
          else emit_less_equal(session_, cw, w);
        } else {
          if (strict) emit_less_than(session_, w, cw);
          else emit_less_equal(session_, w, cw);
        }
      };
      place(r.lo, true, r.lo_strict);
      place(r.hi, false, r.hi_strict);
      emit_real_domain(session_, w, b, opts_.rounding);
      return;
    }
    const auto& en = std::get<Enumeration>(d.domain);
    if (en.values.empty())
      throw encode_error("EmptyDomain", "domain of '" + d.var.str() + "' is empty");
    std::vector<FixedPointWord> bs;
    for (const auto& v : en.values) bs.push_back(constant_word(v));
    emit_enumeration_domain(session_, w, bs);
  }

  void encode_objective() {
    obj_.u = encode_expr(model_.objective);
    obj_.mu = obj_.u;
    if (model_.direction == ast::Direction::Minimize)
      obj_.mu.bits.back() = obj_.mu.bits.back().negated();
    obj_.mu_hat = reg_.alloc_word(opts_.width);
    emit_normalization(session_, obj_.mu, obj_.mu_hat);
    int total = opts_.width.total();
    for (int i = 0; i < total; ++i)
      obj_.soft.emplace_back(obj_.mu_hat.bits[i].lit, pow2(i));
  }
};

}  // namespace

EncodeResult encode_model(const GroundModel& model, const EncodeOptions& opts) {
  Encoder enc(model, opts);
  return enc.run();
}

std::string write_varmap(const std::map<VarKey, FixedPointWord>& varmap) {
  std::ostringstream os;
  for (const auto& [key, word] : varmap) {
    os << "var " << key.name << ' ';
    if (key.subs.empty()) {
      os << '-';
    } else {
      for (size_t i = 0; i < key.subs.size(); ++i)
        os << (i ? "," : "") << key.subs[i];
    }
    int m = word.width.m, n = word.width.n;
    os << " sign=" << word.bits[m + n].lit;
    os << " int=";
    for (int i = m + n - 1; i >= m; --i)
      os << word.bits[i].lit << (i > m ? "," : "");
    if (n == 0) os << '-';
    os << " frac=";
    if (m == 0) os << '-';
    for (int i = m - 1; i >= 0; --i) os << word.bits[i].lit << (i > 0 ? "," : "");
    os << '\n';
  }
  return os.str();
}

std::map<VarKey, FixedPointWord> parse_varmap(const std::string& text) {
  std::map<VarKey, FixedPointWord> out;
  std::istringstream is(text);
  std::string line;
  auto split_ids = [](const std::string& spec) {
    std::vector<int> ids;
    if (spec == "-") return ids;
    std::string cur;
    for (char c : spec + ",") {
      if (c == ',') {
        if (!cur.empty()) ids.push_back(std::stoi(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    return ids;
  };
  while (std::getline(is, line)) {
    if (line.empty() || line.rfind("var ", 0) != 0) continue;
    std::istringstream ls(line);
    std::string tag, name, subs, signs, ints, fracs;
    ls >> tag >> name >> subs >> signs >> ints >> fracs;
    VarKey key{name, {}};
    if (subs != "-") {
      std::string cur;
      for (char c : subs + ",") {
        if (c == ',') {
          if (!cur.empty()) key.subs.push_back(std::stoll(cur));
          cur.clear();
        } else {
          cur += c;
        }
      }
    }
    int sign_id = std::stoi(signs.substr(signs.find('=') + 1));
    std::vector<int> int_ids = split_ids(ints.substr(ints.find('=') + 1));
    std::vector<int> frac_ids = split_ids(fracs.substr(fracs.find('=') + 1));
    FixedPointWord w;
    w.width = BitWidth{(int)int_ids.size(), (int)frac_ids.size()};
    for (auto it = frac_ids.rbegin(); it != frac_ids.rend(); ++it)
      w.bits.push_back(Bit::literal(*it));
    for (auto it = int_ids.rbegin(); it != int_ids.rend(); ++it)
      w.bits.push_back(Bit::literal(*it));
    w.bits.push_back(Bit::literal(sign_id));
    out.emplace(std::move(key), std::move(w));
  }
  return out;
}

}  // namespace opmax
