#include "opmax/parser.hpp"

#include <optional>
#include <set>

namespace opmax {

using namespace ast;

namespace {

// Recursive-descent parser with explicit backtracking (save/restore of the
// token index). Digit runs are split on demand where the grammar wants a
// single digit (`one_token`).
class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  // alignment markers are separators only; runs of '&&' / '&' are skipped
  bool accept_alignment() {
    bool any = false;
    while (accept_punct("&&") || accept_punct("&")) any = true;
    return any;
  }

  Model parse_model() {
    expect_cmd("\\begin{align}");
    Model m;
    bool have_objective = false;
    bool expect_more = true;
    while (expect_more) {
      if (peek().is_cmd("\\end{align}")) break;  // tolerate trailing '\\'
      size_t save = pos_;
      std::optional<ObjectiveSpec> obj = try_objective();
      if (obj) {
        if (have_objective)
          throw parse_error("MultipleObjectives", "model declares more than one objective",
                            obj->span);
        m.objective = std::move(*obj);
        have_objective = true;
      } else {
        pos_ = save;
        m.constraints.push_back(parse_constraint());
      }
      expect_more = accept_cmd("\\\\");
    }
    expect_cmd("\\end{align}");
    if (!at_end())
      throw parse_error("SyntaxError", "unexpected input after \\end{align}", peek().span);
    if (!have_objective)
      throw parse_error("MissingObjective", "model has no objective");
    return m;
  }

  std::vector<Assignment> parse_data() {
    std::vector<Assignment> out;
    std::set<std::string> seen;
    for (;;) {
      while (accept_punct("\n")) {}
      if (at_end()) break;
      Assignment a;
      a.span = peek().span;
      a.lhs = parse_variable();
      expect_punct("=");
      a.rhs = parse_numeric_or_set();
      if (!at_end() && !peek().is_punct("\n")) fail("end of line");
      std::string key = print_expr(a.lhs);
      if (!seen.insert(key).second)
        throw parse_error("DuplicateAssignment", "duplicate assignment to '" + key + "'",
                          a.span);
      out.push_back(std::move(a));
    }
    return out;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int vert_depth_ = 0;  // open |...| groups; a '|' closes when depth > 0

  const Token& peek(size_t off = 0) const {
    size_t i = pos_ + off;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool accept_cmd(const std::string& t) {
    if (peek().is_cmd(t)) { advance(); return true; }
    return false;
  }
  bool accept_punct(const std::string& t) {
    if (peek().is_punct(t)) { advance(); return true; }
    return false;
  }
  bool accept_group(const std::string& t) {
    if (peek().is(TokenKind::Grouping, t)) { advance(); return true; }
    return false;
  }
  void expect_cmd(const std::string& t) {
    if (!accept_cmd(t)) fail("'" + t + "'");
  }
  void expect_punct(const std::string& t) {
    if (!accept_punct(t)) fail("'" + t + "'");
  }
  void expect_group(const std::string& t) {
    if (!accept_group(t)) fail("'" + t + "'");
  }
  [[noreturn]] void fail(const std::string& expected) {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw parse_error("SyntaxError", "expected " + expected + ", found " + found, t.span);
  }

  // ---- objective / constraint ---------------------------------------

  std::optional<ObjectiveSpec> try_objective() {
    if (!peek().is_cmd("\\min") && !peek().is_cmd("\\max")) return std::nullopt;
    // \min/\max may also начинать a rexpr inside a constraint; parse and
    // back off if a relational operator follows the expression.
    size_t save = pos_;
    ObjectiveSpec obj;
    obj.span = peek().span;
    obj.direction = peek().is_cmd("\\min") ? Direction::Minimize : Direction::Maximize;
    advance();
    accept_alignment();
    try {
      obj.expr = parse_numeric_expression();
    } catch (const Error&) {
      pos_ = save;
      return std::nullopt;
    }
    if (is_relational_ahead()) {
      pos_ = save;
      return std::nullopt;
    }
    if (accept_alignment()) {
      if (!peek().is_cmd("\\\\") && !peek().is_cmd("\\end{align}"))
        obj.conditions = parse_conditions();
    }
    return obj;
  }

  bool is_relational_ahead() {
    const Token& t = peek();
    return t.is_punct("=") || t.is_punct("<") || t.is_punct(">") ||
           t.is_cmd("\\le") || t.is_cmd("\\leq") || t.is_cmd("\\ge") ||
           t.is_cmd("\\geq") || t.is_cmd("\\neq") || t.is_cmd("\\ne") ||
           t.is_cmd("\\in") || t.is_cmd("\\notin") || t.is_cmd("\\not") ||
           t.is_cmd("\\subset") || t.is_cmd("\\subseteq") || t.is_cmd("\\subsetneq");
  }

  ConstraintSpec parse_constraint() {
    ConstraintSpec c;
    c.span = peek().span;
    // optional 's.t.'
    if (peek().is(TokenKind::Letter, "s") && peek(1).is_punct(".") &&
        peek(2).is(TokenKind::Letter, "t") && peek(3).is_punct(".")) {
      advance(); advance(); advance(); advance();
    }
    accept_alignment();
    c.relation = parse_relation_expression();
    if (accept_alignment()) {
      if (!peek().is_cmd("\\\\") && !peek().is_cmd("\\end{align}"))
        c.conditions = parse_conditions();
    }
    return c;
  }

  // ---- relations ------------------------------------------------------

  std::optional<RelOp> peek_rel_op() {
    const Token& t = peek();
    if (t.is_punct("=")) return RelOp::Eq;
    if (t.is_cmd("\\neq") || t.is_cmd("\\ne")) return RelOp::Ne;
    if (t.is_cmd("\\le") || t.is_cmd("\\leq")) return RelOp::Le;
    if (t.is_punct("<")) return RelOp::Lt;
    if (t.is_cmd("\\ge") || t.is_cmd("\\geq")) return RelOp::Ge;
    if (t.is_punct(">")) return RelOp::Gt;
    if (t.is_cmd("\\in")) return RelOp::In;
    if (t.is_cmd("\\notin")) return RelOp::NotIn;
    if (t.is_cmd("\\not") && peek(1).is_cmd("\\in")) return RelOp::NotIn;
    if (t.is_cmd("\\subset")) return RelOp::Subset;
    if (t.is_cmd("\\subseteq")) return RelOp::SubsetEq;
    if (t.is_cmd("\\subsetneq")) return RelOp::SubsetNeq;
    return std::nullopt;
  }

  RelOp take_rel_op() {
    RelOp op = *peek_rel_op();
    if (peek().is_cmd("\\not")) advance();  // \not\in
    advance();
    return op;
  }

  RelExpr parse_relation_expression() {
    RelExpr r;
    r.span = peek().span;
    r.operands.push_back(parse_numeric_or_set());
    if (!peek_rel_op()) fail("a relational operator");
    while (peek_rel_op()) {
      RelOp op = take_rel_op();
      r.ops.push_back(op);
      r.operands.push_back(parse_numeric_or_set());
      if (op == RelOp::Ne || op == RelOp::In || op == RelOp::NotIn ||
          op == RelOp::Subset || op == RelOp::SubsetEq || op == RelOp::SubsetNeq)
        break;  // these do not chain
    }
    validate_chain(r);
    return r;
  }

  void validate_chain(const RelExpr& r) {
    if (r.ops.size() <= 1) return;
    bool all_eq = true, all_le = true, all_ge = true;
    for (RelOp op : r.ops) {
      all_eq &= op == RelOp::Eq;
      all_le &= op == RelOp::Le || op == RelOp::Lt;
      all_ge &= op == RelOp::Ge || op == RelOp::Gt;
    }
    if (!all_eq && !all_le && !all_ge)
      throw parse_error("SyntaxError", "mixed operators in relation chain", r.span);
  }

  // set expressions may appear wherever the leading token is unambiguous;
  // a bare variable parses as numeric and is re-typed during grounding.
  Expr parse_numeric_or_set() {
    if (starts_set_expression()) return parse_set_expression();
    Expr e = parse_numeric_expression();
    // a set operator after a variable means the variable names a set
    if (peek().is_cmd("\\cup") || peek().is_cmd("\\cap") ||
        peek().is_cmd("\\setminus") || peek().is_cmd("\\backslash")) {
      return parse_set_expression_tail(std::move(e));
    }
    return e;
  }

  bool starts_set_expression() {
    const Token& t = peek();
    return t.is_cmd("\\{") || t.is_cmd("\\set") || t.is_cmd("\\emptyset") ||
           t.is_cmd("\\mathbb{R}") || t.is_cmd("\\mathbb{Z}") || t.is_cmd("\\mathbb{N}") ||
           t.is_cmd("\\bigcup") || t.is_cmd("\\bigcap");
  }

  // ---- numeric expressions -------------------------------------------

  Expr parse_numeric_expression() {
    Span sp = peek().span;
    std::vector<Expr> terms;
    bool lead_neg = accept_punct("-");
    Expr first = parse_first_term();
    if (lead_neg) {
      Expr n(ExprKind::Negate);
      n.span = sp;
      n.args.push_back(std::move(first));
      first = std::move(n);
    }
    terms.push_back(std::move(first));
    while (peek().is_punct("+") || peek().is_punct("-")) {
      bool neg = advance().text == "-";
      Expr t = parse_first_term();
      if (neg) {
        Expr n(ExprKind::Negate);
        n.span = t.span;
        n.args.push_back(std::move(t));
        t = std::move(n);
      }
      terms.push_back(std::move(t));
    }
    if (terms.size() == 1) return std::move(terms[0]);
    Expr e(ExprKind::Add);
    e.span = sp;
    e.args = std::move(terms);
    return e;
  }

  Expr parse_first_term() {
    Span sp = peek().span;
    Expr acc = parse_second_term();
    for (;;) {
      if (accept_cmd("\\cdot") || accept_cmd("\\times") || accept_punct("*")) {
        acc = mul(std::move(acc), parse_second_term(), sp);
      } else if (peek().is_punct("/")) {
        advance();
        Expr d(ExprKind::Div);
        d.span = sp;
        d.args.push_back(std::move(acc));
        d.args.push_back(parse_second_term());
        acc = std::move(d);
      } else if (starts_second_term()) {
        acc = mul(std::move(acc), parse_second_term(), sp);  // implicit multiplication
      } else {
        break;
      }
    }
    return acc;
  }

  static Expr mul(Expr a, Expr b, Span sp) {
    if (a.kind == ExprKind::Mul) {
      a.args.push_back(std::move(b));
      return a;
    }
    Expr m(ExprKind::Mul);
    m.span = sp;
    m.args.push_back(std::move(a));
    m.args.push_back(std::move(b));
    return m;
  }

  bool starts_second_term() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Letter:
      case TokenKind::DigitRun:
        return true;
      case TokenKind::Grouping:
        return t.text == "(";
      case TokenKind::Punct:
        return t.text == "|" && vert_depth_ == 0;
      case TokenKind::Command:
        return t.text == "\\frac" || t.text == "\\sum" || t.text == "\\prod" ||
               t.text == "\\max" || t.text == "\\min" || t.text == "\\lfloor" ||
               t.text == "\\lceil" || t.text == "\\mathbb{I}" ||
               t.text == "\\mathcal" || t.text == "\\mathbf" ||
               t.text == "\\boldsymbol" || is_greek(t.text) ||
               (t.text == "\\vert" && vert_depth_ == 0);
      default:
        return false;
    }
  }

  static bool is_greek(const std::string& cmd) {
    static const std::set<std::string> structural = {
        "\\frac", "\\sum", "\\prod", "\\max", "\\min", "\\lfloor", "\\rfloor",
        "\\lceil", "\\rceil", "\\mathbb{I}", "\\mathcal", "\\mathbf",
        "\\boldsymbol", "\\vert", "\\in", "\\notin", "\\not", "\\le", "\\leq",
        "\\ge", "\\geq", "\\neq", "\\ne", "\\cup", "\\cap", "\\setminus",
        "\\backslash", "\\bigcup", "\\bigcap", "\\cdot", "\\times", "\\cdots",
        "\\dots", "\\ldots", "\\set", "\\emptyset", "\\forall", "\\subset",
        "\\subseteq", "\\subsetneq", "\\begin{align}", "\\end{align}", "\\\\",
        "\\mathbb{R}", "\\mathbb{Z}", "\\mathbb{N}", "\\{", "\\}",
    };
    return cmd.size() > 1 && cmd[0] == '\\' && !structural.count(cmd);
  }

  Expr parse_second_term() {
    Span sp = peek().span;

    if (peek().is_cmd("\\frac")) {
      advance();
      Expr d(ExprKind::Div);
      d.span = sp;
      expect_group("{");
      d.args.push_back(parse_numeric_expression());
      expect_group("}");
      if (accept_group("{")) {
        d.args.push_back(parse_numeric_expression());
        expect_group("}");
      } else {
        d.args.push_back(parse_one_token());
      }
      return d;
    }

    if (peek().is_cmd("\\sum") || peek().is_cmd("\\prod")) {
      bool is_sum = advance().text == "\\sum";
      Expr e(is_sum ? ExprKind::BigSum : ExprKind::BigProd);
      e.span = sp;
      e.has_binder = true;
      e.binder = parse_subscript_binder(/*allow_upper=*/true);
      e.args.push_back(parse_first_term());
      return e;
    }

    if (peek().is_cmd("\\max") || peek().is_cmd("\\min")) {
      bool is_max = advance().text == "\\max";
      Expr e(is_max ? ExprKind::MaxOf : ExprKind::MinOf);
      e.span = sp;
      if (peek().is_punct("_")) {
        e.has_binder = true;
        e.binder = parse_subscript_binder(/*allow_upper=*/true);
        if (accept_cmd("\\{")) {
          e.args.push_back(parse_numeric_expression());
          expect_cmd("\\}");
        } else {
          expect_cmd("\\set");
          expect_group("{");
          e.args.push_back(parse_numeric_expression());
          expect_group("}");
        }
      } else {
        // \max set_expression : argument list or set value
        Expr s = parse_set_expression();
        e.args.push_back(std::move(s));
      }
      return e;
    }

    Expr base = parse_third_term();
    if (peek().is_punct("^")) {
      advance();
      Expr p(ExprKind::Pow);
      p.span = sp;
      p.args.push_back(std::move(base));
      if (accept_group("{")) {
        p.args.push_back(parse_numeric_expression());
        expect_group("}");
      } else {
        p.args.push_back(parse_one_token());
      }
      return p;
    }
    return base;
  }

  Expr parse_third_term() {
    Span sp = peek().span;
    const Token& t = peek();

    if (t.kind == TokenKind::DigitRun) {
      advance();
      Expr e(ExprKind::Constant);
      e.span = sp;
      e.value = rat_from_decimal(t.text);
      return e;
    }
    if (accept_group("(")) {
      Expr e = parse_numeric_expression();
      expect_group(")");
      return e;
    }
    if ((t.is_punct("|") || t.is_cmd("\\vert")) && vert_depth_ == 0) {
      advance();
      ++vert_depth_;
      Expr inner = starts_set_expression() ? parse_set_expression()
                                           : parse_numeric_expression();
      --vert_depth_;
      if (!accept_punct("|") && !accept_cmd("\\vert")) fail("closing '|'");
      Expr e(ExprKind::AbsOrCard);
      e.span = sp;
      e.args.push_back(std::move(inner));
      return e;
    }
    if (t.is_cmd("\\mathbb{I}")) {
      advance();
      expect_group("(");
      Expr e(ExprKind::Indicator);
      e.span = sp;
      e.rel = std::make_unique<RelExpr>(parse_relation_expression());
      expect_group(")");
      return e;
    }
    if (t.is_cmd("\\lfloor")) {
      advance();
      Expr e(ExprKind::Floor);
      e.span = sp;
      e.args.push_back(parse_numeric_expression());
      expect_cmd("\\rfloor");
      return e;
    }
    if (t.is_cmd("\\lceil")) {
      advance();
      Expr e(ExprKind::Ceil);
      e.span = sp;
      e.args.push_back(parse_numeric_expression());
      expect_cmd("\\rceil");
      return e;
    }
    return parse_variable();
  }

  // one_token = DIGIT | VARIABLE_TERM; splits a digit run when needed so
  // x^12 reads as x^1 * 2.
  Expr parse_one_token() {
    Span sp = peek().span;
    if (peek().kind == TokenKind::DigitRun) {
      Token& t = toks_[pos_];
      Expr e(ExprKind::Constant);
      e.span = sp;
      e.value = Rat(t.text[0] - '0');
      if (t.text.size() > 1 && t.text[1] != '.') {
        t.text.erase(0, 1);
        t.span.column += 1;
      } else if (t.text.size() > 1) {
        fail("a single digit");
      } else {
        advance();
      }
      return e;
    }
    return parse_variable_term();
  }

  Expr parse_variable_term() {
    Span sp = peek().span;
    const Token& t = peek();
    Expr e(ExprKind::VarRef);
    e.span = sp;
    if (t.kind == TokenKind::Letter) {
      e.name = advance().text;
      return e;
    }
    if (t.is_cmd("\\mathcal") || t.is_cmd("\\mathbf") || t.is_cmd("\\boldsymbol")) {
      std::string head = advance().text;
      expect_group("{");
      std::string inner;
      if (peek().kind == TokenKind::Letter) {
        inner = advance().text;
      } else if (peek().kind == TokenKind::Command && is_greek(peek().text) &&
                 head == "\\boldsymbol") {
        inner = advance().text;
      } else {
        fail("a letter");
      }
      expect_group("}");
      e.name = head + "{" + inner + "}";
      return e;
    }
    if (t.kind == TokenKind::Command && is_greek(t.text)) {
      e.name = advance().text;
      return e;
    }
    fail("a variable");
  }

  Expr parse_variable() {
    Expr e = parse_variable_term();
    if (accept_punct("_")) {
      if (accept_group("{")) {
        e.args.push_back(parse_numeric_expression());
        while (accept_punct(",")) e.args.push_back(parse_numeric_expression());
        expect_group("}");
      } else {
        e.args.push_back(parse_one_token());
      }
    }
    return e;
  }

  // _{...}[^bound] after \sum / \prod / \max / \min / \bigcup / \bigcap.
  // Either `var = lo , conditions` with an upper bound, or a bare
  // condition list.
  std::vector<Condition> parse_subscript_binder(bool allow_upper) {
    expect_punct("_");
    expect_group("{");
    size_t save = pos_;
    // Form 1: variable '=' expr [',' conditions] '}' '^' bound
    if (allow_upper) {
      try {
        Condition range;
        range.kind = ConditionKind::RangeBinder;
        range.span = peek().span;
        range.vars.push_back(parse_variable());
        if (accept_punct("=")) {
          range.lo = parse_numeric_expression();
          std::vector<Condition> out;
          std::vector<Condition> extra;
          if (accept_punct(",")) extra = parse_conditions();
          expect_group("}");
          expect_punct("^");
          if (accept_group("{")) {
            range.hi = parse_numeric_expression();
            expect_group("}");
          } else {
            range.hi = parse_one_token();
          }
          out.push_back(std::move(range));
          for (auto& c : extra) out.push_back(std::move(c));
          return out;
        }
      } catch (const Error&) {
        // fall through to condition-list form
      }
      pos_ = save;
    }
    std::vector<Condition> out = parse_conditions();
    expect_group("}");
    return out;
  }

  // ---- conditions ------------------------------------------------------

  std::vector<Condition> parse_conditions() {
    std::vector<Condition> out;
    out.push_back(parse_condition());
    while (peek().is_punct(",")) {
      // lookahead: the comma may belong to an enclosing list
      size_t save = pos_;
      advance();
      try {
        out.push_back(parse_condition());
      } catch (const Error&) {
        pos_ = save;
        break;
      }
    }
    return out;
  }

  Condition parse_condition() {
    Span sp = peek().span;
    size_t save = pos_;

    // Form: vars = a, ..., b
    try {
      Condition c;
      c.kind = ConditionKind::RangeBinder;
      c.span = sp;
      accept_cmd("\\forall");
      c.vars.push_back(parse_variable());
      while (accept_punct(",")) c.vars.push_back(parse_variable());
      if (accept_punct("=")) {
        c.lo = parse_numeric_expression();
        expect_punct(",");
        if (!accept_punct("...") && !accept_cmd("\\dots") && !accept_cmd("\\cdots") &&
            !accept_cmd("\\ldots"))
          fail("'...'");
        expect_punct(",");
        c.hi = parse_numeric_expression();
        return c;
      }
      if (peek().is_cmd("\\in")) {
        advance();
        c.kind = ConditionKind::Membership;
        c.set = parse_numeric_or_set();
        return c;
      }
      if (peek().is_cmd("\\subset") || peek().is_cmd("\\subseteq") ||
          peek().is_cmd("\\subsetneq")) {
        advance();
        c.kind = ConditionKind::SubsetCond;
        c.set = parse_numeric_or_set();
        return c;
      }
      throw parse_error("SyntaxError", "not a binder condition", sp);
    } catch (const Error&) {
      pos_ = save;
    }

    // Form: lo (<|<=) v ... (<|<=) hi  — chained bounds
    try {
      Condition c;
      c.kind = ConditionKind::ChainedBounds;
      c.span = sp;
      c.lo = parse_numeric_expression();
      if (!peek().is_punct("<") && !peek().is_cmd("\\le") && !peek().is_cmd("\\leq"))
        throw parse_error("SyntaxError", "not a bounds condition", sp);
      std::vector<Expr> mids;
      std::vector<bool> strict;
      while (peek().is_punct("<") || peek().is_cmd("\\le") || peek().is_cmd("\\leq")) {
        strict.push_back(advance().text == "<");
        mids.push_back(parse_numeric_expression());
      }
      if (mids.size() < 2)
        throw parse_error("SyntaxError", "not a bounds condition", sp);
      c.hi = std::move(mids.back());
      mids.pop_back();
      for (auto& v : mids) {
        if (v.kind != ExprKind::VarRef)
          throw parse_error("SyntaxError", "bounds condition must bound variables", sp);
        c.vars.push_back(std::move(v));
      }
      c.strict = std::move(strict);
      return c;
    } catch (const Error&) {
      pos_ = save;
    }

    // Fallback: arbitrary relational filter
    Condition c;
    c.kind = ConditionKind::Relation;
    c.span = sp;
    c.relation = parse_relation_expression();
    return c;
  }

  // ---- set expressions -------------------------------------------------

  Expr parse_set_expression() { return parse_set_expression_tail(parse_set_term()); }

  Expr parse_set_expression_tail(Expr first) {
    Expr acc = std::move(first);
    for (;;) {
      SetOp op;
      if (accept_cmd("\\cup")) op = SetOp::Union;
      else if (accept_cmd("\\cap")) op = SetOp::Intersect;
      else if (accept_cmd("\\setminus") || accept_cmd("\\backslash")) op = SetOp::Difference;
      else break;
      Expr rhs = parse_set_term();
      Expr e(ExprKind::SetBinary);
      e.span = acc.span;
      e.set_op = op;
      e.args.push_back(std::move(acc));
      e.args.push_back(std::move(rhs));
      acc = std::move(e);
    }
    return acc;
  }

  Expr parse_set_term() {
    Span sp = peek().span;
    if (accept_group("(")) {
      Expr e = parse_set_expression();
      expect_group(")");
      return e;
    }
    if (peek().is_cmd("\\bigcup") || peek().is_cmd("\\bigcap")) {
      advance();
      Expr e(ExprKind::SetBig);
      e.span = sp;
      e.has_binder = true;
      e.binder = parse_subscript_binder(/*allow_upper=*/true);
      e.args.push_back(parse_set_term());
      return e;
    }
    if (accept_cmd("\\emptyset")) {
      Expr e(ExprKind::EmptySet);
      e.span = sp;
      return e;
    }
    if (peek().is_cmd("\\mathbb{R}") || peek().is_cmd("\\mathbb{Z}") ||
        peek().is_cmd("\\mathbb{N}")) {
      std::string head = advance().text;
      Expr e(ExprKind::SetPredef);
      e.span = sp;
      int sign = 0;
      if (peek().is_punct("^") &&
          (peek(1).is_punct("+") || peek(1).is_punct("-"))) {
        advance();
        sign = advance().text == "+" ? 1 : -1;
      }
      if (head == "\\mathbb{R}")
        e.predef = sign == 0 ? PredefSet::Real : (sign > 0 ? PredefSet::RealPos : PredefSet::RealNeg);
      else if (head == "\\mathbb{Z}")
        e.predef = sign == 0 ? PredefSet::Int : (sign > 0 ? PredefSet::IntPos : PredefSet::IntNeg);
      else
        e.predef = PredefSet::Nat;
      return e;
    }
    bool braces = false;
    if (accept_cmd("\\{")) {
      braces = true;
    } else if (accept_cmd("\\set")) {
      expect_group("{");
    } else if (peek().kind == TokenKind::Letter ||
               peek().is_cmd("\\mathcal") || peek().is_cmd("\\mathbf") ||
               peek().is_cmd("\\boldsymbol") ||
               (peek().kind == TokenKind::Command && is_greek(peek().text))) {
      return parse_variable();
    } else {
      fail("a set expression");
    }
    // literal or range: {a, b, c} / {a, ..., b}
    Expr e(ExprKind::SetLiteral);
    e.span = sp;
    e.args.push_back(parse_numeric_expression());
    if (accept_punct(",")) {
      if (accept_punct("...") || accept_cmd("\\dots") || accept_cmd("\\cdots") ||
          accept_cmd("\\ldots")) {
        expect_punct(",");
        e.kind = ExprKind::SetRange;
        e.args.push_back(parse_numeric_expression());
      } else {
        e.args.push_back(parse_numeric_expression());
        while (accept_punct(",")) e.args.push_back(parse_numeric_expression());
      }
    }
    if (braces) expect_cmd("\\}");
    else expect_group("}");
    return e;
  }

};

}  // namespace

ast::Model parse_model(const std::vector<Token>& tokens) {
  Parser p(tokens);
  return p.parse_model();
}

ast::Model parse_model_text(const std::string& source) {
  return parse_model(tokenize(source));
}

std::vector<ast::Assignment> parse_instance_data(const std::string& source) {
  Parser p(tokenize(source, /*newline_tokens=*/true));
  return p.parse_data();
}

}  // namespace opmax
