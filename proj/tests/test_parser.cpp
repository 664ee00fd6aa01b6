#include <doctest.h>

#include <random>

#include "opmax/parser.hpp"
#include "opmax/pipeline.hpp"

using namespace opmax;
using namespace opmax::ast;

namespace {

const char* kModelDir = MODELS_DIR;

Model parse_file(const std::string& name) {
  return parse_model_text(read_file(std::string(kModelDir) + "/" + name));
}

}  // namespace

TEST_CASE("minimal model") {
  auto m = parse_model_text(
      "\\begin{align}\\min && x \\\\ s.t. && x \\in \\{0,1\\}\\end{align}");
  CHECK(m.objective.direction == Direction::Minimize);
  CHECK(m.objective.expr.kind == ExprKind::VarRef);
  REQUIRE(m.constraints.size() == 1);
  CHECK(m.constraints[0].relation.ops[0] == RelOp::In);
}

TEST_CASE("knapsack model has one objective and two constraint schemas") {
  auto m = parse_file("mkp.model");
  CHECK(m.objective.direction == Direction::Maximize);
  CHECK(m.constraints.size() == 2);
}

TEST_CASE("routing model parses all constraint schemas including the max form") {
  auto m = parse_file("cvrp.model");
  CHECK(m.constraints.size() == 8);
  // the capacity-ordering constraint carries a max over vehicles
  bool saw_max = false;
  for (const auto& c : m.constraints)
    for (const auto& op : c.relation.operands)
      if (op.kind == ExprKind::MaxOf || print_expr(op).find("\\max") != std::string::npos)
        saw_max = true;
  CHECK(saw_max);
}

TEST_CASE("extended routing model with explicit set definitions") {
  // same model with the index sets written as set-variable constraints
  std::string text = R"(
\begin{align}
\min && \sum_{k=1}^m \sum_{i=1}^n \sum_{j=1}^n d_{i,j} x_{i,j,k} \\
s.t. && x_{i,j,k} \in \{0,1\} && \forall k \in V, i,j \in P \\
&& x_{i,i,k} = 0 && \forall k \in V, i \in P \\
&& \sum_{i=1}^n x_{i,j,k} = \sum_{i=1}^n x_{j,i,k} && \forall j \in P, k \in V \\
&& \sum_{k=1}^m \sum_{i=1}^n x_{i,j,k} = 1 && \forall j \in C \\
&& \sum_{j=2}^n x_{1,j,k} = 1 && \forall k \in V \\
&& \sum_{i=1}^n \sum_{j=2}^n q_j x_{i,j,k} \le Q && \forall k \in V \\
&& u_j - u_i - q_j + Q \ge Q \max_{k=1}^m \{ x_{i,j,k} \} && \forall i,j \in C, i \neq j \\
&& u_i \in \{q_i, \dots, Q\} && \forall i \in C \\
&& V = \{1, \dots, m\} \\
&& C = \{2, \dots, n\} \\
&& P = \{1\} \cup C
\end{align})";
  auto m = parse_model_text(text);
  CHECK(m.constraints.size() == 11);
}

TEST_CASE("round-trip pretty-printing is a fixpoint on every shipped model") {
  for (const char* name :
       {"gcp.model", "tsp.model", "qap.model", "cvrp.model", "tevrp.model",
        "mkp.model", "jsp.model", "osp.model", "sphere.model", "schwefel.model",
        "rosenbrock.model"}) {
    auto m = parse_file(name);
    std::string printed = print_model(m);
    Model reparsed;
    REQUIRE_NOTHROW(reparsed = parse_model_text(printed));
    CHECK_MESSAGE(model_equal(m, reparsed), name);
    CHECK_MESSAGE(print_model(reparsed) == printed, name);
  }
}

TEST_CASE("missing and duplicate objectives") {
  CHECK_THROWS_WITH_AS(
      parse_model_text("\\begin{align}x \\in \\{0,1\\}\\end{align}"),
      doctest::Contains("no objective"), Error);
  try {
    parse_model_text("\\begin{align}\\min && x \\\\ \\max && y\\end{align}");
    FAIL("expected MultipleObjectives");
  } catch (const Error& e) {
    CHECK(e.kind() == "MultipleObjectives");
  }
}

TEST_CASE("chained relations stay chains") {
  auto m = parse_model_text(
      "\\begin{align}\\min && x \\\\ && 0 \\le x \\le 5 \\\\ && x \\in \\mathbb{Z}\\end{align}");
  REQUIRE(m.constraints.size() == 2);
  CHECK(m.constraints[0].relation.operands.size() == 3);
  CHECK(m.constraints[0].relation.ops.size() == 2);
}

TEST_CASE("instance data") {
  auto data = parse_instance_data("m = 5\nn = 20\nd_{1,2} = 3");
  REQUIRE(data.size() == 3);
  CHECK(data[0].lhs.name == "m");
  CHECK(data[2].lhs.args.size() == 2);

  CHECK(parse_instance_data("").empty());
  CHECK(parse_instance_data("% only a comment\n\n").empty());

  try {
    parse_instance_data("n = 3\nn = 4");
    FAIL("expected DuplicateAssignment");
  } catch (const Error& e) {
    CHECK(e.kind() == "DuplicateAssignment");
  }
}

TEST_CASE("decimal literals parse to exact rationals") {
  auto data = parse_instance_data("a = 0.1");
  REQUIRE(data.size() == 1);
  REQUIRE(data[0].rhs.kind == ExprKind::Constant);
  CHECK(data[0].rhs.value == Rat(1, 10));
}

TEST_CASE("parsing is total on fuzzed inputs") {
  // every input yields a model or a diagnostic; no crashes
  std::mt19937 rng(20250810);
  const char* pieces[] = {"x",     "y_1",  "\\sum", "_",    "^",   "{",  "}",
                          "(",     ")",    "+",     "-",    "=",   "\\le", ",",
                          "\\in",  "\\{",  "\\}",   "1",    "0.5", "\\min",
                          "\\max", "&&",   "\\\\",  "\\forall", "|", "\\frac"};
  for (int iter = 0; iter < 500; ++iter) {
    std::string src = "\\begin{align}";
    int len = 1 + rng() % 20;
    for (int i = 0; i < len; ++i) src += std::string(" ") + pieces[rng() % 26];
    src += "\\end{align}";
    try {
      auto m = parse_model_text(src);
      (void)m;
    } catch (const Error&) {
      // a diagnostic is a valid outcome
    }
  }
  CHECK(true);
}
