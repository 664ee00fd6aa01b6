#include <doctest.h>

#include "opmax/evaluate.hpp"
#include "opmax/parser.hpp"
#include "opmax/pipeline.hpp"

using namespace opmax;

namespace {
const char* kModelDir = MODELS_DIR;

GroundResult ground_file(const std::string& model, const std::string& inst) {
  auto m = parse_model_text(read_file(std::string(kModelDir) + "/" + model));
  std::vector<ast::Assignment> data;
  if (!inst.empty())
    data = parse_instance_data(read_file(std::string(kModelDir) + "/instances/" + inst));
  return ground_model(m, data);
}

GExpr var(const std::string& name, std::vector<long long> subs = {}) {
  return GExpr::variable(VarKey{name, std::move(subs)});
}
}  // namespace

TEST_CASE("numeric evaluation") {
  ValueMap vals;
  vals[VarKey{"x", {1}}] = Rat(0);
  vals[VarKey{"x", {2}}] = Rat(1);

  GExpr sum;
  sum.kind = GKind::Sum;
  GExpr t1;
  t1.kind = GKind::Scale;
  t1.value = Rat(3);
  t1.kids.push_back(var("x", {1}));
  GExpr t2;
  t2.kind = GKind::Scale;
  t2.value = Rat(4);
  t2.kids.push_back(var("x", {2}));
  sum.kids.push_back(t1);
  sum.kids.push_back(t2);
  CHECK(evaluate_numeric(sum, vals) == Rat(4));

  GExpr fl;
  fl.kind = GKind::Floor;
  fl.kids.push_back(GExpr::constant(Rat(-5, 4)));
  CHECK(evaluate_numeric(fl, vals) == Rat(-2));

  GExpr missing = var("y");
  CHECK_THROWS_AS(evaluate_numeric(missing, vals), Error);
}

TEST_CASE("feasibility of the knapsack optimum") {
  auto g = ground_file("mkp.model", "mknap1-1.inst");
  ValueMap vals;
  std::vector<int> selection = {0, 1, 1, 0, 0, 1};
  for (int i = 0; i < 6; ++i) vals[VarKey{"x", {i + 1}}] = Rat(selection[i]);
  auto rep = check_feasibility(g.model, vals);
  CHECK(rep.feasible);
  CHECK(rep.objective == Rat(3800));
}

TEST_CASE("violations report the offending constraint") {
  auto g = ground_model(
      parse_model_text("\\begin{align}\\max && 3 x_1 + 4 x_2 \\\\ && x_1 + x_2 \\le 1 "
                       "\\\\ && x_i \\in \\{0,1\\} && i = 1,\\dots,2\\end{align}"),
      {});
  ValueMap vals;
  vals[VarKey{"x", {1}}] = Rat(1);
  vals[VarKey{"x", {2}}] = Rat(1);
  auto rep = check_feasibility(g.model, vals);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.objective == Rat(7));
  bool found = false;
  for (const auto& v : rep.verdicts)
    if (!v.satisfied && !v.text.empty()) found = true;
  CHECK(found);
}

TEST_CASE("empty constraint list is feasible") {
  GroundModel m;
  m.objective = GExpr::constant(Rat(0));
  auto rep = check_feasibility(m, {});
  CHECK(rep.feasible);
}

TEST_CASE("brute force optimum") {
  SUBCASE("tiny knapsack") {
    auto g = ground_model(
        parse_model_text("\\begin{align}\\max && 3 x_1 + 4 x_2 \\\\ && x_1 + x_2 \\le 1 "
                         "\\\\ && x_i \\in \\{0,1\\} && i = 1,\\dots,2\\end{align}"),
        {});
    auto r = brute_force_optimum(g.model, BitWidth{4, 0});
    REQUIRE(r.feasible);
    CHECK(r.objective == Rat(4));
    CHECK(r.optimizer.at(VarKey{"x", {1}}) == Rat(0));
    CHECK(r.optimizer.at(VarKey{"x", {2}}) == Rat(1));
  }
  SUBCASE("triangle coloring needs three colors") {
    std::string data = "n = 3\nc_{1,2} = 1\nc_{1,3} = 1\nc_{2,3} = 1\n";
    auto m = parse_model_text(read_file(std::string(kModelDir) + "/gcp.model"));
    auto g = ground_model(m, parse_instance_data(data));
    auto r = brute_force_optimum(g.model, BitWidth{4, 0});
    REQUIRE(r.feasible);
    CHECK(r.objective == Rat(3));
  }
  SUBCASE("infeasible model") {
    auto g = ground_model(
        parse_model_text(
            "\\begin{align}\\min && x \\\\ && x = 2 \\\\ && x \\in \\{0,1\\}\\end{align}"),
        {});
    auto r = brute_force_optimum(g.model, BitWidth{4, 0});
    CHECK_FALSE(r.feasible);
  }
  SUBCASE("search space cap") {
    auto g = ground_file("qap.model", "esc16f.inst");
    CHECK_THROWS_AS(brute_force_optimum(g.model, BitWidth{4, 0}, 1000), Error);
  }
}

TEST_CASE("decode_solution runs the feasibility gate") {
  auto g = ground_model(
      parse_model_text(
          "\\begin{align}\\min && x \\\\ && x \\in \\{0,1\\}\\end{align}"),
      {});
  BitRegistry reg;
  std::map<VarKey, FixedPointWord> varmap;
  varmap.emplace(VarKey{"x", {}}, reg.alloc_word(BitWidth{2, 1}));
  std::vector<signed char> assignment(reg.var_count() + 1, 0);
  auto [values, rep] = decode_solution(varmap, assignment, g.model);
  CHECK(values.at(VarKey{"x", {}}) == Rat(0));
  CHECK(rep.feasible);
}
