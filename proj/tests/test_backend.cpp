#include <doctest.h>

#include <random>

#include "opmax/solve.hpp"

using namespace opmax;

TEST_CASE("wcnf writer format") {
  MaxSatInstance inst;
  inst.variable_count = 3;
  inst.hard.push_back({1, -2});
  inst.soft.emplace_back(Clause{3}, BigInt(4));
  std::string text = write_wcnf(inst);
  CHECK(text.find("h 1 -2 0\n") != std::string::npos);
  CHECK(text.find("4 3 0\n") != std::string::npos);

  SUBCASE("no soft clauses means only h lines") {
    MaxSatInstance h;
    h.variable_count = 1;
    h.hard.push_back({1});
    std::string t = write_wcnf(h);
    CHECK(t.find("h 1 0\n") != std::string::npos);
    for (const auto& line : {"1 1 0"}) CHECK(t.find(line) == std::string::npos);
  }
  SUBCASE("writer output is byte-identical across runs") {
    CHECK(write_wcnf(inst) == write_wcnf(inst));
  }
  SUBCASE("round-trip through the parser") {
    MaxSatInstance back = parse_wcnf(text);
    CHECK(back.variable_count == 3);
    REQUIRE(back.hard.size() == 1);
    CHECK(back.hard[0] == Clause{1, -2});
    REQUIRE(back.soft.size() == 1);
    CHECK(back.soft[0].first == Clause{3});
    CHECK(back.soft[0].second == 4);
  }
  SUBCASE("legacy header round-trip") {
    std::string legacy = write_wcnf(inst, true);
    CHECK(legacy.rfind("p wcnf 3 2 5", 0) == 0);
    MaxSatInstance back = parse_wcnf(legacy);
    CHECK(back.hard.size() == 1);
    CHECK(back.soft.size() == 1);
  }
}

TEST_CASE("solver output parsing handles both v-line dialects") {
  // recorded transcripts in both styles must decode identically
  std::string binary =
      "c comments pass through\no 5\ns OPTIMUM FOUND\nv 101\n";
  std::string lits = "o 7\no 5\ns OPTIMUM FOUND\nv 1 -2 3 0\n";
  auto r1 = parse_solver_output(binary, 3);
  auto r2 = parse_solver_output(lits, 3);
  REQUIRE(r1.status == SolveStatus::Optimum);
  REQUIRE(r2.status == SolveStatus::Optimum);
  CHECK(r1.cost == 5);
  CHECK(r2.cost == 5);  // last o line wins
  for (int v = 1; v <= 3; ++v) CHECK(r1.assignment[v] == r2.assignment[v]);
  CHECK(r1.assignment[1] == 1);
  CHECK(r1.assignment[2] == 0);
  CHECK(r1.assignment[3] == 1);

  SUBCASE("unsat transcript") {
    auto r = parse_solver_output("s UNSATISFIABLE\n", 3);
    CHECK(r.status == SolveStatus::Unsatisfiable);
  }
  SUBCASE("a cost without a model is not trusted") {
    auto r = parse_solver_output("o 5\ns OPTIMUM FOUND\n", 3);
    CHECK(r.status == SolveStatus::Unknown);
  }
}

TEST_CASE("internal solver basics") {
  SUBCASE("forced assignment") {
    MaxSatInstance inst;
    inst.variable_count = 1;
    inst.hard.push_back({1});
    inst.soft.emplace_back(Clause{-1}, BigInt(5));
    auto r = solve_internal(inst, 10);
    REQUIRE(r.status == SolveStatus::Optimum);
    CHECK(r.cost == 5);
    CHECK(r.assignment[1] == 1);
  }
  SUBCASE("unsatisfiable hard clauses") {
    MaxSatInstance inst;
    inst.variable_count = 1;
    inst.hard.push_back({1});
    inst.hard.push_back({-1});
    auto r = solve_internal(inst, 10);
    CHECK(r.status == SolveStatus::Unsatisfiable);
  }
  SUBCASE("no soft clauses yields optimum zero") {
    MaxSatInstance inst;
    inst.variable_count = 2;
    inst.hard.push_back({1, 2});
    auto r = solve_internal(inst, 10);
    REQUIRE(r.status == SolveStatus::Optimum);
    CHECK(r.cost == 0);
  }
  SUBCASE("non-unit soft clauses are rejected") {
    MaxSatInstance inst;
    inst.variable_count = 2;
    inst.soft.emplace_back(Clause{1, 2}, BigInt(1));
    CHECK_THROWS_AS(solve_internal(inst, 10), Error);
  }
}

TEST_CASE("internal optimum equals exhaustive enumeration on random instances") {
  std::mt19937 rng(424242);
  for (int iter = 0; iter < 120; ++iter) {
    int nv = 3 + rng() % 10;  // <= 12 variables
    MaxSatInstance inst;
    inst.variable_count = nv;
    int nc = rng() % 18;
    for (int c = 0; c < nc; ++c) {
      Clause cl;
      int len = 1 + rng() % 3;
      for (int i = 0; i < len; ++i) {
        int v = 1 + rng() % nv;
        cl.push_back(rng() % 2 ? v : -v);
      }
      inst.hard.push_back(cl);
    }
    int ns = 1 + rng() % nv;
    bool power_weights = rng() % 2;
    for (int s = 0; s < ns; ++s) {
      int v = 1 + rng() % nv;
      BigInt w = power_weights ? pow2(s) : BigInt(1 + rng() % 9);
      inst.soft.emplace_back(Clause{rng() % 2 ? v : -v}, w);
    }
    // exhaustive reference
    BigInt best_cost = -1;
    for (int mask = 0; mask < (1 << nv); ++mask) {
      auto val = [&](int lit) {
        int v = lit > 0 ? lit : -lit;
        bool b = (mask >> (v - 1)) & 1;
        return lit > 0 ? b : !b;
      };
      bool ok = true;
      for (const auto& cl : inst.hard) {
        bool sat = false;
        for (int l : cl) sat |= val(l);
        if (!sat) { ok = false; break; }
      }
      if (!ok) continue;
      BigInt cost = 0;
      for (const auto& [cl, w] : inst.soft)
        if (!val(cl[0])) cost += w;
      if (best_cost < 0 || cost < best_cost) best_cost = cost;
    }
    auto r = solve_internal(inst, 30);
    if (best_cost < 0) {
      CHECK(r.status == SolveStatus::Unsatisfiable);
    } else {
      REQUIRE(r.status == SolveStatus::Optimum);
      CHECK(r.cost == best_cost);
    }
  }
}

TEST_CASE("sat_enumerate") {
  SUBCASE("empty clause set lists every projection") {
    auto rows = sat_enumerate({}, {1, 2});
    CHECK(rows.size() == 4);
  }
  SUBCASE("a unit clause pins its variable") {
    auto rows = sat_enumerate({{1}}, {1});
    REQUIRE(rows.size() == 1);
    CHECK(rows.begin()->at(0) == true);
  }
  SUBCASE("cap is enforced") {
    std::vector<int> interest(30);
    for (int i = 0; i < 30; ++i) interest[i] = i + 1;
    CHECK_THROWS_AS(sat_enumerate({}, interest), Error);
  }
}
