#pragma once

#include <map>
#include <string>

#include "opmax/cnf.hpp"
#include "opmax/evaluate.hpp"
#include "opmax/ground.hpp"
#include "opmax/maxsat.hpp"

namespace opmax {

struct EncodeOptions {
  BitWidth width;
  Rounding rounding = Rounding::Reject;
  RuleVariant variant = RuleVariant::Exact;
  bool shift_scale = false;
};

struct ObjectiveEncoding {
  FixedPointWord u;       // root output of the objective tree
  FixedPointWord mu;      // after the optional sign flip
  FixedPointWord mu_hat;  // normalized unsigned word
  std::vector<std::pair<int, BigInt>> soft;  // literal, weight 2^i
};

struct EncodeResult {
  MaxSatInstance instance;
  std::map<VarKey, FixedPointWord> varmap;  // decision variables only
  ObjectiveEncoding objective;
  std::vector<RoundingEvent> rounding_events;
  long long bool_vars = 0;
  long long hard_clauses = 0;
  long long soft_clauses = 0;
};

// Reduces a ground model to a weighted-partial MaxSAT instance: every
// constraint tree post-order through the reduction rules, then the
// objective into unit soft clauses with weights 2^i.
EncodeResult encode_model(const GroundModel& model, const EncodeOptions& opts);

// Varmap sidecar: one line per decision variable, enough to decode a solver
// model offline.
std::string write_varmap(const std::map<VarKey, FixedPointWord>& varmap);
std::map<VarKey, FixedPointWord> parse_varmap(const std::string& text);

}  // namespace opmax
