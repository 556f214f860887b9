#pragma once

#include <optional>
#include <vector>

#include "rm2mp/mp_grammar.hpp"
#include "rm2mp/nat.hpp"
#include "rm2mp/rng.hpp"

namespace rm2mp::testing {

// Sample program: leaves R3=1 when R1 > R2, else R4=1; R5 counts loop passes.
inline const char* kMaxProgramText =
    "JNZ(1, 4)\n"
    "INC(4)\n"
    "HALT\n"
    "JNZ(2, 7)\n"
    "INC(3)\n"
    "HALT\n"
    "INC(5)\n"
    "DEC(1)\n"
    "DEC(2)\n"
    "JNZ(5, 1)\n";

inline const char* kSelfLoopProgramText =
    "INC(1)\n"
    "JNZ(1, 1)\n"
    "HALT\n";

// Random regulator over Const / Var / NatSub nodes, depth-limited.
inline RegulatorExpr random_regulator(Rng& rng, std::size_t metabolite_count,
                                      std::size_t depth) {
  if (depth == 0 || rng.below(3) != 0) {
    if (rng.below(2) == 0) {
      return RegulatorExpr::constant(rng.in_range(0, 5));
    }
    return RegulatorExpr::var(rng.below(metabolite_count));
  }
  return RegulatorExpr::nat_sub(random_regulator(rng, metabolite_count, depth - 1),
                                random_regulator(rng, metabolite_count, depth - 1));
}

// Small random grammar for engine oracle checks: <= max_metabolites
// metabolites, <= max_rules rules with multiplicities 1..3, random
// Const/Var/NatSub regulators, initial values 0..10.
inline MPGrammar random_small_grammar(Rng& rng, std::size_t max_metabolites = 6,
                                      std::size_t max_rules = 6) {
  MPGrammar g;
  std::size_t metabolite_count = 1 + rng.below(max_metabolites);
  for (std::size_t i = 0; i < metabolite_count; ++i) {
    g.metabolites.push_back({"M" + std::to_string(i + 1)});
    g.initial.push_back(rng.in_range(0, 10));
  }
  std::size_t rule_count = 1 + rng.below(max_rules);
  for (std::size_t m = 0; m < rule_count; ++m) {
    Rule rule;
    for (std::size_t k = rng.below(3); k > 0; --k) {
      rule.lhs.add(rng.below(metabolite_count), rng.in_range(1, 3));
    }
    for (std::size_t k = rng.below(3); k > 0; --k) {
      rule.rhs.add(rng.below(metabolite_count), rng.in_range(1, 3));
    }
    if (rule.lhs.empty() && rule.rhs.empty()) {
      rule.rhs.add(rng.below(metabolite_count), 1);
    }
    rule.label = "r" + std::to_string(m + 1);
    g.rules.push_back(std::move(rule));
    g.regulators.push_back(random_regulator(rng, metabolite_count, 2));
  }
  return g;
}

// Independent EMA route: recomputes state + A*U per metabolite with a naive
// double loop over the rules' multisets (no StoichMatrix), accumulating in
// 128-bit. overflow is set when a component leaves the Nat range, in which
// case the engine is expected to refuse the step.
struct NaiveEmaResult {
  bool overflow = false;
  std::vector<Nat> values;
};

inline NaiveEmaResult naive_ema_next(const MPGrammar& g,
                                     const std::vector<Nat>& values,
                                     const std::vector<Nat>& flux) {
  NaiveEmaResult result;
  result.values.assign(values.size(), 0);
  for (std::size_t l = 0; l < values.size(); ++l) {
    __int128 acc = values[l];
    for (std::size_t m = 0; m < g.rules.size(); ++m) {
      __int128 plus = g.rules[m].rhs.count_of(l);
      __int128 minus = g.rules[m].lhs.count_of(l);
      acc += (plus - minus) * static_cast<__int128>(flux[m]);
    }
    if (acc < 0) {
      // Positive control must make this unreachable; surface it loudly.
      result.overflow = true;
      return result;
    }
    if (acc > static_cast<__int128>(~Nat{0})) {
      result.overflow = true;
      return result;
    }
    result.values[l] = static_cast<Nat>(acc);
  }
  return result;
}

}  // namespace rm2mp::testing
