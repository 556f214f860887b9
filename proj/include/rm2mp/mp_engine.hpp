#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rm2mp/mp_grammar.hpp"

namespace rm2mp {

// |M| x |R| matrix of net multiplicities: entry(l, m) =
// mult+(X_l, r_m) - mult-(X_l, r_m). Row order follows the grammar's
// metabolite order, column order its rule order.
class StoichMatrix {
 public:
  StoichMatrix(std::size_t metabolite_count, std::size_t rule_count)
      : metabolite_count_(metabolite_count),
        rule_count_(rule_count),
        entries_(metabolite_count * rule_count, 0) {}

  std::int64_t at(std::size_t metabolite, std::size_t rule) const {
    return entries_[metabolite * rule_count_ + rule];
  }
  void set(std::size_t metabolite, std::size_t rule, std::int64_t value) {
    entries_[metabolite * rule_count_ + rule] = value;
  }

  std::size_t metabolite_count() const { return metabolite_count_; }
  std::size_t rule_count() const { return rule_count_; }

 private:
  std::size_t metabolite_count_;
  std::size_t rule_count_;
  std::vector<std::int64_t> entries_;
};

StoichMatrix build_stoich_matrix(const MPGrammar& grammar);

// MPPC flux evaluation, one simultaneous pass:
//   1. evaluate every regulator on the current state;
//   2. condition 1 (flux >= 0) holds structurally, since regulators evaluate
//      over the naturals with clamped subtraction;
//   3. condition 2: compute, from the phase-1 values, each metabolite's total
//      demand (sum of flux * lhs multiplicity over consuming rules); every
//      metabolite whose demand exceeds its value gets all of its consuming
//      rules' fluxes zeroed. All demands are read before any zeroing.
std::vector<Nat> evaluate_fluxes(const MPGrammar& grammar, const MpState& state);

// One EMA step: X[i+1] = X[i] + A * U[i] with U = evaluate_fluxes(...).
// Checks that no component goes negative; a violation means the positive
// control is broken and raises std::logic_error.
MpState ema_step(const MPGrammar& grammar, const StoichMatrix& matrix,
                 const MpState& state);

enum class HaltMode {
  kHaltMetabolite,  // stop once the metabolite named HALT reaches 1
  kFixedPoint,      // stop once a step leaves the state unchanged
};

struct MpRunOptions {
  std::size_t max_steps = 100000;
  HaltMode halt_mode = HaltMode::kHaltMetabolite;
  bool record_flux = true;
};

// Iterates ema_step until the halt condition or max_steps, recording every
// state (and each step's flux vector unless disabled). In HALT mode a
// detected fixed point short of the halt condition also stops the run --
// the deterministic dynamics can never leave it -- reported with
// halted = false and fixed_point = true.
MpTrace mp_run(const MPGrammar& grammar, const MpRunOptions& options);

}  // namespace rm2mp
