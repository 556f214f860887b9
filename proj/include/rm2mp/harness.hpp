#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rm2mp/mp_engine.hpp"
#include "rm2mp/mp_grammar.hpp"
#include "rm2mp/rm_machine.hpp"
#include "rm2mp/translator.hpp"

namespace rm2mp {

enum class Outcome { kEquivalent, kDivergent, kInconclusive };

const char* outcome_name(Outcome outcome);

// Final-state comparison per the two criteria: both machines halted, and the
// registers equal their metabolites. Bisimulation is deliberately not
// checked; the step-cost model (predicted_mp_halt_step) is the stronger
// optional check.
struct ComparisonVerdict {
  Outcome outcome = Outcome::kInconclusive;
  std::optional<std::vector<Nat>> rm_final;  // registers, set iff rm halted
  std::optional<std::vector<Nat>> mp_final;  // register metabolites, set iff mp halted
  std::size_t rm_steps = 0;
  std::size_t mp_steps = 0;
  std::string detail;

  // Rendering extras: last-seen register values and run outcomes.
  bool rm_halted = false;
  bool mp_halted = false;
  bool mp_fixed_point = false;  // mp stuck in a non-halting fixed point
  std::vector<Nat> rm_last;
  std::vector<Nat> mp_last;
};

// Values of the register metabolites R1..Rn, in register order.
std::vector<Nat> register_metabolite_values(const MPGrammar& grammar,
                                            const TranslationMap& map,
                                            const MpState& state);

// Verdict from already-computed runs (the building block the suite uses).
ComparisonVerdict compare_runs(const Program& program, const RmTrace& rm_trace,
                               const MPGrammar& grammar, const TranslationMap& map,
                               const MpTrace& mp_trace);

// Runs the interpreter and translate+mp_run, then renders the verdict.
// EQUIVALENT iff both halt within their bounds with equal register values;
// DIVERGENT iff both halt and differ, or one side halted while the other is
// provably stuck (a non-halting fixed point); INCONCLUSIVE otherwise.
ComparisonVerdict compare(const Program& program,
                          std::span<const Nat> initial_registers,
                          std::size_t max_rm_steps, std::size_t max_mp_steps);

// ---- trace audits for translated grammars ----------------------------------

// No metabolite below zero (structural) and, per step, total consumption per
// metabolite <= its value, recomputed from the recorded fluxes.
std::optional<std::string> check_positive_control(const MPGrammar& grammar,
                                                  const MpTrace& trace);

// Pointer-token discipline on every step: all Ij/Lj/HALT binary;
// HALT + sum(Ij) <= 1; sum(Lj) <= 1; 1 <= HALT + sum(Ij) + sum(Lj) <= 2,
// with 2 only on a JNZ cleanup step (some Lj = 1 alongside its fall-through
// pointer, that Lj consumed next step); HALT + sum(Ij) = 1 whenever all
// Lj = 0.
std::optional<std::string> check_token_invariants(const Program& program,
                                                  const MPGrammar& grammar,
                                                  const TranslationMap& map,
                                                  const MpTrace& trace);

// At every MP state with all Lj = 0 the register metabolites must equal the
// interpreter's register file at the matching point of execution. The
// matching RM state is found in trace order; RM states entered through a
// not-taken JNZ are the only ones the MP dynamics never exposes, and the
// only ones allowed to be skipped.
std::optional<std::string> check_register_agreement(const Program& program,
                                                    const MPGrammar& grammar,
                                                    const TranslationMap& map,
                                                    const RmTrace& rm_trace,
                                                    const MpTrace& mp_trace);

// Step-cost model: the MP halt step of a correct translation equals the sum
// over executed instructions of cost(instr), with INC/DEC/HALT = 1,
// JNZ taken = 2, JNZ not taken = 1.
Nat predicted_mp_halt_step(const RmTrace& rm_trace, const Program& program);

// ---- random program generation ---------------------------------------------

struct ProgramGenerator {
  std::uint64_t seed = 0;
  std::size_t max_length = 12;
  std::size_t max_registers = 4;
  Nat max_initial_value = 8;
};

struct GeneratedCase {
  Program program;
  std::vector<Nat> initial_registers;
};

// Deterministic per seed: length uniform in 1..max_length, uniform opcodes
// at positions 1..n-1 (JNZ targets uniform in 1..n, registers uniform in
// 1..max_registers), forced HALT at position n, initial register values
// uniform in 0..max_initial_value.
GeneratedCase generate_program(const ProgramGenerator& gen);

// ---- property suite ---------------------------------------------------------

struct SuiteOptions {
  std::uint64_t seed = 1;  // case i uses generator seed `seed + i`
  std::size_t count = 500;
  std::size_t max_length = 12;
  std::size_t max_registers = 4;
  Nat max_initial_value = 8;
  std::size_t max_rm_steps = 10000;
  std::size_t max_mp_steps = 25000;
  bool stop_on_failure = false;
  // Test hook: applied to the translated grammar before execution, used for
  // mutation checks (e.g. dropping a rule). Leave empty for real runs.
  std::function<void(MPGrammar&, const TranslationMap&)> grammar_hook;
};

struct SuiteFailure {
  std::uint64_t seed = 0;
  std::string detail;
};

struct SuiteReport {
  std::size_t cases = 0;
  std::size_t equivalent = 0;
  std::size_t inconclusive = 0;
  std::size_t divergent = 0;
  std::vector<std::uint64_t> failing_seeds;  // ascending
  std::vector<SuiteFailure> failures;

  bool passed() const { return failing_seeds.empty(); }
};

// Differential testing: for `count` generated cases asserts that the verdict
// is never DIVERGENT and that every translated trace satisfies the audits
// above. A failure records the reproducing generator seed.
SuiteReport run_property_suite(const SuiteOptions& options);

std::string render_report_text(const SuiteReport& report);
std::string render_report_json(const SuiteReport& report);

}  // namespace rm2mp
