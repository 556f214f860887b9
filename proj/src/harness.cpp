#include "rm2mp/harness.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "rm2mp/rng.hpp"

namespace rm2mp {

const char* outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::kEquivalent: return "EQUIVALENT";
    case Outcome::kDivergent: return "DIVERGENT";
    case Outcome::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

// Metabolite indices of the translation's pointer scheme, resolved once.
struct PointerIndex {
  std::vector<std::size_t> registers;                       // reg 1..n
  std::vector<std::pair<std::size_t, std::size_t>> instr;   // (j, index)
  std::vector<std::pair<std::size_t, std::size_t>> cmp;     // (JNZ j, index)
  std::size_t halt = 0;
  std::size_t program_length = 0;
  std::vector<std::size_t> instr_index_by_j;  // 1-based j -> metabolite index

  // Pointer the token of Lj falls through to: I_{j+1}, or HALT past the end.
  std::size_t fall_pointer(std::size_t j) const {
    return j < program_length ? instr_index_by_j[j + 1] : halt;
  }
};

PointerIndex resolve_pointers(const Program& program, const MPGrammar& grammar,
                              const TranslationMap& map) {
  PointerIndex idx;
  idx.program_length = program.length();
  auto require = [&](const std::string& name) {
    auto i = grammar.index_of(name);
    if (!i) {
      throw std::invalid_argument("translated grammar lacks metabolite '" + name + "'");
    }
    return *i;
  };
  for (const auto& [reg, name] : map.register_to_metabolite) {
    (void)reg;
    idx.registers.push_back(require(name));
  }
  idx.instr_index_by_j.assign(program.length() + 1, 0);
  for (const auto& [j, name] : map.instruction_to_metabolite) {
    std::size_t i = require(name);
    idx.instr.emplace_back(j, i);
    idx.instr_index_by_j[j] = i;
  }
  for (const auto& [j, name] : map.comparison_metabolites) {
    idx.cmp.emplace_back(j, require(name));
  }
  idx.halt = require(map.halt_metabolite);
  return idx;
}

}  // namespace

std::vector<Nat> register_metabolite_values(const MPGrammar& grammar,
                                            const TranslationMap& map,
                                            const MpState& state) {
  std::vector<Nat> values;
  values.reserve(map.register_to_metabolite.size());
  for (const auto& [reg, name] : map.register_to_metabolite) {
    (void)reg;
    auto index = grammar.index_of(name);
    if (!index) {
      throw std::invalid_argument("grammar lacks register metabolite '" + name + "'");
    }
    values.push_back(state.values[*index]);
  }
  return values;
}

ComparisonVerdict compare_runs(const Program& program, const RmTrace& rm_trace,
                               const MPGrammar& grammar, const TranslationMap& map,
                               const MpTrace& mp_trace) {
  ComparisonVerdict v;
  v.rm_halted = rm_trace.halted;
  v.mp_halted = mp_trace.halted;
  v.mp_fixed_point = mp_trace.fixed_point && !mp_trace.halted;
  v.rm_steps = rm_trace.steps();
  v.mp_steps = mp_trace.halted ? *mp_trace.halt_step : mp_trace.steps();
  v.rm_last = rm_trace.final_state().registers;
  v.mp_last = register_metabolite_values(grammar, map, mp_trace.final_state());
  if (v.rm_halted) v.rm_final = v.rm_last;
  if (v.mp_halted) v.mp_final = v.mp_last;

  if (v.rm_halted && v.mp_halted) {
    for (std::size_t i = 0; i < program.register_count; ++i) {
      if (v.rm_last[i] != v.mp_last[i]) {
        v.outcome = Outcome::kDivergent;
        v.detail = "register R" + std::to_string(i + 1) + ": rm=" +
                   std::to_string(v.rm_last[i]) + " mp=" + std::to_string(v.mp_last[i]);
        return v;
      }
    }
    v.outcome = Outcome::kEquivalent;
    v.detail = "both halted with matching register values";
    return v;
  }
  if (v.rm_halted && v.mp_fixed_point) {
    // The MP dynamics can never leave a fixed point, so its verdict cannot
    // change with a larger bound.
    v.outcome = Outcome::kDivergent;
    v.detail = "rm halted but mp is stuck in a fixed point without HALT at step " +
               std::to_string(mp_trace.steps());
    return v;
  }
  v.outcome = Outcome::kInconclusive;
  if (!v.rm_halted && !v.mp_halted) {
    v.detail = "neither machine halted within its bound";
  } else if (!v.rm_halted) {
    v.detail = "rm bound exhausted after " + std::to_string(v.rm_steps) + " steps";
  } else {
    v.detail = "mp bound exhausted after " + std::to_string(mp_trace.steps()) + " steps";
  }
  return v;
}

ComparisonVerdict compare(const Program& program,
                          std::span<const Nat> initial_registers,
                          std::size_t max_rm_steps, std::size_t max_mp_steps) {
  RmTrace rm_trace = rm_run(program, initial_registers, max_rm_steps);
  auto [grammar, map] = translate(program, initial_registers);
  // Final-state comparison never reads the flux history; skip retaining it.
  MpTrace mp_trace =
      mp_run(grammar, {max_mp_steps, HaltMode::kHaltMetabolite, false});
  return compare_runs(program, rm_trace, grammar, map, mp_trace);
}

std::optional<std::string> check_positive_control(const MPGrammar& grammar,
                                                  const MpTrace& trace) {
  for (std::size_t t = 0; t < trace.flux_history.size(); ++t) {
    const std::vector<Nat>& flux = trace.flux_history[t];
    std::vector<__int128> demand(grammar.metabolites.size(), 0);
    for (std::size_t m = 0; m < grammar.rules.size(); ++m) {
      if (flux[m] == 0) continue;
      for (const MultisetEntry& e : grammar.rules[m].lhs.entries) {
        demand[e.metabolite] += static_cast<__int128>(flux[m]) * e.count;
      }
    }
    for (std::size_t l = 0; l < grammar.metabolites.size(); ++l) {
      if (demand[l] > static_cast<__int128>(trace.states[t].values[l])) {
        return "step " + std::to_string(t) + ": consumption of " +
               grammar.metabolites[l].name + " exceeds its value " +
               std::to_string(trace.states[t].values[l]);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_token_invariants(const Program& program,
                                                  const MPGrammar& grammar,
                                                  const TranslationMap& map,
                                                  const MpTrace& trace) {
  PointerIndex idx = resolve_pointers(program, grammar, map);
  for (std::size_t t = 0; t < trace.states.size(); ++t) {
    const std::vector<Nat>& v = trace.states[t].values;
    auto fail = [&](const std::string& what) {
      return "step " + std::to_string(t) + ": " + what;
    };

    Nat instr_sum = 0, cmp_sum = 0;
    for (const auto& [j, i] : idx.instr) {
      if (v[i] > 1) return fail("pointer I" + std::to_string(j) + " = " + std::to_string(v[i]));
      instr_sum = nat_add(instr_sum, v[i]);
    }
    for (const auto& [j, i] : idx.cmp) {
      if (v[i] > 1) return fail("pointer L" + std::to_string(j) + " = " + std::to_string(v[i]));
      cmp_sum = nat_add(cmp_sum, v[i]);
    }
    Nat halt = v[idx.halt];
    if (halt > 1) return fail("HALT = " + std::to_string(halt));

    if (halt + instr_sum > 1) {
      return fail("HALT + sum(Ij) = " + std::to_string(halt + instr_sum));
    }
    if (cmp_sum > 1) return fail("sum(Lj) = " + std::to_string(cmp_sum));
    Nat total = halt + instr_sum + cmp_sum;
    if (total < 1 || total > 2) return fail("token total = " + std::to_string(total));
    if (cmp_sum == 0 && halt + instr_sum != 1) {
      return fail("all Lj = 0 but HALT + sum(Ij) = " + std::to_string(halt + instr_sum));
    }
    if (total == 2) {
      // Cleanup step: the Lj must sit alongside its own fall-through pointer
      // and be consumed by the next step.
      std::size_t active_j = 0;
      for (const auto& [j, i] : idx.cmp) {
        if (v[i] == 1) active_j = j;
      }
      if (active_j == 0) return fail("token total 2 without an active Lj");
      std::size_t fall = idx.fall_pointer(active_j);
      if (v[fall] != 1) {
        return fail("token total 2 but the companion of L" + std::to_string(active_j) +
                    " is not its fall-through pointer");
      }
      if (t + 1 < trace.states.size()) {
        std::size_t lj = 0;
        for (const auto& [j, i] : idx.cmp) {
          if (j == active_j) lj = i;
        }
        if (trace.states[t + 1].values[lj] != 0) {
          return fail("L" + std::to_string(active_j) + " not consumed on the following step");
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_register_agreement(const Program& program,
                                                    const MPGrammar& grammar,
                                                    const TranslationMap& map,
                                                    const RmTrace& rm_trace,
                                                    const MpTrace& mp_trace) {
  PointerIndex idx = resolve_pointers(program, grammar, map);
  std::size_t rm_pos = 0;

  for (std::size_t t = 0; t < mp_trace.states.size(); ++t) {
    const std::vector<Nat>& v = mp_trace.states[t].values;
    bool quiescent = std::all_of(idx.cmp.begin(), idx.cmp.end(),
                                 [&](const auto& c) { return v[c.second] == 0; });
    if (!quiescent) continue;

    // Locate the unique active pointer.
    bool at_halt = v[idx.halt] >= 1;
    std::size_t active_j = 0;
    std::size_t active_count = at_halt ? 1 : 0;
    for (const auto& [j, i] : idx.instr) {
      if (v[i] >= 1) {
        active_j = j;
        ++active_count;
      }
    }
    if (active_count != 1) {
      return "step " + std::to_string(t) + ": expected exactly one active pointer, found " +
             std::to_string(active_count);
    }

    // Find the matching interpreter state. States entered through a
    // not-taken JNZ are the only ones the MP dynamics skips over.
    while (true) {
      if (rm_pos >= rm_trace.states.size()) {
        if (rm_trace.halted) {
          return "step " + std::to_string(t) + ": mp exposes more instruction boundaries "
                 "than the rm trace contains";
        }
        return std::nullopt;  // oracle trace truncated at its bound
      }
      const RmState& rm_state = rm_trace.states[rm_pos];
      bool match = at_halt ? rm_state.halted() : (!rm_state.halted() && rm_state.pc == active_j);
      if (match) break;
      bool skippable = rm_pos >= 1;
      if (skippable) {
        const ExecutedRecord& rec = rm_trace.executed[rm_pos - 1];
        skippable = !rec.jump_taken &&
                    program.instructions[rec.instruction - 1].op == Opcode::Jnz;
      }
      if (!skippable) {
        return "step " + std::to_string(t) + ": mp pointer " +
               (at_halt ? std::string("HALT") : "I" + std::to_string(active_j)) +
               " does not match rm pc " +
               (rm_trace.states[rm_pos].halted() ? std::string("HALTED")
                                                 : std::to_string(rm_trace.states[rm_pos].pc));
      }
      ++rm_pos;
    }

    const std::vector<Nat>& rm_regs = rm_trace.states[rm_pos].registers;
    for (std::size_t r = 0; r < idx.registers.size(); ++r) {
      if (v[idx.registers[r]] != rm_regs[r]) {
        return "step " + std::to_string(t) + ": register R" + std::to_string(r + 1) +
               " = " + std::to_string(v[idx.registers[r]]) + " but rm has " +
               std::to_string(rm_regs[r]);
      }
    }
    ++rm_pos;
  }
  return std::nullopt;
}

Nat predicted_mp_halt_step(const RmTrace& rm_trace, const Program& program) {
  Nat cost = 0;
  for (const ExecutedRecord& rec : rm_trace.executed) {
    bool taken_jump = rec.jump_taken &&
                      program.instructions[rec.instruction - 1].op == Opcode::Jnz;
    cost = nat_add(cost, taken_jump ? 2 : 1);
  }
  return cost;
}

GeneratedCase generate_program(const ProgramGenerator& gen) {
  if (gen.max_length < 1 || gen.max_registers < 1) {
    throw std::invalid_argument("generator bounds must be >= 1");
  }
  Rng rng(gen.seed);
  const std::size_t n = 1 + rng.below(gen.max_length);

  GeneratedCase out;
  out.program.instructions.reserve(n);
  for (std::size_t pos = 1; pos <= n; ++pos) {
    if (pos == n) {
      out.program.instructions.push_back(Instruction::halt());
      continue;
    }
    switch (rng.below(4)) {
      case 0:
        out.program.instructions.push_back(
            Instruction::inc(1 + rng.below(gen.max_registers)));
        break;
      case 1:
        out.program.instructions.push_back(
            Instruction::dec(1 + rng.below(gen.max_registers)));
        break;
      case 2: {
        std::size_t reg = 1 + rng.below(gen.max_registers);
        std::size_t target = 1 + rng.below(n);
        out.program.instructions.push_back(Instruction::jnz(reg, target));
        break;
      }
      default:
        out.program.instructions.push_back(Instruction::halt());
        break;
    }
  }
  for (const Instruction& ins : out.program.instructions) {
    out.program.register_count = std::max(out.program.register_count, ins.reg);
  }
  out.initial_registers.reserve(out.program.register_count);
  for (std::size_t r = 0; r < out.program.register_count; ++r) {
    out.initial_registers.push_back(rng.in_range(0, gen.max_initial_value));
  }
  return out;
}

SuiteReport run_property_suite(const SuiteOptions& options) {
  if (options.count < 1) {
    throw std::invalid_argument("suite count must be >= 1");
  }
  SuiteReport report;
  for (std::size_t i = 0; i < options.count; ++i) {
    const std::uint64_t seed = options.seed + i;
    GeneratedCase test_case = generate_program(
        {seed, options.max_length, options.max_registers, options.max_initial_value});

    std::vector<std::string> problems;
    Outcome outcome = Outcome::kInconclusive;
    try {
      RmTrace rm_trace =
          rm_run(test_case.program, test_case.initial_registers, options.max_rm_steps);
      auto [grammar, map] = translate(test_case.program, test_case.initial_registers);
      if (options.grammar_hook) {
        options.grammar_hook(grammar, map);
      }
      MpTrace mp_trace =
          mp_run(grammar, {options.max_mp_steps, HaltMode::kHaltMetabolite, true});

      ComparisonVerdict verdict =
          compare_runs(test_case.program, rm_trace, grammar, map, mp_trace);
      outcome = verdict.outcome;
      if (verdict.outcome == Outcome::kDivergent) {
        problems.push_back("DIVERGENT: " + verdict.detail);
      }
      if (auto e = check_positive_control(grammar, mp_trace)) {
        problems.push_back("positive control: " + *e);
      }
      if (auto e = check_token_invariants(test_case.program, grammar, map, mp_trace)) {
        problems.push_back("token invariant: " + *e);
      }
      if (auto e = check_register_agreement(test_case.program, grammar, map,
                                            rm_trace, mp_trace)) {
        problems.push_back("register agreement: " + *e);
      }
      if (rm_trace.halted && mp_trace.halted) {
        Nat predicted = predicted_mp_halt_step(rm_trace, test_case.program);
        if (predicted != *mp_trace.halt_step) {
          problems.push_back("step-cost model: predicted halt step " +
                             std::to_string(predicted) + ", observed " +
                             std::to_string(*mp_trace.halt_step));
        }
      }
    } catch (const std::exception& e) {
      problems.push_back(std::string("engine error: ") + e.what());
    }

    ++report.cases;
    switch (outcome) {
      case Outcome::kEquivalent: ++report.equivalent; break;
      case Outcome::kDivergent: ++report.divergent; break;
      case Outcome::kInconclusive: ++report.inconclusive; break;
    }
    if (!problems.empty()) {
      std::string detail = problems[0];
      for (std::size_t k = 1; k < problems.size(); ++k) detail += "; " + problems[k];
      report.failing_seeds.push_back(seed);
      report.failures.push_back({seed, detail});
      if (options.stop_on_failure) break;
    }
  }
  return report;
}

std::string render_report_text(const SuiteReport& report) {
  std::string out;
  out += "cases: " + std::to_string(report.cases) + "\n";
  out += "equivalent: " + std::to_string(report.equivalent) + "\n";
  out += "inconclusive: " + std::to_string(report.inconclusive) + "\n";
  out += "divergent: " + std::to_string(report.divergent) + "\n";
  out += "failing_seeds:";
  if (report.failing_seeds.empty()) {
    out += " (none)\n";
  } else {
    for (std::size_t i = 0; i < report.failing_seeds.size(); ++i) {
      out += (i == 0 ? " " : ", ") + std::to_string(report.failing_seeds[i]);
    }
    out += "\n";
    for (const SuiteFailure& f : report.failures) {
      out += "seed " + std::to_string(f.seed) + ": " + f.detail + "\n";
    }
  }
  return out;
}

std::string render_report_json(const SuiteReport& report) {
  nlohmann::json j;
  j["cases"] = report.cases;
  j["equivalent"] = report.equivalent;
  j["inconclusive"] = report.inconclusive;
  j["divergent"] = report.divergent;
  j["failing_seeds"] = report.failing_seeds;
  return j.dump(2) + "\n";
}

}  // namespace rm2mp
