#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "rm2mp/harness.hpp"
#include "rm2mp/mp_engine.hpp"
#include "rm2mp/mp_text.hpp"
#include "rm2mp/rng.hpp"
#include "rm2mp/translator.hpp"
#include "support/fixtures.hpp"

using namespace rm2mp;
using rm2mp::testing::kMaxProgramText;
using rm2mp::testing::kSelfLoopProgramText;

TEST_CASE("translate: smallest program") {
  Program p = parse_program("HALT\n");
  auto [g, map] = translate(p, {});
  CHECK(serialize_grammar(g) ==
        "METABOLITES: I1, HALT\n"
        "INITIAL: I1=1\n"
        "RULES:\n"
        "I1 -> HALT : I1\n");
  CHECK(map.instruction_to_metabolite.at(1) == "I1");
  CHECK(map.register_to_metabolite.empty());
  CHECK(map.comparison_metabolites.empty());
}

TEST_CASE("translate: INC then HALT") {
  Program p = parse_program("INC(1)\nHALT\n");
  auto [g, map] = translate(p, {});
  CHECK(serialize_grammar(g) ==
        "METABOLITES: R1, I1, I2, HALT\n"
        "INITIAL: I1=1\n"
        "RULES:\n"
        "I1 -> I2 : I1\n"
        "-> R1 : I1\n"
        "I2 -> HALT : I2\n");
}

TEST_CASE("translate: max sample structure") {
  Program p = parse_program(kMaxProgramText);
  auto [g, map] = translate(p, std::vector<Nat>{5, 3});
  CHECK(g.metabolites.size() == 19);  // 5 registers + 10 instructions + 3 L + HALT
  CHECK(g.rules.size() == 24);        // 3 INC*2 + 2 DEC*2 + 2 HALT + 3 JNZ*4

  // Metabolite order: registers, instruction pointers, comparisons, HALT.
  CHECK(g.metabolites[0].name == "R1");
  CHECK(g.metabolites[5].name == "I1");
  CHECK(g.metabolites[15].name == "L1");
  CHECK(g.metabolites[16].name == "L4");
  CHECK(g.metabolites[17].name == "L10");
  CHECK(g.metabolites[18].name == "HALT");

  // Initial state: registers plus I1 = 1.
  CHECK(g.initial[*g.index_of("R1")] == 5);
  CHECK(g.initial[*g.index_of("R2")] == 3);
  CHECK(g.initial[*g.index_of("I1")] == 1);
  CHECK(g.initial[*g.index_of("HALT")] == 0);

  // The four rules of the first JNZ, token rule first.
  std::string text = serialize_grammar(g);
  CHECK(text.find("I1 -> L1 : I1\n"
                  "L1 -> I4 : max(L1 - I2, 0)\n"
                  "L1 -> : I2\n"
                  "-> I2 : max(I1 - R1, 0)\n") != std::string::npos);
  CHECK(map.comparison_metabolites ==
        std::map<std::size_t, std::string>{{1, "L1"}, {4, "L4"}, {10, "L10"}});
}

TEST_CASE("translate: a trailing JNZ falls through to HALT") {
  Program p = parse_program("JNZ(1, 1)\n");
  auto [g, map] = translate(p, std::vector<Nat>{0});
  CHECK(serialize_grammar(g) ==
        "METABOLITES: R1, I1, L1, HALT\n"
        "INITIAL: I1=1\n"
        "RULES:\n"
        "I1 -> L1 : I1\n"
        "L1 -> I1 : max(L1 - HALT, 0)\n"
        "L1 -> : HALT\n"
        "-> HALT : max(I1 - R1, 0)\n");
}

TEST_CASE("subtraction_encoding: explicit natural subtraction") {
  RegulatorExpr e = subtraction_encoding(3, 5);
  REQUIRE(e.kind() == RegulatorExpr::Kind::NatSub);
  CHECK(e.lhs().metabolite() == 3);
  CHECK(e.rhs().metabolite() == 5);

  RegulatorExpr same = subtraction_encoding(2, 2);
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    std::vector<Nat> state{rng.below(100), rng.below(100), rng.below(100)};
    CHECK(same.evaluate(state) == 0);
  }
}

TEST_CASE("translate: structure counts hold for random programs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GeneratedCase c = generate_program({seed, 12, 4, 8});
    auto [g, map] = translate(c.program, c.initial_registers);
    std::size_t inc = 0, dec = 0, halt = 0, jnz = 0;
    for (const Instruction& ins : c.program.instructions) {
      switch (ins.op) {
        case Opcode::Inc: ++inc; break;
        case Opcode::Dec: ++dec; break;
        case Opcode::Halt: ++halt; break;
        case Opcode::Jnz: ++jnz; break;
      }
    }
    REQUIRE(g.metabolites.size() ==
            c.program.register_count + c.program.length() + jnz + 1);
    REQUIRE(g.rules.size() == 2 * inc + 2 * dec + halt + 4 * jnz);

    // Names are collectively distinct and the map is injective.
    std::set<std::string> names;
    for (const auto& [reg, name] : map.register_to_metabolite) names.insert(name);
    for (const auto& [j, name] : map.instruction_to_metabolite) names.insert(name);
    for (const auto& [j, name] : map.comparison_metabolites) names.insert(name);
    names.insert(map.halt_metabolite);
    REQUIRE(names.size() == map.register_to_metabolite.size() +
                                map.instruction_to_metabolite.size() +
                                map.comparison_metabolites.size() + 1);
    REQUIRE(names.size() == g.metabolites.size());
  }
}

TEST_CASE("translated max sample: first step moves the token into L1") {
  Program p = parse_program(kMaxProgramText);
  auto [g, map] = translate(p, std::vector<Nat>{5, 3});
  StoichMatrix a = build_stoich_matrix(g);
  MpState s{g.initial, 0};
  MpState next = ema_step(g, a, s);
  CHECK(next.values[*g.index_of("I1")] == 0);
  CHECK(next.values[*g.index_of("L1")] == 1);
  for (std::size_t r = 1; r <= 5; ++r) {
    std::string name = "R" + std::to_string(r);
    CHECK(next.values[*g.index_of(name)] == s.values[*g.index_of(name)]);
  }
}

TEST_CASE("translated max sample: runs to the reference final state") {
  Program p = parse_program(kMaxProgramText);
  auto [g, map] = translate(p, std::vector<Nat>{5, 3});
  MpTrace t = mp_run(g, {100000, HaltMode::kHaltMetabolite, true});
  REQUIRE(t.halted);
  CHECK(*t.halt_step == 32);  // 11 unit-cost instructions + 10 taken JNZ * 2 + 1 not-taken JNZ
  CHECK(register_metabolite_values(g, map, t.final_state()) ==
        std::vector<Nat>{2, 0, 1, 0, 3});
  CHECK(t.final_state().values[*g.index_of("HALT")] == 1);

  // Trace audits: positive control, token discipline, register agreement,
  // step-cost model.
  RmTrace rm = rm_run(p, std::vector<Nat>{5, 3}, 100000);
  CHECK_FALSE(check_positive_control(g, t).has_value());
  CHECK_FALSE(check_token_invariants(p, g, map, t).has_value());
  CHECK_FALSE(check_register_agreement(p, g, map, rm, t).has_value());
  CHECK(predicted_mp_halt_step(rm, p) == 32);

  // Halting is a fixed point: 100 forced steps change nothing.
  StoichMatrix a = build_stoich_matrix(g);
  MpState s = t.final_state();
  for (int k = 0; k < 100; ++k) {
    MpState next = ema_step(g, a, s);
    REQUIRE(next.values == s.values);
    s = next;
  }
}

TEST_CASE("translated self-loop never halts") {
  Program p = parse_program(kSelfLoopProgramText);
  auto [g, map] = translate(p, {});
  MpTrace t = mp_run(g, {200, HaltMode::kHaltMetabolite, true});
  CHECK_FALSE(t.halted);
  CHECK_FALSE(t.fixed_point);
  CHECK(t.steps() == 200);
}

TEST_CASE("translate: rejects register vectors longer than the register file") {
  Program p = parse_program("HALT\n");
  CHECK_THROWS_AS(translate(p, std::vector<Nat>{1}), std::invalid_argument);
}

TEST_CASE("translate: dec on a zero register stays zero in the grammar run") {
  Program p = parse_program("DEC(1)\nHALT\n");
  auto [g, map] = translate(p, std::vector<Nat>{0});
  MpTrace t = mp_run(g, {10, HaltMode::kHaltMetabolite, true});
  REQUIRE(t.halted);
  CHECK(register_metabolite_values(g, map, t.final_state()) == std::vector<Nat>{0});
  // The DEC rule's flux was zeroed by the positive control on the first step.
  std::size_t dec_rule = 1;  // I1_next, I1_dec, I2_halt
  CHECK(g.rules[dec_rule].label == "I1_dec");
  CHECK(t.flux_history[0][dec_rule] == 0);
}
