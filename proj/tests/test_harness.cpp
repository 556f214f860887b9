#include <doctest.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "rm2mp/harness.hpp"
#include "rm2mp/mp_engine.hpp"
#include "rm2mp/rng.hpp"
#include "support/fixtures.hpp"

using namespace rm2mp;
using rm2mp::testing::kMaxProgramText;
using rm2mp::testing::kSelfLoopProgramText;

TEST_CASE("compare: max sample is equivalent") {
  Program p = parse_program(kMaxProgramText);
  ComparisonVerdict v = compare(p, std::vector<Nat>{5, 3}, 1000, 2500);
  CHECK(v.outcome == Outcome::kEquivalent);
  REQUIRE(v.rm_final.has_value());
  REQUIRE(v.mp_final.has_value());
  CHECK(*v.rm_final == std::vector<Nat>{2, 0, 1, 0, 3});
  CHECK(*v.mp_final == std::vector<Nat>{2, 0, 1, 0, 3});
  CHECK(v.rm_steps == 22);
  CHECK(v.mp_steps == 32);
}

TEST_CASE("compare: trivial program with empty register file") {
  Program p = parse_program("HALT\n");
  ComparisonVerdict v = compare(p, {}, 10, 25);
  CHECK(v.outcome == Outcome::kEquivalent);
  CHECK(v.rm_final->empty());
  CHECK(v.mp_final->empty());
}

TEST_CASE("compare: non-terminating loop is inconclusive at the bounds") {
  Program p = parse_program(kSelfLoopProgramText);
  ComparisonVerdict v = compare(p, {}, 100, 250);
  CHECK(v.outcome == Outcome::kInconclusive);
  CHECK_FALSE(v.rm_final.has_value());
  CHECK_FALSE(v.mp_final.has_value());
}

TEST_CASE("compare: a stuck grammar against a halting machine is divergent") {
  // Drop the only rule so the MP side is a non-HALT fixed point from step 0.
  Program p = parse_program("HALT\n");
  RmTrace rm = rm_run(p, {}, 10);
  auto [g, map] = translate(p, {});
  g.rules.clear();
  g.regulators.clear();
  MpTrace mp = mp_run(g, {25, HaltMode::kHaltMetabolite, true});
  CHECK_FALSE(mp.halted);
  CHECK(mp.fixed_point);
  ComparisonVerdict v = compare_runs(p, rm, g, map, mp);
  CHECK(v.outcome == Outcome::kDivergent);
}

TEST_CASE("generate_program: length 1 forces the minimal program") {
  GeneratedCase c = generate_program({0, 1, 4, 8});
  CHECK(c.program.instructions == std::vector<Instruction>{Instruction::halt()});
  CHECK(c.program.register_count == 0);
  CHECK(c.initial_registers.empty());
}

TEST_CASE("generate_program: deterministic per seed") {
  for (std::uint64_t seed : {1ull, 42ull, 999ull}) {
    GeneratedCase a = generate_program({seed, 12, 4, 8});
    GeneratedCase b = generate_program({seed, 12, 4, 8});
    CHECK(a.program.instructions == b.program.instructions);
    CHECK(a.initial_registers == b.initial_registers);
  }
}

TEST_CASE("generate_program: output always reparses to the same program") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GeneratedCase c = generate_program({seed, 12, 4, 8});
    Program reparsed = parse_program(serialize_program(c.program));
    REQUIRE(reparsed.instructions == c.program.instructions);
    REQUIRE(reparsed.register_count == c.program.register_count);
    REQUIRE(c.program.instructions.back() == Instruction::halt());
    REQUIRE(c.initial_registers.size() == c.program.register_count);
  }
}

TEST_CASE("run_property_suite: a healthy translator passes") {
  SuiteOptions options;
  options.seed = 100;
  options.count = 60;
  options.max_rm_steps = 2000;
  options.max_mp_steps = 5000;
  SuiteReport report = run_property_suite(options);
  CHECK(report.passed());
  CHECK(report.cases == 60);
  CHECK(report.divergent == 0);
  CHECK(report.equivalent + report.inconclusive + report.divergent == report.cases);
  CHECK(report.equivalent > 0);
}

TEST_CASE("run_property_suite: dropping a JNZ rule is detected") {
  SuiteOptions options;
  options.seed = 100;
  options.count = 200;
  options.max_rm_steps = 2000;
  options.max_mp_steps = 5000;
  options.stop_on_failure = true;
  options.grammar_hook = [](MPGrammar& g, const TranslationMap& map) {
    if (map.comparison_metabolites.empty()) return;
    std::size_t j = map.comparison_metabolites.begin()->first;
    std::string label = "I" + std::to_string(j) + "_jump";
    for (std::size_t m = 0; m < g.rules.size(); ++m) {
      if (g.rules[m].label == label) {
        g.rules.erase(g.rules.begin() + m);
        g.regulators.erase(g.regulators.begin() + m);
        return;
      }
    }
  };
  SuiteReport report = run_property_suite(options);
  CHECK_FALSE(report.passed());
  REQUIRE_FALSE(report.failures.empty());
  CHECK(report.failures[0].seed >= 100);
}

TEST_CASE("mutation: deleting any live rule is detected by input variation") {
  // Every emitted rule of this program fires under some (R1, R2) in 0..8:
  // both JNZ branches are reachable, both INC/DEC paths run, and both HALTs
  // are used. (A program like the max sample would not do: its trailing
  // JNZ(5,1) always jumps, leaving that release/fall pair dynamically dead.)
  Program p = parse_program(
      "JNZ(1, 4)\n"
      "INC(2)\n"
      "HALT\n"
      "DEC(1)\n"
      "JNZ(2, 2)\n"
      "HALT\n");
  auto [reference, map] = translate(p, std::vector<Nat>{0, 0});
  for (std::size_t dropped = 0; dropped < reference.rules.size(); ++dropped) {
    bool detected = false;
    Rng rng(5000 + dropped);
    for (int attempt = 0; attempt < 80 && !detected; ++attempt) {
      std::vector<Nat> init{rng.in_range(0, 8), rng.in_range(0, 8)};
      RmTrace rm = rm_run(p, init, 2000);
      auto [g, m] = translate(p, init);
      g.rules.erase(g.rules.begin() + dropped);
      g.regulators.erase(g.regulators.begin() + dropped);
      MpTrace mp;
      try {
        mp = mp_run(g, {5000, HaltMode::kHaltMetabolite, true});
      } catch (const std::exception&) {
        detected = true;
        break;
      }
      ComparisonVerdict v = compare_runs(p, rm, g, m, mp);
      detected = v.outcome == Outcome::kDivergent ||
                 check_positive_control(g, mp).has_value() ||
                 check_token_invariants(p, g, m, mp).has_value() ||
                 check_register_agreement(p, g, m, rm, mp).has_value() ||
                 (rm.halted && mp.halted &&
                  predicted_mp_halt_step(rm, p) != *mp.halt_step);
    }
    INFO("rule ", dropped, " (", reference.rules[dropped].label, ")");
    CHECK(detected);
  }
}

TEST_CASE("compare: raising the mp bound never flips equivalent to divergent") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GeneratedCase c = generate_program({seed, 10, 3, 6});
    ComparisonVerdict v1 = compare(c.program, c.initial_registers, 2000, 5000);
    if (v1.outcome != Outcome::kEquivalent) continue;
    ComparisonVerdict v2 = compare(c.program, c.initial_registers, 2000, 10000);
    REQUIRE(v2.outcome == Outcome::kEquivalent);
  }
}

TEST_CASE("compare: equivalent verdicts always carry equal finals") {
  for (std::uint64_t seed = 200; seed < 240; ++seed) {
    GeneratedCase c = generate_program({seed, 12, 4, 8});
    ComparisonVerdict v = compare(c.program, c.initial_registers, 2000, 5000);
    if (v.outcome == Outcome::kEquivalent) {
      REQUIRE(v.rm_final.has_value());
      REQUIRE(v.mp_final.has_value());
      REQUIRE(*v.rm_final == *v.mp_final);
    }
    if (v.outcome == Outcome::kInconclusive) {
      REQUIRE((!v.rm_halted || !v.mp_halted));
    }
  }
}

TEST_CASE("suite report: text and json renderings") {
  SuiteOptions options;
  options.seed = 7;
  options.count = 5;
  options.max_rm_steps = 500;
  options.max_mp_steps = 1250;
  SuiteReport report = run_property_suite(options);

  std::string text = render_report_text(report);
  CHECK(text.find("cases: 5\n") != std::string::npos);
  CHECK(text.find("failing_seeds:") != std::string::npos);

  nlohmann::json j = nlohmann::json::parse(render_report_json(report));
  CHECK(j.size() == 5);
  CHECK(j["cases"] == 5);
  CHECK(j["equivalent"].is_number());
  CHECK(j["inconclusive"].is_number());
  CHECK(j["divergent"] == 0);
  CHECK(j["failing_seeds"].is_array());
  CHECK(j["failing_seeds"].empty());
}

TEST_CASE("predicted_mp_halt_step: unit costs plus double-cost taken jumps") {
  Program p = parse_program("JNZ(1, 3)\nHALT\nDEC(1)\nJNZ(1, 1)\nHALT\n");
  // R1=1: jnz taken (2) + dec (1) + jnz not taken (1) + halt (1) = 5.
  RmTrace rm = rm_run(p, std::vector<Nat>{1}, 100);
  REQUIRE(rm.halted);
  CHECK(predicted_mp_halt_step(rm, p) == 5);
  auto [g, map] = translate(p, std::vector<Nat>{1});
  MpTrace mp = mp_run(g, {100, HaltMode::kHaltMetabolite, true});
  REQUIRE(mp.halted);
  CHECK(*mp.halt_step == 5);
}
