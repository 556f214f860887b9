// Command-line frontend: translate register machine programs into positively
// controlled MP grammars, run either formalism, compare final states, and
// drive the differential-testing suite.
//
// Exit codes: 0 success / EQUIVALENT, 1 DIVERGENT or suite failure,
// 2 bound exhaustion / INCONCLUSIVE, 3 input errors.

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rm2mp/harness.hpp"
#include "rm2mp/mp_engine.hpp"
#include "rm2mp/mp_text.hpp"
#include "rm2mp/rm_machine.hpp"
#include "rm2mp/translator.hpp"

namespace {

using namespace rm2mp;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path);
  }
  out << text;
}

std::vector<Nat> parse_register_list(const std::string& text) {
  std::vector<Nat> values;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    std::size_t b = piece.find_first_not_of(" \t");
    std::size_t e = piece.find_last_not_of(" \t");
    if (b == std::string::npos) {
      throw std::runtime_error("empty register value in '" + text + "'");
    }
    piece = piece.substr(b, e - b + 1);
    for (char c : piece) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw std::runtime_error("register values must be naturals, got '" + piece + "'");
      }
    }
    values.push_back(std::stoull(piece));
  }
  return values;
}

std::string render_vector(const std::vector<Nat>& values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(values[i]);
  }
  return out + ")";
}

std::string render_metabolites(const MPGrammar& grammar, const std::vector<Nat>& values) {
  std::string out;
  for (std::size_t i = 0; i < grammar.metabolites.size(); ++i) {
    if (i > 0) out += ", ";
    out += grammar.metabolites[i].name + "=" + std::to_string(values[i]);
  }
  return out;
}

// --registers for run-mp: reset every R<i> metabolite, then assign the given
// values positionally. Reuses one grammar file across initial register files.
void override_registers(MPGrammar& grammar, const std::vector<Nat>& registers) {
  for (std::size_t i = 0; i < grammar.metabolites.size(); ++i) {
    const std::string& name = grammar.metabolites[i].name;
    if (name.size() < 2 || name[0] != 'R') continue;
    bool digits = true;
    for (std::size_t k = 1; k < name.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(name[k]))) digits = false;
    }
    if (digits) grammar.initial[i] = 0;
  }
  for (std::size_t r = 0; r < registers.size(); ++r) {
    auto index = grammar.index_of("R" + std::to_string(r + 1));
    if (!index) {
      throw std::runtime_error("grammar has no metabolite R" + std::to_string(r + 1) +
                               " to override");
    }
    grammar.initial[*index] = registers[r];
  }
}

int cmd_translate(const std::string& input, const std::vector<Nat>& registers,
                  const std::string& output) {
  Program program = parse_program(read_input(input));
  auto [grammar, map] = translate(program, registers);
  write_output(output, serialize_grammar(grammar));
  return 0;
}

int cmd_run_rm(const std::string& input, const std::vector<Nat>& registers,
               std::size_t max_steps, bool trace) {
  Program program = parse_program(read_input(input));
  RmTrace t = rm_run(program, registers, max_steps);
  std::string out;
  if (trace) {
    for (const RmState& s : t.states) {
      out += std::to_string(s.step_count) + ": pc=" +
             (s.halted() ? std::string("HALTED") : std::to_string(s.pc)) +
             " registers=" + render_vector(s.registers) + "\n";
    }
  }
  out += (t.halted ? "halted step=" : "exhausted step=") + std::to_string(t.steps()) + "\n";
  out += "registers: " + render_vector(t.final_state().registers) + "\n";
  std::cout << out;
  return t.halted ? 0 : 2;
}

int cmd_run_mp(const std::string& input, const std::vector<Nat>& registers,
               bool have_registers, std::size_t max_steps, const std::string& halt_mode,
               bool trace, bool no_flux_history) {
  MPGrammar grammar = parse_grammar(read_input(input));
  if (have_registers) {
    override_registers(grammar, registers);
  }
  MpRunOptions options;
  options.max_steps = max_steps;
  options.halt_mode =
      halt_mode == "fixed-point" ? HaltMode::kFixedPoint : HaltMode::kHaltMetabolite;
  options.record_flux = !no_flux_history;
  MpTrace t = mp_run(grammar, options);

  std::string out;
  if (trace) {
    for (const MpState& s : t.states) {
      out += std::to_string(s.step) + ": " + render_metabolites(grammar, s.values) + "\n";
    }
  }
  if (t.halted) {
    out += "halted step=" + std::to_string(*t.halt_step) + "\n";
  } else if (t.fixed_point) {
    out += "stuck step=" + std::to_string(t.steps()) + " (fixed point, HALT unreached)\n";
  } else {
    out += "exhausted step=" + std::to_string(t.steps()) + "\n";
  }
  out += "metabolites: " + render_metabolites(grammar, t.final_state().values) + "\n";
  std::cout << out;
  return t.halted ? 0 : 2;
}

int cmd_compare(const std::string& input, const std::vector<Nat>& registers,
                std::size_t max_steps, std::size_t max_mp_steps) {
  Program program = parse_program(read_input(input));
  ComparisonVerdict v = compare(program, registers, max_steps, max_mp_steps);
  std::string out;
  out += std::string("rm: ") + (v.rm_halted ? "halted" : "exhausted") +
         " step=" + std::to_string(v.rm_steps) + " registers=" + render_vector(v.rm_last) + "\n";
  out += std::string("mp: ") +
         (v.mp_halted ? "halted" : (v.mp_fixed_point ? "stuck" : "exhausted")) +
         " step=" + std::to_string(v.mp_steps) + " registers=" + render_vector(v.mp_last) + "\n";
  if (v.outcome != Outcome::kEquivalent && !v.detail.empty()) {
    out += "detail: " + v.detail + "\n";
  }
  out += std::string("verdict: ") + outcome_name(v.outcome) + "\n";
  std::cout << out;
  switch (v.outcome) {
    case Outcome::kEquivalent: return 0;
    case Outcome::kDivergent: return 1;
    case Outcome::kInconclusive: return 2;
  }
  return 2;
}

int cmd_suite(const SuiteOptions& options, const std::string& report_path) {
  SuiteReport report = run_property_suite(options);
  std::cout << render_report_text(report);
  if (!report_path.empty()) {
    write_output(report_path, render_report_json(report));
  }
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Register machine / metabolic P grammar toolkit: translate, run, compare."};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string registers_text;
  std::string halt_mode = "halt";
  std::string report_path;
  std::uint64_t max_steps = 100000;
  std::uint64_t max_mp_steps = 0;  // 0: derive as 2.5x max_steps
  bool trace = false;
  bool no_flux_history = false;
  SuiteOptions suite;

  auto add_registers = [&](CLI::App* cmd) {
    return cmd->add_option("--registers", registers_text,
                           "Initial register values a,b,c (1-based order, zero-padded)");
  };

  CLI::App* translate_cmd =
      app.add_subcommand("translate", "Translate a register machine program into an MP grammar");
  translate_cmd->add_option("input", input, "Program file, or - for stdin")->required();
  add_registers(translate_cmd);
  translate_cmd->add_option("-o,--output", output, "Write the grammar here instead of stdout");

  CLI::App* run_rm_cmd = app.add_subcommand("run-rm", "Run a register machine program");
  run_rm_cmd->add_option("input", input, "Program file, or - for stdin")->required();
  add_registers(run_rm_cmd);
  run_rm_cmd->add_option("--max-steps", max_steps, "Execution bound")
      ->check(CLI::PositiveNumber);
  run_rm_cmd->add_flag("--trace", trace, "Print one state per step");

  CLI::App* run_mp_cmd = app.add_subcommand("run-mp", "Run an MP grammar");
  run_mp_cmd->add_option("input", input, "Grammar file, or - for stdin")->required();
  CLI::Option* run_mp_registers = add_registers(run_mp_cmd);
  run_mp_cmd->add_option("--max-steps", max_steps, "Execution bound")
      ->check(CLI::PositiveNumber);
  run_mp_cmd->add_option("--halt-mode", halt_mode, "halt | fixed-point")
      ->check(CLI::IsMember({"halt", "fixed-point"}));
  run_mp_cmd->add_flag("--trace", trace, "Print one state per step");
  run_mp_cmd->add_flag("--no-flux-history", no_flux_history,
                       "Do not retain per-step flux vectors");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Run both machines and compare final states");
  compare_cmd->add_option("input", input, "Program file, or - for stdin")->required();
  add_registers(compare_cmd);
  compare_cmd->add_option("--max-steps", max_steps, "Register machine bound")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--max-mp-steps", max_mp_steps,
                          "MP bound (default 2.5x the register machine bound)")
      ->check(CLI::PositiveNumber);

  CLI::App* suite_cmd =
      app.add_subcommand("suite", "Differential-testing suite over generated programs");
  suite_cmd->add_option("--count", suite.count, "Number of cases")->check(CLI::PositiveNumber);
  suite_cmd->add_option("--seed", suite.seed, "Base generator seed");
  suite_cmd->add_option("--max-length", suite.max_length, "Maximum program length")
      ->check(CLI::PositiveNumber);
  suite_cmd->add_option("--max-registers", suite.max_registers, "Maximum register index")
      ->check(CLI::PositiveNumber);
  suite_cmd->add_option("--max-initial", suite.max_initial_value,
                        "Maximum initial register value")
      ->check(CLI::PositiveNumber);
  suite_cmd->add_option("--max-steps", suite.max_rm_steps, "Register machine bound")
      ->check(CLI::PositiveNumber);
  suite_cmd->add_option("--max-mp-steps", suite.max_mp_steps, "MP bound")
      ->check(CLI::PositiveNumber);
  suite_cmd->add_option("--report", report_path, "Write a JSON summary here");
  suite_cmd->add_flag("--stop-on-failure", suite.stop_on_failure,
                      "Stop at the first failing seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    std::vector<Nat> registers = parse_register_list(registers_text);
    if (app.got_subcommand(translate_cmd)) {
      return cmd_translate(input, registers, output);
    }
    if (app.got_subcommand(run_rm_cmd)) {
      return cmd_run_rm(input, registers, max_steps, trace);
    }
    if (app.got_subcommand(run_mp_cmd)) {
      return cmd_run_mp(input, registers, run_mp_registers->count() > 0, max_steps,
                        halt_mode, trace, no_flux_history);
    }
    if (app.got_subcommand(compare_cmd)) {
      std::size_t mp_bound = max_mp_steps > 0 ? max_mp_steps : max_steps * 5 / 2;
      return cmd_compare(input, registers, max_steps, mp_bound);
    }
    if (app.got_subcommand(suite_cmd)) {
      return cmd_suite(suite, report_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
