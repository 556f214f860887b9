#include "rm2mp/rm_machine.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace rm2mp {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

// One raw operand as written, already trimmed.
std::size_t parse_index(std::size_t line_no, const std::string& token,
                        const char* what) {
  if (token.empty()) {
    throw ParseError(line_no, std::string("missing ") + what);
  }
  if (token[0] == '-') {
    throw ParseError(line_no, std::string(what) + " must be >= 1");
  }
  if (!std::all_of(token.begin(), token.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    throw ParseError(line_no, "malformed integer '" + token + "'");
  }
  unsigned long long value = 0;
  try {
    value = std::stoull(token);
  } catch (const std::out_of_range&) {
    throw ParseError(line_no, std::string(what) + " '" + token + "' is out of range");
  }
  if (value == 0) {
    throw ParseError(line_no, std::string(what) + " must be >= 1");
  }
  return static_cast<std::size_t>(value);
}

struct ParsedLine {
  Instruction instruction;
  std::size_t line_no;
};

ParsedLine parse_instruction(std::size_t line_no, const std::string& text) {
  // Split "MNEMONIC" or "MNEMONIC ( args )".
  auto open = text.find('(');
  std::string mnemonic = upper(trim(open == std::string::npos ? text : text.substr(0, open)));
  std::vector<std::string> args;
  if (open != std::string::npos) {
    auto close = text.find(')', open);
    if (close == std::string::npos) {
      throw ParseError(line_no, "missing ')'");
    }
    if (!trim(text.substr(close + 1)).empty()) {
      throw ParseError(line_no, "unexpected text after instruction");
    }
    std::string inner = text.substr(open + 1, close - open - 1);
    std::stringstream ss(inner);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      args.push_back(trim(piece));
    }
    if (!inner.empty() && inner.back() == ',') {
      args.push_back("");
    }
  }

  auto expect_args = [&](std::size_t n, const char* name) {
    if (args.size() != n || std::any_of(args.begin(), args.end(),
                                        [](const std::string& a) { return a.empty(); })) {
      throw ParseError(line_no, std::string(name) + " requires " + std::to_string(n) +
                                    " argument" + (n == 1 ? "" : "s"));
    }
  };

  if (mnemonic == "INC") {
    expect_args(1, "INC");
    return {Instruction::inc(parse_index(line_no, args[0], "register index")), line_no};
  }
  if (mnemonic == "DEC") {
    expect_args(1, "DEC");
    return {Instruction::dec(parse_index(line_no, args[0], "register index")), line_no};
  }
  if (mnemonic == "JNZ") {
    expect_args(2, "JNZ");
    return {Instruction::jnz(parse_index(line_no, args[0], "register index"),
                             parse_index(line_no, args[1], "jump target")),
            line_no};
  }
  if (mnemonic == "HALT") {
    if (!args.empty()) {
      throw ParseError(line_no, "HALT takes no arguments");
    }
    return {Instruction::halt(), line_no};
  }
  throw ParseError(line_no, "unknown mnemonic '" + mnemonic + "'");
}

}  // namespace

Program parse_program(const std::string& text) {
  std::vector<ParsedLine> lines;
  std::stringstream ss(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string body = trim(strip_comment(raw));
    if (body.empty()) continue;
    lines.push_back(parse_instruction(line_no, body));
  }
  if (lines.empty()) {
    throw ParseError(0, "empty program");
  }

  Program program;
  program.instructions.reserve(lines.size());
  for (const auto& l : lines) {
    program.instructions.push_back(l.instruction);
    program.register_count = std::max(program.register_count, l.instruction.reg);
  }
  for (const auto& l : lines) {
    if (l.instruction.op == Opcode::Jnz &&
        l.instruction.target > program.length()) {
      throw ParseError(l.line_no, "jump target " + std::to_string(l.instruction.target) +
                                      " exceeds program length " +
                                      std::to_string(program.length()));
    }
  }
  return program;
}

std::string serialize_program(const Program& program) {
  std::string out;
  for (const Instruction& ins : program.instructions) {
    switch (ins.op) {
      case Opcode::Inc:
        out += "INC(" + std::to_string(ins.reg) + ")";
        break;
      case Opcode::Dec:
        out += "DEC(" + std::to_string(ins.reg) + ")";
        break;
      case Opcode::Jnz:
        out += "JNZ(" + std::to_string(ins.reg) + ", " + std::to_string(ins.target) + ")";
        break;
      case Opcode::Halt:
        out += "HALT";
        break;
    }
    out += '\n';
  }
  return out;
}

std::vector<Nat> normalize_initial_registers(const Program& program,
                                             std::span<const Nat> initial) {
  if (initial.size() > program.register_count) {
    throw std::invalid_argument(
        "initial register vector has " + std::to_string(initial.size()) +
        " entries but the program addresses only " +
        std::to_string(program.register_count) + " registers");
  }
  std::vector<Nat> registers(initial.begin(), initial.end());
  registers.resize(program.register_count, 0);
  return registers;
}

namespace {

// pc after a sequential advance; running off the end halts.
std::size_t advance_pc(const Program& program, std::size_t pc) {
  return pc < program.length() ? pc + 1 : kHaltedPc;
}

}  // namespace

RmState rm_step(const Program& program, const RmState& state) {
  if (state.halted()) {
    throw std::logic_error("rm_step called on a halted machine");
  }
  const Instruction& ins = program.instructions[state.pc - 1];
  RmState next = state;
  next.step_count = state.step_count + 1;
  switch (ins.op) {
    case Opcode::Inc:
      next.registers[ins.reg - 1] = nat_add(state.registers[ins.reg - 1], 1);
      next.pc = advance_pc(program, state.pc);
      break;
    case Opcode::Dec:
      next.registers[ins.reg - 1] = monus(state.registers[ins.reg - 1], 1);
      next.pc = advance_pc(program, state.pc);
      break;
    case Opcode::Jnz:
      next.pc = state.registers[ins.reg - 1] > 0 ? ins.target
                                                 : advance_pc(program, state.pc);
      break;
    case Opcode::Halt:
      next.pc = kHaltedPc;
      break;
  }
  return next;
}

RmTrace rm_run(const Program& program, std::span<const Nat> initial_registers,
               std::size_t max_steps) {
  RmTrace trace;
  RmState state;
  state.registers = normalize_initial_registers(program, initial_registers);
  state.pc = 1;
  state.step_count = 0;
  trace.states.push_back(state);

  while (!state.halted() && trace.executed.size() < max_steps) {
    const Instruction& ins = program.instructions[state.pc - 1];
    bool jump_taken = ins.op == Opcode::Jnz && state.registers[ins.reg - 1] > 0;
    trace.executed.push_back({state.pc, jump_taken});
    state = rm_step(program, state);
    trace.states.push_back(state);
  }
  trace.halted = state.halted();
  return trace;
}

}  // namespace rm2mp
