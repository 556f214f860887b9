#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rm2mp/errors.hpp"
#include "rm2mp/nat.hpp"

namespace rm2mp {

// The 4-opcode register machine: INC, DEC, JNZ, HALT over a finite set of
// unbounded natural-number registers. Registers and instruction addresses
// are 1-based throughout.

enum class Opcode { Inc, Dec, Jnz, Halt };

struct Instruction {
  Opcode op = Opcode::Halt;
  std::size_t reg = 0;     // Inc/Dec/Jnz; 1-based
  std::size_t target = 0;  // Jnz; 1-based

  static Instruction inc(std::size_t reg) { return {Opcode::Inc, reg, 0}; }
  static Instruction dec(std::size_t reg) { return {Opcode::Dec, reg, 0}; }
  static Instruction jnz(std::size_t reg, std::size_t target) {
    return {Opcode::Jnz, reg, target};
  }
  static Instruction halt() { return {Opcode::Halt, 0, 0}; }

  bool operator==(const Instruction&) const = default;
};

struct Program {
  std::vector<Instruction> instructions;  // non-empty
  std::size_t register_count = 0;         // highest register index referenced

  std::size_t length() const { return instructions.size(); }
};

// pc value marking a stopped machine; 0 is never a valid 1-based address.
inline constexpr std::size_t kHaltedPc = 0;

struct RmState {
  std::vector<Nat> registers;  // one per register, all >= 0
  std::size_t pc = 1;          // 1-based instruction index, or kHaltedPc
  std::size_t step_count = 0;

  bool halted() const { return pc == kHaltedPc; }
  bool operator==(const RmState&) const = default;
};

struct ExecutedRecord {
  std::size_t instruction = 0;  // 1-based index of the executed instruction
  bool jump_taken = false;      // true only for a JNZ whose register was > 0
};

struct RmTrace {
  std::vector<RmState> states;  // states[0] is the initial state (pc = 1)
  std::vector<ExecutedRecord> executed;  // executed[i]: states[i] -> states[i+1]
  bool halted = false;

  std::size_t steps() const { return executed.size(); }
  const RmState& final_state() const { return states.back(); }
};

// Parses the line-oriented register machine text format: one instruction per
// line, case-insensitive mnemonics INC(i) / DEC(i) / JNZ(i, k) / HALT,
// '#' comments, blank lines ignored. Throws ParseError with a 1-based line
// number on the first malformed line; validates JNZ targets against the
// program length.
Program parse_program(const std::string& text);

// Canonical text for a program (uppercase mnemonics, one per line).
std::string serialize_program(const Program& program);

// Pads a register vector with zeros up to program.register_count; a vector
// longer than register_count throws std::invalid_argument.
std::vector<Nat> normalize_initial_registers(const Program& program,
                                             std::span<const Nat> initial);

// Executes exactly one instruction. Precondition: !state.halted().
// Running past the program end halts the machine.
RmState rm_step(const Program& program, const RmState& state);

// Runs from (initial, pc=1) until HALT or max_steps instructions executed;
// records every state and, per executed instruction, whether a jump was
// taken. Non-termination within the bound is reported via halted = false.
RmTrace rm_run(const Program& program, std::span<const Nat> initial_registers,
               std::size_t max_steps);

}  // namespace rm2mp
