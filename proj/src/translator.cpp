#include "rm2mp/translator.hpp"

#include <string>

namespace rm2mp {

RegulatorExpr subtraction_encoding(std::size_t lhs_metabolite,
                                   std::size_t rhs_metabolite) {
  return RegulatorExpr::nat_sub(RegulatorExpr::var(lhs_metabolite),
                                RegulatorExpr::var(rhs_metabolite));
}

std::pair<MPGrammar, TranslationMap> translate(const Program& program,
                                               std::span<const Nat> initial_registers) {
  std::vector<Nat> registers = normalize_initial_registers(program, initial_registers);
  const std::size_t p = program.length();

  MPGrammar grammar;
  TranslationMap map;

  // Metabolites: R1..Rr, I1..Ip, Lj ascending, HALT.
  std::vector<std::size_t> reg_index(program.register_count + 1, 0);
  for (std::size_t i = 1; i <= program.register_count; ++i) {
    reg_index[i] = grammar.metabolites.size();
    std::string name = "R" + std::to_string(i);
    grammar.metabolites.push_back({name});
    map.register_to_metabolite[i] = name;
  }
  std::vector<std::size_t> instr_index(p + 1, 0);
  for (std::size_t j = 1; j <= p; ++j) {
    instr_index[j] = grammar.metabolites.size();
    std::string name = "I" + std::to_string(j);
    grammar.metabolites.push_back({name});
    map.instruction_to_metabolite[j] = name;
  }
  std::vector<std::size_t> cmp_index(p + 1, 0);
  for (std::size_t j = 1; j <= p; ++j) {
    if (program.instructions[j - 1].op == Opcode::Jnz) {
      cmp_index[j] = grammar.metabolites.size();
      std::string name = "L" + std::to_string(j);
      grammar.metabolites.push_back({name});
      map.comparison_metabolites[j] = name;
    }
  }
  const std::size_t halt_index = grammar.metabolites.size();
  grammar.metabolites.push_back({map.halt_metabolite});

  grammar.initial.assign(grammar.metabolites.size(), 0);
  for (std::size_t i = 1; i <= program.register_count; ++i) {
    grammar.initial[reg_index[i]] = registers[i - 1];
  }
  grammar.initial[instr_index[1]] = 1;

  // Pointer receiving the token after instruction j; past the end it is HALT.
  auto next_pointer = [&](std::size_t j) {
    return j < p ? instr_index[j + 1] : halt_index;
  };
  auto add_rule = [&](Multiset lhs, Multiset rhs, RegulatorExpr regulator,
                      std::string label) {
    grammar.rules.push_back({std::move(lhs), std::move(rhs), std::move(label)});
    grammar.regulators.push_back(std::move(regulator));
  };
  auto singleton = [](std::size_t metabolite) {
    Multiset ms;
    ms.add(metabolite, 1);
    return ms;
  };

  for (std::size_t j = 1; j <= p; ++j) {
    const Instruction& ins = program.instructions[j - 1];
    const std::size_t ij = instr_index[j];
    const std::string tag = "I" + std::to_string(j);
    switch (ins.op) {
      case Opcode::Inc:
        add_rule(singleton(ij), singleton(next_pointer(j)),
                 RegulatorExpr::var(ij), tag + "_next");
        add_rule(Multiset{}, singleton(reg_index[ins.reg]),
                 RegulatorExpr::var(ij), tag + "_inc");
        break;
      case Opcode::Dec:
        add_rule(singleton(ij), singleton(next_pointer(j)),
                 RegulatorExpr::var(ij), tag + "_next");
        add_rule(singleton(reg_index[ins.reg]), Multiset{},
                 RegulatorExpr::var(ij), tag + "_dec");
        break;
      case Opcode::Halt:
        add_rule(singleton(ij), singleton(halt_index),
                 RegulatorExpr::var(ij), tag + "_halt");
        break;
      case Opcode::Jnz: {
        const std::size_t lj = cmp_index[j];
        const std::size_t fall = next_pointer(j);
        add_rule(singleton(ij), singleton(lj),
                 RegulatorExpr::var(ij), tag + "_cmp");
        add_rule(singleton(lj), singleton(instr_index[ins.target]),
                 subtraction_encoding(lj, fall), tag + "_jump");
        add_rule(singleton(lj), Multiset{},
                 RegulatorExpr::var(fall), tag + "_release");
        add_rule(Multiset{}, singleton(fall),
                 subtraction_encoding(ij, reg_index[ins.reg]), tag + "_fall");
        break;
      }
    }
  }

  validate_grammar(grammar);
  return {std::move(grammar), std::move(map)};
}

}  // namespace rm2mp
