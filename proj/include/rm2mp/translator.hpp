#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>

#include "rm2mp/mp_grammar.hpp"
#include "rm2mp/rm_machine.hpp"

namespace rm2mp {

// Register <-> metabolite correspondence for a translated program. Names are
// fixed (R<i>, I<j>, L<j>, HALT) so translated grammars are diffable and the
// comparator can locate registers by name; the map is still carried
// explicitly.
struct TranslationMap {
  std::map<std::size_t, std::string> register_to_metabolite;     // reg i -> "Ri"
  std::map<std::size_t, std::string> instruction_to_metabolite;  // j -> "Ij"
  std::map<std::size_t, std::string> comparison_metabolites;     // JNZ j -> "Lj"
  std::string halt_metabolite = "HALT";
};

// Bare differences from the construction (`Lj - Ij+1`, `Ij - Ri`) are
// emitted as explicit natural subtraction max(a - b, 0), so the positive
// control's clamp is structural in the output.
RegulatorExpr subtraction_encoding(std::size_t lhs_metabolite,
                                   std::size_t rhs_metabolite);

// Compiles a register machine program into an equivalent positively
// controlled MP grammar:
//   - one metabolite Ri per register, Ij per instruction, Lj per JNZ, plus
//     HALT (in that order);
//   - initial state: Ri from initial_registers (zero-padded), I1 = 1;
//   - per instruction j, grouped ascending with the token rule first:
//       INC/DEC:  Ij -> Ij+1 : Ij   and   -> Ri : Ij   /   Ri -> : Ij
//       HALT:     Ij -> HALT : Ij
//       JNZ(i,k): Ij -> Lj : Ij
//                 Lj -> Ik : max(Lj - Ij+1, 0)
//                 Lj -> : Ij+1
//                 -> Ij+1 : max(Ij - Ri, 0)
// Where the construction references the pointer past the program end
// (I_{p+1}), the HALT metabolite stands in: running off the end halts.
std::pair<MPGrammar, TranslationMap> translate(const Program& program,
                                               std::span<const Nat> initial_registers);

}  // namespace rm2mp
