#pragma once

#include <string>

#include "rm2mp/errors.hpp"
#include "rm2mp/mp_grammar.hpp"

namespace rm2mp {

// Line-oriented MP grammar text format:
//
//   METABOLITES: R1, R2, I1, L1, HALT
//   INITIAL: R1=5, R2=3, I1=1      # unlisted metabolites default to 0
//   RULES:
//   I1 -> L1 : I1
//   -> I2 : max(I1 - R1, 0)        # empty side = nothing
//   R1 -> : I8
//
// Rule syntax: [lhs] -> [rhs] : regulator, multisets as `2 R1 + I3`,
// regulators as `nat | name | expr + expr | max(expr - expr, 0)`.
// '#' comments and blank lines are ignored; the three section headers are
// required, in this order.

// Throws ParseError with a 1-based line number; the result passes
// validate_grammar.
MPGrammar parse_grammar(const std::string& text);

// Canonical text: serialize(parse(serialize(g))) == serialize(g) byte for
// byte. Rule labels are not serialized.
std::string serialize_grammar(const MPGrammar& grammar);

std::string serialize_regulator(const MPGrammar& grammar, const RegulatorExpr& expr);
std::string serialize_multiset(const MPGrammar& grammar, const Multiset& multiset);

}  // namespace rm2mp
