#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rm2mp/nat.hpp"

namespace rm2mp {

// MP grammar G = (M, R, I, Phi): metabolites, multiset rewriting rules, an
// initial state vector and one regulator expression per rule. Metabolites
// are referenced by index into the grammar's metabolite list; the text
// format (mp_text.hpp) maps names to indices.

struct Metabolite {
  std::string name;  // unique, [A-Za-z][A-Za-z0-9_]*
  bool operator==(const Metabolite&) const = default;
};

struct MultisetEntry {
  std::size_t metabolite = 0;
  Nat count = 1;  // >= 1; zero-multiplicity entries are never stored
  bool operator==(const MultisetEntry&) const = default;
};

struct Multiset {
  std::vector<MultisetEntry> entries;  // sorted by metabolite index

  bool empty() const { return entries.empty(); }
  Nat count_of(std::size_t metabolite) const;
  // Merges into the sorted entry list; count 0 is ignored.
  void add(std::size_t metabolite, Nat count);

  bool operator==(const Multiset&) const = default;
};

struct Rule {
  Multiset lhs;  // consumed
  Multiset rhs;  // produced
  std::string label;  // diagnostics only; not serialized, excluded from equality
};

// Regulator expression over the metabolite state: constants, metabolite
// values, addition, and natural subtraction max(a - b, 0). Evaluation over
// natural states is total and never produces a negative value. Immutable
// after construction; children are shared on copy.
class RegulatorExpr {
 public:
  enum class Kind { Const, Var, Add, NatSub };

  static RegulatorExpr constant(Nat value);
  static RegulatorExpr var(std::size_t metabolite);
  static RegulatorExpr add(RegulatorExpr lhs, RegulatorExpr rhs);
  static RegulatorExpr nat_sub(RegulatorExpr lhs, RegulatorExpr rhs);

  Kind kind() const { return kind_; }
  Nat value() const { return value_; }                 // Const
  std::size_t metabolite() const { return metabolite_; }  // Var
  const RegulatorExpr& lhs() const { return *lhs_; }   // Add / NatSub
  const RegulatorExpr& rhs() const { return *rhs_; }   // Add / NatSub

  Nat evaluate(std::span<const Nat> state) const;

 private:
  RegulatorExpr() = default;

  Kind kind_ = Kind::Const;
  Nat value_ = 0;
  std::size_t metabolite_ = 0;
  std::shared_ptr<const RegulatorExpr> lhs_;
  std::shared_ptr<const RegulatorExpr> rhs_;
};

bool structurally_equal(const RegulatorExpr& a, const RegulatorExpr& b);

struct MPGrammar {
  std::vector<Metabolite> metabolites;
  std::vector<Rule> rules;
  std::vector<Nat> initial;               // aligned with metabolites
  std::vector<RegulatorExpr> regulators;  // aligned with rules

  std::optional<std::size_t> index_of(std::string_view name) const;
};

// Structural equality: metabolites, rules (lhs/rhs), initial state and
// regulators; rule labels are ignored.
bool structurally_equal(const MPGrammar& a, const MPGrammar& b);

// [A-Za-z][A-Za-z0-9_]*
bool valid_metabolite_name(const std::string& name);

// Checks every grammar invariant (name syntax/uniqueness, vector alignment,
// multiset and regulator references in range, no rule with both sides
// empty, multiplicities in the stoichiometry-safe range). Throws
// std::invalid_argument on the first violation.
void validate_grammar(const MPGrammar& grammar);

struct MpState {
  std::vector<Nat> values;  // aligned with grammar metabolites
  std::size_t step = 0;

  bool operator==(const MpState&) const = default;
};

struct MpTrace {
  std::vector<MpState> states;               // states[0] = grammar initial
  std::vector<std::vector<Nat>> flux_history;  // flux_history[i]: states[i] -> states[i+1]
  bool halted = false;
  std::optional<std::size_t> halt_step;
  // True when the run stopped because the state mapped to itself without
  // meeting the halt condition; the dynamics can never leave such a state.
  bool fixed_point = false;

  const MpState& final_state() const { return states.back(); }
  std::size_t steps() const { return states.size() - 1; }
};

}  // namespace rm2mp
