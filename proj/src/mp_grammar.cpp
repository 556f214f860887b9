#include "rm2mp/mp_grammar.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace rm2mp {

Nat Multiset::count_of(std::size_t metabolite) const {
  for (const MultisetEntry& e : entries) {
    if (e.metabolite == metabolite) return e.count;
    if (e.metabolite > metabolite) break;
  }
  return 0;
}

void Multiset::add(std::size_t metabolite, Nat count) {
  if (count == 0) return;
  auto it = std::lower_bound(entries.begin(), entries.end(), metabolite,
                             [](const MultisetEntry& e, std::size_t m) {
                               return e.metabolite < m;
                             });
  if (it != entries.end() && it->metabolite == metabolite) {
    it->count = nat_add(it->count, count);
  } else {
    entries.insert(it, MultisetEntry{metabolite, count});
  }
}

RegulatorExpr RegulatorExpr::constant(Nat value) {
  RegulatorExpr e;
  e.kind_ = Kind::Const;
  e.value_ = value;
  return e;
}

RegulatorExpr RegulatorExpr::var(std::size_t metabolite) {
  RegulatorExpr e;
  e.kind_ = Kind::Var;
  e.metabolite_ = metabolite;
  return e;
}

RegulatorExpr RegulatorExpr::add(RegulatorExpr lhs, RegulatorExpr rhs) {
  RegulatorExpr e;
  e.kind_ = Kind::Add;
  e.lhs_ = std::make_shared<const RegulatorExpr>(std::move(lhs));
  e.rhs_ = std::make_shared<const RegulatorExpr>(std::move(rhs));
  return e;
}

RegulatorExpr RegulatorExpr::nat_sub(RegulatorExpr lhs, RegulatorExpr rhs) {
  RegulatorExpr e;
  e.kind_ = Kind::NatSub;
  e.lhs_ = std::make_shared<const RegulatorExpr>(std::move(lhs));
  e.rhs_ = std::make_shared<const RegulatorExpr>(std::move(rhs));
  return e;
}

Nat RegulatorExpr::evaluate(std::span<const Nat> state) const {
  switch (kind_) {
    case Kind::Const:
      return value_;
    case Kind::Var:
      return state[metabolite_];
    case Kind::Add:
      return nat_add(lhs_->evaluate(state), rhs_->evaluate(state));
    case Kind::NatSub:
      return monus(lhs_->evaluate(state), rhs_->evaluate(state));
  }
  return 0;
}

bool structurally_equal(const RegulatorExpr& a, const RegulatorExpr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case RegulatorExpr::Kind::Const:
      return a.value() == b.value();
    case RegulatorExpr::Kind::Var:
      return a.metabolite() == b.metabolite();
    case RegulatorExpr::Kind::Add:
    case RegulatorExpr::Kind::NatSub:
      return structurally_equal(a.lhs(), b.lhs()) &&
             structurally_equal(a.rhs(), b.rhs());
  }
  return false;
}

std::optional<std::size_t> MPGrammar::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < metabolites.size(); ++i) {
    if (metabolites[i].name == name) return i;
  }
  return std::nullopt;
}

bool structurally_equal(const MPGrammar& a, const MPGrammar& b) {
  if (a.metabolites != b.metabolites || a.initial != b.initial) return false;
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    if (a.rules[i].lhs != b.rules[i].lhs || a.rules[i].rhs != b.rules[i].rhs) {
      return false;
    }
    if (!structurally_equal(a.regulators[i], b.regulators[i])) return false;
  }
  return true;
}

bool valid_metabolite_name(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

namespace {

// Keeps mult+ - mult- and per-step products comfortably inside int64/uint64
// checked arithmetic.
constexpr Nat kMaxMultiplicity = Nat{1} << 32;

void validate_multiset(const Multiset& ms, std::size_t metabolite_count,
                       const std::string& where) {
  std::size_t prev = 0;
  bool first = true;
  for (const MultisetEntry& e : ms.entries) {
    if (e.metabolite >= metabolite_count) {
      throw std::invalid_argument(where + ": metabolite index out of range");
    }
    if (e.count == 0) {
      throw std::invalid_argument(where + ": zero multiplicity stored");
    }
    if (e.count > kMaxMultiplicity) {
      throw std::invalid_argument(where + ": multiplicity too large");
    }
    if (!first && e.metabolite <= prev) {
      throw std::invalid_argument(where + ": entries not sorted/unique");
    }
    prev = e.metabolite;
    first = false;
  }
}

void validate_regulator(const RegulatorExpr& expr, std::size_t metabolite_count,
                        const std::string& where) {
  switch (expr.kind()) {
    case RegulatorExpr::Kind::Const:
      return;
    case RegulatorExpr::Kind::Var:
      if (expr.metabolite() >= metabolite_count) {
        throw std::invalid_argument(where + ": regulator references unknown metabolite");
      }
      return;
    case RegulatorExpr::Kind::Add:
    case RegulatorExpr::Kind::NatSub:
      validate_regulator(expr.lhs(), metabolite_count, where);
      validate_regulator(expr.rhs(), metabolite_count, where);
      return;
  }
}

}  // namespace

void validate_grammar(const MPGrammar& grammar) {
  std::set<std::string> seen;
  for (const Metabolite& m : grammar.metabolites) {
    if (!valid_metabolite_name(m.name)) {
      throw std::invalid_argument("invalid metabolite name '" + m.name + "'");
    }
    if (!seen.insert(m.name).second) {
      throw std::invalid_argument("duplicate metabolite '" + m.name + "'");
    }
  }
  if (grammar.initial.size() != grammar.metabolites.size()) {
    throw std::invalid_argument("initial state size does not match metabolite count");
  }
  if (grammar.regulators.size() != grammar.rules.size()) {
    throw std::invalid_argument("regulator count does not match rule count");
  }
  for (std::size_t i = 0; i < grammar.rules.size(); ++i) {
    const Rule& r = grammar.rules[i];
    std::string where = "rule " + std::to_string(i + 1) +
                        (r.label.empty() ? "" : " (" + r.label + ")");
    if (r.lhs.empty() && r.rhs.empty()) {
      throw std::invalid_argument(where + ": both sides empty");
    }
    validate_multiset(r.lhs, grammar.metabolites.size(), where);
    validate_multiset(r.rhs, grammar.metabolites.size(), where);
    validate_regulator(grammar.regulators[i], grammar.metabolites.size(), where);
  }
}

}  // namespace rm2mp
