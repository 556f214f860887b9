#include "rm2mp/mp_text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

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

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, sep)) out.push_back(trim(piece));
  return out;
}

Nat parse_nat(std::size_t line_no, const std::string& token, const char* what) {
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    throw ParseError(line_no, std::string("malformed ") + what + " '" + token + "'");
  }
  try {
    return std::stoull(token);
  } catch (const std::out_of_range&) {
    throw ParseError(line_no, std::string(what) + " '" + token + "' is out of range");
  }
}

// ---- regulator expressions ------------------------------------------------

struct Token {
  enum class Type { Number, Ident, Plus, Minus, LParen, RParen, Comma, End };
  Type type = Type::End;
  std::string text;
};

class RegulatorParser {
 public:
  RegulatorParser(const MPGrammar& grammar, std::size_t line_no, const std::string& text)
      : grammar_(grammar), line_no_(line_no) {
    tokenize(text);
  }

  RegulatorExpr parse() {
    RegulatorExpr expr = parse_expr();
    expect(Token::Type::End, "end of regulator");
    return expr;
  }

 private:
  void tokenize(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size()) {
      unsigned char c = text[i];
      if (std::isspace(c)) {
        ++i;
      } else if (std::isdigit(c)) {
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        tokens_.push_back({Token::Type::Number, text.substr(i, j - i)});
        i = j;
      } else if (std::isalpha(c)) {
        std::size_t j = i;
        while (j < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
          ++j;
        }
        tokens_.push_back({Token::Type::Ident, text.substr(i, j - i)});
        i = j;
      } else if (c == '+') {
        tokens_.push_back({Token::Type::Plus, "+"}); ++i;
      } else if (c == '-') {
        tokens_.push_back({Token::Type::Minus, "-"}); ++i;
      } else if (c == '(') {
        tokens_.push_back({Token::Type::LParen, "("}); ++i;
      } else if (c == ')') {
        tokens_.push_back({Token::Type::RParen, ")"}); ++i;
      } else if (c == ',') {
        tokens_.push_back({Token::Type::Comma, ","}); ++i;
      } else {
        throw ParseError(line_no_, std::string("unexpected character '") +
                                       static_cast<char>(c) + "' in regulator");
      }
    }
    tokens_.push_back({Token::Type::End, ""});
  }

  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  void expect(Token::Type type, const char* what) {
    if (peek().type != type) {
      throw ParseError(line_no_, std::string("expected ") + what + " in regulator" +
                                     (peek().text.empty() ? "" : ", got '" + peek().text + "'"));
    }
    ++pos_;
  }

  // expr := primary ('+' primary)*
  RegulatorExpr parse_expr() {
    RegulatorExpr expr = parse_primary();
    while (peek().type == Token::Type::Plus) {
      take();
      expr = RegulatorExpr::add(std::move(expr), parse_primary());
    }
    return expr;
  }

  // primary := nat | name | 'max' '(' expr '-' expr ',' '0' ')'
  RegulatorExpr parse_primary() {
    if (peek().type == Token::Type::Number) {
      return RegulatorExpr::constant(parse_nat(line_no_, take().text, "number"));
    }
    if (peek().type != Token::Type::Ident) {
      throw ParseError(line_no_, "expected number, metabolite or max(...) in regulator" +
                                     (peek().text.empty() ? "" : ", got '" + peek().text + "'"));
    }
    Token ident = take();
    if (ident.text == "max" && peek().type == Token::Type::LParen) {
      take();
      RegulatorExpr lhs = parse_expr();
      expect(Token::Type::Minus, "'-'");
      RegulatorExpr rhs = parse_expr();
      expect(Token::Type::Comma, "','");
      const Token& zero = peek();
      if (zero.type != Token::Type::Number || zero.text != "0") {
        throw ParseError(line_no_, "max(...) must clamp at 0");
      }
      take();
      expect(Token::Type::RParen, "')'");
      return RegulatorExpr::nat_sub(std::move(lhs), std::move(rhs));
    }
    auto index = grammar_.index_of(ident.text);
    if (!index) {
      throw ParseError(line_no_, "unknown metabolite '" + ident.text + "' in regulator");
    }
    return RegulatorExpr::var(*index);
  }

  const MPGrammar& grammar_;
  std::size_t line_no_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---- multisets ------------------------------------------------------------

Multiset parse_multiset(const MPGrammar& grammar, std::size_t line_no,
                        const std::string& text) {
  Multiset ms;
  std::string body = trim(text);
  if (body.empty()) return ms;
  for (const std::string& piece : split(body, '+')) {
    if (piece.empty()) {
      throw ParseError(line_no, "empty multiset entry");
    }
    std::stringstream ss(piece);
    std::string first, second, extra;
    ss >> first >> second >> extra;
    if (!extra.empty()) {
      throw ParseError(line_no, "malformed multiset entry '" + piece + "'");
    }
    Nat count = 1;
    std::string name;
    if (!second.empty()) {
      count = parse_nat(line_no, first, "multiplicity");
      name = second;
    } else {
      name = first;
    }
    if (count == 0) {
      throw ParseError(line_no, "zero multiplicity for '" + name + "'");
    }
    auto index = grammar.index_of(name);
    if (!index) {
      throw ParseError(line_no, "unknown metabolite '" + name + "'");
    }
    ms.add(*index, count);
  }
  return ms;
}

}  // namespace

MPGrammar parse_grammar(const std::string& text) {
  MPGrammar grammar;
  std::stringstream ss(text);
  std::string raw;
  std::size_t line_no = 0;
  enum class Section { ExpectMetabolites, ExpectInitial, ExpectRules, Rules };
  Section section = Section::ExpectMetabolites;

  while (std::getline(ss, raw)) {
    ++line_no;
    std::string body = trim(strip_comment(raw));
    if (body.empty()) continue;

    switch (section) {
      case Section::ExpectMetabolites: {
        if (!body.starts_with("METABOLITES:")) {
          throw ParseError(line_no, "expected METABOLITES: section");
        }
        std::string list = trim(body.substr(std::string("METABOLITES:").size()));
        if (!list.empty()) {
          for (const std::string& name : split(list, ',')) {
            if (!valid_metabolite_name(name)) {
              throw ParseError(line_no, "invalid metabolite name '" + name + "'");
            }
            if (grammar.index_of(name)) {
              throw ParseError(line_no, "duplicate metabolite '" + name + "'");
            }
            grammar.metabolites.push_back({name});
          }
        }
        grammar.initial.assign(grammar.metabolites.size(), 0);
        section = Section::ExpectInitial;
        break;
      }
      case Section::ExpectInitial: {
        if (!body.starts_with("INITIAL:")) {
          throw ParseError(line_no, "expected INITIAL: section");
        }
        std::string list = trim(body.substr(std::string("INITIAL:").size()));
        if (!list.empty()) {
          std::vector<bool> assigned(grammar.metabolites.size(), false);
          for (const std::string& item : split(list, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) {
              throw ParseError(line_no, "expected name=value in INITIAL, got '" + item + "'");
            }
            std::string name = trim(item.substr(0, eq));
            auto index = grammar.index_of(name);
            if (!index) {
              throw ParseError(line_no, "unknown metabolite '" + name + "' in INITIAL");
            }
            if (assigned[*index]) {
              throw ParseError(line_no, "metabolite '" + name + "' assigned twice in INITIAL");
            }
            assigned[*index] = true;
            grammar.initial[*index] =
                parse_nat(line_no, trim(item.substr(eq + 1)), "initial value");
          }
        }
        section = Section::ExpectRules;
        break;
      }
      case Section::ExpectRules: {
        if (body != "RULES:") {
          throw ParseError(line_no, "expected RULES: section");
        }
        section = Section::Rules;
        break;
      }
      case Section::Rules: {
        auto arrow = body.find("->");
        if (arrow == std::string::npos) {
          throw ParseError(line_no, "expected '->' in rule");
        }
        auto colon = body.find(':', arrow + 2);
        if (colon == std::string::npos) {
          throw ParseError(line_no, "expected ': regulator' in rule");
        }
        Rule rule;
        rule.lhs = parse_multiset(grammar, line_no, body.substr(0, arrow));
        rule.rhs = parse_multiset(grammar, line_no, body.substr(arrow + 2, colon - arrow - 2));
        if (rule.lhs.empty() && rule.rhs.empty()) {
          throw ParseError(line_no, "rule with both sides empty");
        }
        rule.label = "r" + std::to_string(grammar.rules.size() + 1);
        std::string regulator_text = trim(body.substr(colon + 1));
        if (regulator_text.empty()) {
          throw ParseError(line_no, "missing regulator");
        }
        grammar.regulators.push_back(
            RegulatorParser(grammar, line_no, regulator_text).parse());
        grammar.rules.push_back(std::move(rule));
        break;
      }
    }
  }

  if (section == Section::ExpectMetabolites) {
    throw ParseError(0, "empty grammar: missing METABOLITES: section");
  }
  if (section == Section::ExpectInitial) {
    throw ParseError(0, "missing INITIAL: section");
  }
  if (section == Section::ExpectRules) {
    throw ParseError(0, "missing RULES: section");
  }
  validate_grammar(grammar);
  return grammar;
}

std::string serialize_multiset(const MPGrammar& grammar, const Multiset& multiset) {
  std::string out;
  bool first = true;
  for (const MultisetEntry& e : multiset.entries) {
    if (!first) out += " + ";
    if (e.count != 1) out += std::to_string(e.count) + " ";
    out += grammar.metabolites[e.metabolite].name;
    first = false;
  }
  return out;
}

std::string serialize_regulator(const MPGrammar& grammar, const RegulatorExpr& expr) {
  switch (expr.kind()) {
    case RegulatorExpr::Kind::Const:
      return std::to_string(expr.value());
    case RegulatorExpr::Kind::Var:
      return grammar.metabolites[expr.metabolite()].name;
    case RegulatorExpr::Kind::Add:
      return serialize_regulator(grammar, expr.lhs()) + " + " +
             serialize_regulator(grammar, expr.rhs());
    case RegulatorExpr::Kind::NatSub:
      return "max(" + serialize_regulator(grammar, expr.lhs()) + " - " +
             serialize_regulator(grammar, expr.rhs()) + ", 0)";
  }
  return "";
}

std::string serialize_grammar(const MPGrammar& grammar) {
  std::string out = "METABOLITES:";
  for (std::size_t i = 0; i < grammar.metabolites.size(); ++i) {
    out += i == 0 ? " " : ", ";
    out += grammar.metabolites[i].name;
  }
  out += "\nINITIAL:";
  bool first = true;
  for (std::size_t i = 0; i < grammar.metabolites.size(); ++i) {
    if (grammar.initial[i] == 0) continue;
    out += first ? " " : ", ";
    out += grammar.metabolites[i].name + "=" + std::to_string(grammar.initial[i]);
    first = false;
  }
  out += "\nRULES:\n";
  for (std::size_t m = 0; m < grammar.rules.size(); ++m) {
    const Rule& rule = grammar.rules[m];
    if (!rule.lhs.empty()) {
      out += serialize_multiset(grammar, rule.lhs) + " ";
    }
    out += "->";
    if (!rule.rhs.empty()) {
      out += " " + serialize_multiset(grammar, rule.rhs);
    }
    out += " : " + serialize_regulator(grammar, grammar.regulators[m]) + "\n";
  }
  return out;
}

}  // namespace rm2mp
