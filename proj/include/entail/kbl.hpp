#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entail/logic.hpp"
#include "entail/ontology.hpp"

namespace entail {

enum class KbErrorKind : std::uint8_t {
  Syntax,
  UndeclaredAtom,
  DuplicateDeclaration,
  DuplicateRuleName,
};

/// Parse failure with 1-based line/column position.
class KbParseError : public std::runtime_error {
 public:
  KbParseError(KbErrorKind kind, int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        kind_(kind),
        line_(line),
        column_(column) {}

  KbErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  KbErrorKind kind_;
  int line_;
  int column_;
};

namespace detail {

struct KblToken {
  enum class Type {
    Ident,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    Colon,
    End,
  };
  Type type = Type::End;
  std::string text;
  int column = 0;
};

inline std::vector<KblToken> lex_kbl_line(std::string_view line, int line_no) {
  std::vector<KblToken> tokens;
  std::size_t i = 0;
  auto is_ident_char = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  };
  while (i < line.size()) {
    const char c = line[i];
    const int col = static_cast<int>(i) + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;  // comment to end of line
    switch (c) {
      case '!': tokens.push_back({KblToken::Type::Bang, "!", col}); ++i; continue;
      case '&': tokens.push_back({KblToken::Type::Amp, "&", col}); ++i; continue;
      case '|': tokens.push_back({KblToken::Type::Pipe, "|", col}); ++i; continue;
      case '(': tokens.push_back({KblToken::Type::LParen, "(", col}); ++i; continue;
      case ')': tokens.push_back({KblToken::Type::RParen, ")", col}); ++i; continue;
      case ':': tokens.push_back({KblToken::Type::Colon, ":", col}); ++i; continue;
      case '-':
        if (i + 1 < line.size() && line[i + 1] == '>') {
          tokens.push_back({KblToken::Type::Arrow, "->", col});
          i += 2;
          continue;
        }
        throw KbParseError(KbErrorKind::Syntax, line_no, col, "expected '->'");
      case '<':
        if (i + 2 < line.size() && line[i + 1] == '-' && line[i + 2] == '>') {
          tokens.push_back({KblToken::Type::DoubleArrow, "<->", col});
          i += 3;
          continue;
        }
        throw KbParseError(KbErrorKind::Syntax, line_no, col, "expected '<->'");
      default:
        break;
    }
    if ((c >= 'a' && c <= 'z') || c == '_') {
      std::size_t start = i;
      while (i < line.size() && is_ident_char(line[i])) ++i;
      tokens.push_back({KblToken::Type::Ident,
                        std::string(line.substr(start, i - start)), col});
      continue;
    }
    throw KbParseError(KbErrorKind::Syntax, line_no, col,
                       std::string("unexpected character '") + c + "'");
  }
  tokens.push_back({KblToken::Type::End, "", static_cast<int>(line.size()) + 1});
  return tokens;
}

/// Recursive-descent formula parser over one line's tokens. Precedence,
/// tightest first: ! & | -> <-> with the arrows right-associative.
class KblFormulaParser {
 public:
  KblFormulaParser(const std::vector<KblToken>& tokens, std::size_t pos,
                   const Ontology& ontology, int line_no)
      : tokens_(tokens), pos_(pos), ontology_(ontology), line_(line_no) {}

  Formula parse() { return parse_iff(); }
  std::size_t position() const { return pos_; }

 private:
  using Type = KblToken::Type;

  const KblToken& peek() const { return tokens_[pos_]; }
  const KblToken& advance() { return tokens_[pos_++]; }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (peek().type == Type::DoubleArrow) {
      advance();
      return Formula::equivalence(std::move(lhs), parse_iff());
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (peek().type == Type::Arrow) {
      advance();
      return Formula::implication(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> operands;
    operands.push_back(parse_and());
    while (peek().type == Type::Pipe) {
      advance();
      operands.push_back(parse_and());
    }
    if (operands.size() == 1) return std::move(operands.front());
    return Formula::disjunction(std::move(operands));
  }

  Formula parse_and() {
    std::vector<Formula> operands;
    operands.push_back(parse_unary());
    while (peek().type == Type::Amp) {
      advance();
      operands.push_back(parse_unary());
    }
    if (operands.size() == 1) return std::move(operands.front());
    return Formula::conjunction(std::move(operands));
  }

  Formula parse_unary() {
    if (peek().type == Type::Bang) {
      advance();
      return Formula::negation(parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const KblToken& tok = peek();
    if (tok.type == Type::LParen) {
      advance();
      Formula inner = parse_iff();
      if (peek().type != Type::RParen)
        throw KbParseError(KbErrorKind::Syntax, line_, peek().column, "expected ')'");
      advance();
      return inner;
    }
    if (tok.type == Type::Ident) {
      advance();
      auto index = ontology_.atom_index_of(tok.text);
      if (!index)
        throw KbParseError(KbErrorKind::UndeclaredAtom, line_, tok.column,
                           "undeclared atom '" + tok.text + "'");
      return Formula::atom(*index);
    }
    throw KbParseError(KbErrorKind::Syntax, line_, tok.column,
                       "expected an atom, '!' or '('");
  }

  const std::vector<KblToken>& tokens_;
  std::size_t pos_;
  const Ontology& ontology_;
  int line_;
};

}  // namespace detail

/// Parses the line-oriented knowledge-base DSL:
///
///   finding <id>
///   diagnosis <id>
///   rule <name>: <formula>
///
/// plus '#' comments and blank lines. Atoms must be declared before use.
/// The grammar is documented in docs/kbl.md.
inline Ontology parse_kb(std::string_view text) {
  Ontology ontology;
  int line_no = 0;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    const std::size_t eol = text.find('\n', offset);
    const std::string_view line =
        text.substr(offset, eol == std::string_view::npos ? text.size() - offset
                                                          : eol - offset);
    ++line_no;
    offset = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    const auto tokens = detail::lex_kbl_line(line, line_no);
    if (tokens.front().type == detail::KblToken::Type::End) continue;

    const detail::KblToken& head = tokens.front();
    if (head.type != detail::KblToken::Type::Ident)
      throw KbParseError(KbErrorKind::Syntax, line_no, head.column,
                         "expected 'finding', 'diagnosis' or 'rule'");

    auto expect_ident = [&](std::size_t pos) -> const detail::KblToken& {
      if (tokens[pos].type != detail::KblToken::Type::Ident)
        throw KbParseError(KbErrorKind::Syntax, line_no, tokens[pos].column,
                           "expected an identifier");
      return tokens[pos];
    };
    auto expect_end = [&](std::size_t pos) {
      if (tokens[pos].type != detail::KblToken::Type::End)
        throw KbParseError(KbErrorKind::Syntax, line_no, tokens[pos].column,
                           "unexpected trailing input");
    };

    if (head.text == "finding" || head.text == "diagnosis") {
      const auto& name = expect_ident(1);
      expect_end(2);
      if (ontology.atom_index_of(name.text))
        throw KbParseError(KbErrorKind::DuplicateDeclaration, line_no, name.column,
                           "duplicate declaration of '" + name.text + "'");
      ontology.declare(name.text, head.text == "finding" ? AtomKind::Finding
                                                         : AtomKind::Diagnosis);
    } else if (head.text == "rule") {
      const auto& name = expect_ident(1);
      if (tokens[2].type != detail::KblToken::Type::Colon)
        throw KbParseError(KbErrorKind::Syntax, line_no, tokens[2].column,
                           "expected ':' after the rule name");
      for (const Rule& rule : ontology.rules())
        if (rule.name == name.text)
          throw KbParseError(KbErrorKind::DuplicateRuleName, line_no, name.column,
                             "duplicate rule name '" + name.text + "'");
      detail::KblFormulaParser parser(tokens, 3, ontology, line_no);
      Formula body = parser.parse();
      expect_end(parser.position());
      ontology.add_rule(name.text, std::move(body));
    } else {
      throw KbParseError(KbErrorKind::Syntax, line_no, head.column,
                         "expected 'finding', 'diagnosis' or 'rule'");
    }
  }
  return ontology;
}

namespace detail {

// Precedence ranks for printing; higher binds tighter.
inline int formula_precedence(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    case FormulaKind::Not: return 5;
    default: return 6;
  }
}

inline void format_formula_into(const Formula& f, const Ontology& ontology,
                                std::string& out) {
  const int prec = formula_precedence(f.kind());
  auto child = [&](const Formula& op, bool allow_equal) {
    const int op_prec = formula_precedence(op.kind());
    const bool parens = allow_equal ? op_prec < prec : op_prec <= prec;
    if (parens) out += '(';
    format_formula_into(op, ontology, out);
    if (parens) out += ')';
  };
  switch (f.kind()) {
    case FormulaKind::Constant:
      throw std::invalid_argument("constants have no DSL spelling");
    case FormulaKind::Atom:
      out += ontology.atom(f.atom_index()).name;
      return;
    case FormulaKind::Not:
      out += '!';
      child(f.operand(0), true);  // !!a prints without parentheses
      return;
    case FormulaKind::And:
    case FormulaKind::Or: {
      const char* sep = f.kind() == FormulaKind::And ? " & " : " | ";
      for (std::size_t i = 0; i < f.operands().size(); ++i) {
        if (i) out += sep;
        child(f.operand(i), false);
      }
      return;
    }
    case FormulaKind::Implies:
    case FormulaKind::Iff: {
      child(f.operand(0), false);
      out += f.kind() == FormulaKind::Implies ? " -> " : " <-> ";
      child(f.operand(1), true);  // right-associative
      return;
    }
  }
}

}  // namespace detail

/// Renders a formula in DSL syntax with minimal parentheses. Re-parsing the
/// result yields a structurally identical formula.
inline std::string format_formula(const Formula& f, const Ontology& ontology) {
  std::string out;
  detail::format_formula_into(f, ontology, out);
  return out;
}

/// Serializes an ontology back to DSL text. Declarations keep their original
/// order (and therefore their indices), so parse(write_kbl(parse(text)))
/// equals parse(text) structurally.
inline std::string write_kbl(const Ontology& ontology) {
  std::string out;
  for (const Atom& atom : ontology.atoms()) {
    out += atom.kind == AtomKind::Finding ? "finding " : "diagnosis ";
    out += atom.name;
    out += '\n';
  }
  for (const Rule& rule : ontology.rules()) {
    out += "rule ";
    out += rule.name;
    out += ": ";
    out += format_formula(rule.body, ontology);
    out += '\n';
  }
  return out;
}

}  // namespace entail
