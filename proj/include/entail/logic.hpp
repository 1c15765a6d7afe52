#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace entail {

/// Dense truth assignment indexed by atom index. Entries are 0, 1, or
/// kUnset for atoms without a value.
using Assignment = std::vector<std::int8_t>;
inline constexpr std::int8_t kUnset = -1;

enum class AtomKind : std::uint8_t { Finding, Diagnosis, Auxiliary };

struct Atom {
  std::string name;
  AtomKind kind = AtomKind::Finding;
  int index = 0;
};

/// Thrown by eval() when the assignment does not cover every atom of the
/// formula being evaluated.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FormulaKind : std::uint8_t {
  Constant,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
};

/// Immutable propositional formula. Nodes are shared, so copies are cheap
/// and formulas can be handed across threads freely.
class Formula {
 public:
  static Formula constant(bool value) {
    auto node = std::make_shared<Node>();
    node->kind = FormulaKind::Constant;
    node->value = value;
    return Formula(std::move(node));
  }

  static Formula atom(int index) {
    if (index < 0) throw std::invalid_argument("atom index must be non-negative");
    auto node = std::make_shared<Node>();
    node->kind = FormulaKind::Atom;
    node->atom = index;
    return Formula(std::move(node));
  }

  static Formula negation(Formula operand) {
    auto node = std::make_shared<Node>();
    node->kind = FormulaKind::Not;
    node->operands.push_back(std::move(operand));
    return Formula(std::move(node));
  }

  /// N-ary conjunction; requires at least two operands.
  static Formula conjunction(std::vector<Formula> operands) {
    return make_nary(FormulaKind::And, std::move(operands));
  }

  /// N-ary disjunction; requires at least two operands.
  static Formula disjunction(std::vector<Formula> operands) {
    return make_nary(FormulaKind::Or, std::move(operands));
  }

  static Formula implication(Formula lhs, Formula rhs) {
    return make_binary(FormulaKind::Implies, std::move(lhs), std::move(rhs));
  }

  static Formula equivalence(Formula lhs, Formula rhs) {
    return make_binary(FormulaKind::Iff, std::move(lhs), std::move(rhs));
  }

  FormulaKind kind() const { return node_->kind; }
  bool const_value() const { return node_->value; }
  int atom_index() const { return node_->atom; }
  const std::vector<Formula>& operands() const { return node_->operands; }
  const Formula& operand(std::size_t i) const { return node_->operands[i]; }

 private:
  struct Node {
    FormulaKind kind = FormulaKind::Constant;
    bool value = false;
    int atom = -1;
    std::vector<Formula> operands;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula make_nary(FormulaKind kind, std::vector<Formula> operands) {
    if (operands.size() < 2)
      throw std::invalid_argument("n-ary connective needs at least two operands");
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->operands = std::move(operands);
    return Formula(std::move(node));
  }

  static Formula make_binary(FormulaKind kind, Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->operands.push_back(std::move(lhs));
    node->operands.push_back(std::move(rhs));
    return Formula(std::move(node));
  }

  std::shared_ptr<const Node> node_;
};

/// Standard propositional semantics. Implies(a,b) is !a||b, Iff(a,b) is
/// equality of truth values. Every subformula is evaluated, so an atom
/// missing from the assignment is always reported, never masked by
/// short-circuiting.
inline bool eval(const Formula& f, const Assignment& assignment) {
  switch (f.kind()) {
    case FormulaKind::Constant:
      return f.const_value();
    case FormulaKind::Atom: {
      const int idx = f.atom_index();
      if (idx >= static_cast<int>(assignment.size()) || assignment[idx] == kUnset)
        throw EvalError("assignment does not cover atom index " + std::to_string(idx));
      return assignment[idx] == 1;
    }
    case FormulaKind::Not:
      return !eval(f.operand(0), assignment);
    case FormulaKind::And: {
      bool result = true;
      for (const Formula& op : f.operands())
        if (!eval(op, assignment)) result = false;
      return result;
    }
    case FormulaKind::Or: {
      bool result = false;
      for (const Formula& op : f.operands())
        if (eval(op, assignment)) result = true;
      return result;
    }
    case FormulaKind::Implies: {
      const bool lhs = eval(f.operand(0), assignment);
      const bool rhs = eval(f.operand(1), assignment);
      return !lhs || rhs;
    }
    case FormulaKind::Iff: {
      const bool lhs = eval(f.operand(0), assignment);
      const bool rhs = eval(f.operand(1), assignment);
      return lhs == rhs;
    }
  }
  throw std::logic_error("unreachable formula kind");
}

namespace detail {
inline void collect_atoms_into(const Formula& f, std::set<int>& out) {
  if (f.kind() == FormulaKind::Atom) {
    out.insert(f.atom_index());
    return;
  }
  for (const Formula& op : f.operands()) collect_atoms_into(op, out);
}
}  // namespace detail

/// Distinct atom indices of a formula, ascending.
inline std::vector<int> collect_atoms(const Formula& f) {
  std::set<int> atoms;
  detail::collect_atoms_into(f, atoms);
  return {atoms.begin(), atoms.end()};
}

/// Largest atom index occurring in the formula, or -1 if there is none.
inline int max_atom_index(const Formula& f) {
  if (f.kind() == FormulaKind::Atom) return f.atom_index();
  int max_index = -1;
  for (const Formula& op : f.operands())
    max_index = std::max(max_index, max_atom_index(op));
  return max_index;
}

/// Folds ConstTrue/ConstFalse out of the formula. The result either is a
/// single constant or contains no constant nodes at all.
inline Formula simplify_constants(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Constant:
    case FormulaKind::Atom:
      return f;
    case FormulaKind::Not: {
      Formula op = simplify_constants(f.operand(0));
      if (op.kind() == FormulaKind::Constant)
        return Formula::constant(!op.const_value());
      return Formula::negation(std::move(op));
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.kind() == FormulaKind::And;
      // For And, a false operand collapses the whole node and true operands
      // drop out; dual for Or.
      std::vector<Formula> kept;
      for (const Formula& raw : f.operands()) {
        Formula op = simplify_constants(raw);
        if (op.kind() == FormulaKind::Constant) {
          if (op.const_value() != is_and) return Formula::constant(!is_and);
          continue;
        }
        kept.push_back(std::move(op));
      }
      if (kept.empty()) return Formula::constant(is_and);
      if (kept.size() == 1) return kept.front();
      return is_and ? Formula::conjunction(std::move(kept))
                    : Formula::disjunction(std::move(kept));
    }
    case FormulaKind::Implies: {
      Formula lhs = simplify_constants(f.operand(0));
      Formula rhs = simplify_constants(f.operand(1));
      if (lhs.kind() == FormulaKind::Constant)
        return lhs.const_value() ? rhs : Formula::constant(true);
      if (rhs.kind() == FormulaKind::Constant)
        return rhs.const_value() ? Formula::constant(true)
                                 : Formula::negation(std::move(lhs));
      return Formula::implication(std::move(lhs), std::move(rhs));
    }
    case FormulaKind::Iff: {
      Formula lhs = simplify_constants(f.operand(0));
      Formula rhs = simplify_constants(f.operand(1));
      if (lhs.kind() == FormulaKind::Constant)
        return lhs.const_value() ? rhs : Formula::negation(std::move(rhs));
      if (rhs.kind() == FormulaKind::Constant)
        return rhs.const_value() ? lhs : Formula::negation(std::move(lhs));
      return Formula::equivalence(std::move(lhs), std::move(rhs));
    }
  }
  throw std::logic_error("unreachable formula kind");
}

/// Structural equality (same shape, same atoms, same constants).
inline bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Constant:
      return a.const_value() == b.const_value();
    case FormulaKind::Atom:
      return a.atom_index() == b.atom_index();
    default: {
      if (a.operands().size() != b.operands().size()) return false;
      for (std::size_t i = 0; i < a.operands().size(); ++i)
        if (!structurally_equal(a.operand(i), b.operand(i))) return false;
      return true;
    }
  }
}

}  // namespace entail
