#pragma once

#include <algorithm>
#include <compare>
#include <stdexcept>
#include <vector>

#include "entail/logic.hpp"

namespace entail {

struct Literal {
  int var = 0;
  bool positive = true;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

inline Literal negated(Literal lit) { return {lit.var, !lit.positive}; }

using Clause = std::vector<Literal>;

/// Clause set in conjunctive normal form. Variables 0..original_var_count-1
/// are source atoms; anything above was introduced by compilation.
struct Cnf {
  int var_count = 0;
  int original_var_count = 0;
  std::vector<Clause> clauses;

  /// Normalizes (sorts, deduplicates) and stores the clause. Tautological
  /// clauses are dropped; returns whether the clause was kept. An empty
  /// clause is kept and makes the whole set unsatisfiable.
  bool add_clause(Clause clause) {
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    for (std::size_t i = 0; i + 1 < clause.size(); ++i)
      if (clause[i].var == clause[i + 1].var) return false;
    clauses.push_back(std::move(clause));
    return true;
  }

  int new_var() { return var_count++; }
};

namespace detail {

/// Gate-by-gate Tseitin encoder. Each composite subformula gets a fresh
/// variable constrained to be equivalent to the subformula (both
/// directions, no polarity reduction); negation is literal flipping and
/// atoms are their own literals.
class TseitinEncoder {
 public:
  explicit TseitinEncoder(Cnf& out) : out_(out) {}

  Literal encode(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Atom:
        return {f.atom_index(), true};
      case FormulaKind::Not:
        return negated(encode(f.operand(0)));
      case FormulaKind::And: {
        std::vector<Literal> inputs = encode_all(f);
        const Literal gate{out_.new_var(), true};
        Clause reverse{gate};
        for (Literal in : inputs) {
          out_.add_clause({negated(gate), in});
          reverse.push_back(negated(in));
        }
        out_.add_clause(std::move(reverse));
        return gate;
      }
      case FormulaKind::Or: {
        std::vector<Literal> inputs = encode_all(f);
        const Literal gate{out_.new_var(), true};
        Clause forward{negated(gate)};
        for (Literal in : inputs) {
          out_.add_clause({gate, negated(in)});
          forward.push_back(in);
        }
        out_.add_clause(std::move(forward));
        return gate;
      }
      case FormulaKind::Implies: {
        const Literal lhs = encode(f.operand(0));
        const Literal rhs = encode(f.operand(1));
        const Literal gate{out_.new_var(), true};
        out_.add_clause({negated(gate), negated(lhs), rhs});
        out_.add_clause({gate, lhs});
        out_.add_clause({gate, negated(rhs)});
        return gate;
      }
      case FormulaKind::Iff: {
        const Literal lhs = encode(f.operand(0));
        const Literal rhs = encode(f.operand(1));
        const Literal gate{out_.new_var(), true};
        out_.add_clause({negated(gate), negated(lhs), rhs});
        out_.add_clause({negated(gate), lhs, negated(rhs)});
        out_.add_clause({gate, lhs, rhs});
        out_.add_clause({gate, negated(lhs), negated(rhs)});
        return gate;
      }
      case FormulaKind::Constant:
        // simplify_constants() ran first, so constants cannot appear here.
        throw std::logic_error("constant node reached the Tseitin encoder");
    }
    throw std::logic_error("unreachable formula kind");
  }

 private:
  std::vector<Literal> encode_all(const Formula& f) {
    std::vector<Literal> lits;
    lits.reserve(f.operands().size());
    for (const Formula& op : f.operands()) lits.push_back(encode(op));
    return lits;
  }

  Cnf& out_;
};

}  // namespace detail

/// Compiles a formula to an equisatisfiable CNF. Every model of the CNF
/// restricted to the original atoms satisfies the formula, and every model
/// of the formula extends to a model of the CNF. Auxiliary variables are
/// numbered from original_vars upward in post-order of the formula.
///
/// original_vars widens the original variable range beyond the atoms that
/// actually occur (useful when models must cover a whole ontology); by
/// default it is max_atom_index(formula)+1.
inline Cnf tseitin_compile(const Formula& formula, int original_vars = -1) {
  const int needed = max_atom_index(formula) + 1;
  if (original_vars < 0) original_vars = needed;
  if (original_vars < needed)
    throw std::invalid_argument("original_vars does not cover the formula's atoms");

  Cnf cnf;
  cnf.var_count = original_vars;
  cnf.original_var_count = original_vars;

  const Formula folded = simplify_constants(formula);
  if (folded.kind() == FormulaKind::Constant) {
    if (!folded.const_value()) cnf.add_clause({});
    return cnf;
  }
  detail::TseitinEncoder encoder(cnf);
  const Literal root = encoder.encode(folded);
  cnf.add_clause({root});
  return cnf;
}

}  // namespace entail
