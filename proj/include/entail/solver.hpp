#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "entail/cnf.hpp"
#include "entail/logic.hpp"

namespace entail {

/// Thrown when an exhaustive enumeration would exceed its size cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SatResult {
  bool satisfiable = false;
  /// Total model over var_count variables (entries 0/1) when satisfiable,
  /// empty otherwise. Variables left unconstrained by the search default
  /// to 0.
  Assignment model;
};

namespace detail {

/// Plain recursive DPLL. The procedure is fixed so results (including the
/// model) are reproducible: unit propagation to fixpoint, then pure-literal
/// assignment to fixpoint, then branch on the lowest-index unassigned
/// variable with polarity true first.
class DpllSearch {
 public:
  explicit DpllSearch(const Cnf& cnf) : cnf_(cnf) {}

  bool run(Assignment& values) {
    values.assign(cnf_.var_count, kUnset);
    return search(values);
  }

 private:
  bool search(Assignment& values) {
    if (!propagate(values)) return false;
    if (all_satisfied(values)) return true;

    int branch = -1;
    for (int v = 0; v < cnf_.var_count; ++v) {
      if (values[v] == kUnset) {
        branch = v;
        break;
      }
    }
    if (branch < 0) return false;  // fully assigned but some clause is false

    const Assignment saved = values;
    values[branch] = 1;
    if (search(values)) return true;
    values = saved;
    values[branch] = 0;
    if (search(values)) return true;
    values = saved;
    return false;
  }

  /// Unit propagation and pure-literal assignment until nothing changes.
  /// Returns false on conflict.
  bool propagate(Assignment& values) {
    for (;;) {
      bool changed = false;
      // Units: scan clauses in index order.
      for (const Clause& clause : cnf_.clauses) {
        bool satisfied = false;
        int unassigned = 0;
        Literal last{};
        for (const Literal& lit : clause) {
          const std::int8_t val = values[lit.var];
          if (val == kUnset) {
            ++unassigned;
            last = lit;
          } else if ((val == 1) == lit.positive) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          values[last.var] = last.positive ? 1 : 0;
          changed = true;
        }
      }
      if (changed) continue;

      // Pure literals: polarity census over clauses not yet satisfied.
      std::vector<std::uint8_t> seen(cnf_.var_count, 0);  // bit0 pos, bit1 neg
      for (const Clause& clause : cnf_.clauses) {
        bool satisfied = false;
        for (const Literal& lit : clause) {
          const std::int8_t val = values[lit.var];
          if (val != kUnset && (val == 1) == lit.positive) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        for (const Literal& lit : clause)
          if (values[lit.var] == kUnset)
            seen[lit.var] |= lit.positive ? 1 : 2;
      }
      for (int v = 0; v < cnf_.var_count; ++v) {
        if (seen[v] == 1) {
          values[v] = 1;
          changed = true;
        } else if (seen[v] == 2) {
          values[v] = 0;
          changed = true;
        }
      }
      if (!changed) return true;
    }
  }

  bool all_satisfied(const Assignment& values) const {
    for (const Clause& clause : cnf_.clauses) {
      bool satisfied = false;
      for (const Literal& lit : clause) {
        const std::int8_t val = values[lit.var];
        if (val != kUnset && (val == 1) == lit.positive) {
          satisfied = true;
          break;
        }
      }
      if (!satisfied) return false;
    }
    return true;
  }

  const Cnf& cnf_;
};

}  // namespace detail

/// Complete, deterministic satisfiability check. Identical input yields an
/// identical result, model included, on every run.
inline SatResult dpll_sat(const Cnf& cnf) {
  detail::DpllSearch search(cnf);
  Assignment values;
  if (!search.run(values)) return {};
  for (auto& v : values)
    if (v == kUnset) v = 0;
  return {true, std::move(values)};
}

/// Brute-force satisfiability by truth-table enumeration, the independent
/// cross-check for the DPLL path. Assignments over the formula's distinct
/// atoms are visited in lexicographic order (all-false first, the
/// highest-index atom toggling fastest) and the first satisfying one is
/// returned. Atoms absent from the formula default to 0 in the model.
inline SatResult truth_table_sat(const Formula& formula) {
  const std::vector<int> atoms = collect_atoms(formula);
  const int k = static_cast<int>(atoms.size());
  if (k > 20)
    throw CapacityError("truth-table enumeration capped at 20 atoms, got " +
                        std::to_string(k));

  Assignment values(max_atom_index(formula) + 1, 0);
  for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
    for (int j = 0; j < k; ++j)
      values[atoms[j]] = static_cast<std::int8_t>((mask >> (k - 1 - j)) & 1u);
    if (eval(formula, values)) return {true, values};
  }
  return {};
}

}  // namespace entail
