#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entail/cnf.hpp"
#include "entail/evidence.hpp"
#include "entail/logic.hpp"
#include "entail/ontology.hpp"
#include "entail/solver.hpp"

namespace entail {

/// Where a diagnosis lands once claims and entailment are known:
///   Supported          claimed and entailed
///   Unsupported        claimed but not entailed (a hallucination)
///   Missed             entailed but not claimed (an omission)
///   CorrectlyExcluded  neither
enum class TaxonomyClass : std::uint8_t {
  Supported,
  Unsupported,
  Missed,
  CorrectlyExcluded,
};

inline const char* taxonomy_name(TaxonomyClass c) {
  switch (c) {
    case TaxonomyClass::Supported: return "supported";
    case TaxonomyClass::Unsupported: return "unsupported";
    case TaxonomyClass::Missed: return "missed";
    case TaxonomyClass::CorrectlyExcluded: return "correctly_excluded";
  }
  return "?";
}

enum class VerdictStatus : std::uint8_t { Consistent, Inconsistent, Malformed };

inline const char* status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Consistent: return "consistent";
    case VerdictStatus::Inconsistent: return "inconsistent";
    case VerdictStatus::Malformed: return "malformed";
  }
  return "?";
}

/// Per-report audit result. Sets hold diagnosis ordinals in declaration
/// order; per_diagnosis covers every diagnosis exactly once when the report
/// is consistent and is empty otherwise.
struct Verdict {
  std::string id;
  VerdictStatus status = VerdictStatus::Malformed;
  std::vector<int> entailed;
  std::vector<int> claimed;
  std::vector<int> verified;  // claimed ∩ entailed
  std::vector<TaxonomyClass> per_diagnosis;
  /// (diagnosis ordinal, countermodel over the ontology's atoms); filled for
  /// non-entailed diagnoses when witness emission is requested.
  std::vector<std::pair<int, Assignment>> countermodels;
  bool countermodels_emitted = false;
};

class InconsistentEvidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContractViolationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

/// Φ_V ∧ ⋀K as a single formula.
inline Formula evidence_with_rules(const EvidenceAssignment& evidence,
                                   const Ontology& ontology) {
  std::vector<Formula> parts;
  parts.push_back(phi(evidence, ontology));
  for (const Rule& rule : ontology.rules()) parts.push_back(rule.body);
  if (parts.size() == 1) return parts.front();
  return Formula::conjunction(std::move(parts));
}

/// Satisfiability of Φ_V ∧ ⋀K ∧ ¬d. Unsat means the diagnosis is entailed;
/// a model is a countermodel witnessing non-entailment.
inline SatResult entailment_check(const EvidenceAssignment& evidence,
                                  const Ontology& ontology, int diagnosis) {
  Formula query = Formula::conjunction(
      {evidence_with_rules(evidence, ontology),
       Formula::negation(Formula::atom(ontology.diagnosis_atom(diagnosis)))});
  return dpll_sat(tseitin_compile(query, ontology.atom_count()));
}

}  // namespace detail

/// True iff the evidence is compatible with the knowledge base, i.e.
/// Φ_V ∧ ⋀K is satisfiable. Inconsistent evidence would make every
/// diagnosis vacuously entailed, so callers gate on this first.
inline bool check_consistency(const EvidenceAssignment& evidence,
                              const Ontology& ontology) {
  const Formula context = detail::evidence_with_rules(evidence, ontology);
  return dpll_sat(tseitin_compile(context, ontology.atom_count())).satisfiable;
}

/// Whether the evidence logically forces the diagnosis under the knowledge
/// base: Φ_V ∧ ⋀K ∧ ¬d unsatisfiable. Throws InconsistentEvidenceError when
/// the evidence itself contradicts the knowledge base.
inline bool entails(const EvidenceAssignment& evidence, const Ontology& ontology,
                    int diagnosis) {
  if (!check_consistency(evidence, ontology))
    throw InconsistentEvidenceError("evidence is inconsistent with the knowledge base");
  return !detail::entailment_check(evidence, ontology, diagnosis).satisfiable;
}

/// All diagnoses forced by the evidence, in declaration order. One solver
/// call per diagnosis.
inline std::vector<int> entailed_set(const EvidenceAssignment& evidence,
                                     const Ontology& ontology) {
  if (!check_consistency(evidence, ontology))
    throw InconsistentEvidenceError("evidence is inconsistent with the knowledge base");
  std::vector<int> out;
  for (int d = 0; d < ontology.diagnosis_count(); ++d)
    if (!detail::entailment_check(evidence, ontology, d).satisfiable)
      out.push_back(d);
  return out;
}

/// Witness that a diagnosis is not entailed: a model of Φ_V ∧ ⋀K ∧ ¬d
/// restricted to the ontology's atoms. Calling this for an entailed
/// diagnosis is a caller bug and throws ContractViolationError.
inline Assignment countermodel(const EvidenceAssignment& evidence,
                               const Ontology& ontology, int diagnosis) {
  if (!check_consistency(evidence, ontology))
    throw InconsistentEvidenceError("evidence is inconsistent with the knowledge base");
  SatResult result = detail::entailment_check(evidence, ontology, diagnosis);
  if (!result.satisfiable)
    throw ContractViolationError("countermodel requested for an entailed diagnosis");
  result.model.resize(ontology.atom_count());
  return std::move(result.model);
}

/// Full audit of one ingested record: consistency gate, entailed set, the
/// four-way classification of every diagnosis, and optional countermodels
/// for the non-entailed ones.
inline Verdict classify(const ReportRecord& record, const Ontology& ontology,
                        bool emit_countermodels = false) {
  Verdict verdict;
  verdict.id = record.id;
  verdict.claimed = record.claimed;
  verdict.countermodels_emitted = emit_countermodels;

  if (!check_consistency(record.evidence, ontology)) {
    verdict.status = VerdictStatus::Inconsistent;
    return verdict;
  }
  verdict.status = VerdictStatus::Consistent;

  std::vector<bool> is_claimed(ontology.diagnosis_count(), false);
  for (int d : record.claimed) is_claimed[d] = true;

  verdict.per_diagnosis.reserve(ontology.diagnosis_count());
  for (int d = 0; d < ontology.diagnosis_count(); ++d) {
    SatResult check = detail::entailment_check(record.evidence, ontology, d);
    const bool is_entailed = !check.satisfiable;
    if (is_entailed) {
      verdict.entailed.push_back(d);
      if (is_claimed[d]) verdict.verified.push_back(d);
    } else if (emit_countermodels) {
      check.model.resize(ontology.atom_count());
      verdict.countermodels.emplace_back(d, std::move(check.model));
    }
    verdict.per_diagnosis.push_back(
        is_claimed[d] ? (is_entailed ? TaxonomyClass::Supported
                                     : TaxonomyClass::Unsupported)
                      : (is_entailed ? TaxonomyClass::Missed
                                     : TaxonomyClass::CorrectlyExcluded));
  }
  return verdict;
}

/// The claims that survive entailment filtering: claimed ∩ E_V, empty for
/// inconsistent reports.
inline std::vector<int> filter_verified(const ReportRecord& record,
                                        const Ontology& ontology) {
  return classify(record, ontology).verified;
}

inline Verdict make_malformed_verdict(std::string id) {
  Verdict verdict;
  verdict.id = std::move(id);
  verdict.status = VerdictStatus::Malformed;
  return verdict;
}

/// Serialization used by the verdict JSONL stream. Field order is fixed;
/// sets are rendered as name arrays in declaration order.
inline nlohmann::ordered_json verdict_to_json(const Verdict& verdict,
                                              const Ontology& ontology) {
  nlohmann::ordered_json out;
  out["id"] = verdict.id;
  out["status"] = status_name(verdict.status);
  auto names = [&](const std::vector<int>& ordinals) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (int d : ordinals) arr.push_back(ontology.diagnosis_name(d));
    return arr;
  };
  out["entailed"] = names(verdict.entailed);
  out["claimed"] = names(verdict.claimed);
  out["verified"] = names(verdict.verified);
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (std::size_t d = 0; d < verdict.per_diagnosis.size(); ++d)
    per[ontology.diagnosis_name(static_cast<int>(d))] =
        taxonomy_name(verdict.per_diagnosis[d]);
  out["per_diagnosis"] = std::move(per);
  if (verdict.countermodels_emitted && verdict.status == VerdictStatus::Consistent) {
    nlohmann::ordered_json models = nlohmann::ordered_json::object();
    for (const auto& [d, model] : verdict.countermodels) {
      nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
      for (const Atom& atom : ontology.atoms())
        assignment[atom.name] = model[atom.index] == 1;
      models[ontology.diagnosis_name(d)] = std::move(assignment);
    }
    out["countermodels"] = std::move(models);
  }
  return out;
}

}  // namespace entail
