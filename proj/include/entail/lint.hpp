#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entail/evidence.hpp"
#include "entail/ontology.hpp"
#include "entail/verifier.hpp"

namespace entail {

enum class Reachability : std::uint8_t {
  EntailableBySomeEvidence,
  NeverEntailed,
  AlwaysEntailed,
  Unknown,
};

inline const char* reachability_name(Reachability r) {
  switch (r) {
    case Reachability::EntailableBySomeEvidence: return "entailable_by_some_evidence";
    case Reachability::NeverEntailed: return "never_entailed";
    case Reachability::AlwaysEntailed: return "always_entailed";
    case Reachability::Unknown: return "unknown";
  }
  return "?";
}

struct DiagnosisLint {
  int diagnosis = 0;  // ordinal
  Reachability reachability = Reachability::Unknown;
  /// First evidence vector (in enumeration order) that entails the
  /// diagnosis, set whenever one exists.
  std::optional<EvidenceAssignment> witness;
};

struct LintReport {
  bool global_consistent = false;
  std::vector<DiagnosisLint> diagnoses;
  std::vector<std::string> warnings;
};

/// Audits a knowledge base: is ⋀K satisfiable at all, and which diagnoses
/// can ever / always / never be entailed by consistent evidence. The
/// reachability sweep enumerates all 2^|F| evidence vectors in lexicographic
/// order (all-false first); beyond enumeration_cap findings it degrades to
/// Unknown with a warning instead.
inline LintReport lint_kb(const Ontology& ontology, int enumeration_cap = 20) {
  LintReport report;
  report.diagnoses.reserve(ontology.diagnosis_count());
  for (int d = 0; d < ontology.diagnosis_count(); ++d)
    report.diagnoses.push_back(DiagnosisLint{d, Reachability::Unknown, std::nullopt});

  // ⋀K alone: with no rules the knowledge base is trivially consistent.
  Formula rules = Formula::constant(true);
  if (!ontology.rules().empty()) {
    std::vector<Formula> bodies;
    for (const Rule& rule : ontology.rules()) bodies.push_back(rule.body);
    rules = bodies.size() == 1 ? bodies.front()
                               : Formula::conjunction(std::move(bodies));
  }
  report.global_consistent =
      dpll_sat(tseitin_compile(rules, ontology.atom_count())).satisfiable;

  if (!report.global_consistent) {
    report.warnings.push_back(
        "knowledge base is unsatisfiable; reachability not evaluated");
    return report;
  }
  const int nf = ontology.finding_count();
  if (nf > enumeration_cap) {
    report.warnings.push_back("reachability needs 2^" + std::to_string(nf) +
                              " evidence vectors, above the cap of 2^" +
                              std::to_string(enumeration_cap) +
                              "; marking all diagnoses unknown");
    return report;
  }

  const int nd = ontology.diagnosis_count();
  std::vector<std::uint8_t> entailed_by_all(nd, 1);
  for (std::uint64_t mask = 0; mask < (1ull << nf); ++mask) {
    EvidenceAssignment evidence(nf);
    for (int f = 0; f < nf; ++f)
      evidence.values[f] = static_cast<std::uint8_t>((mask >> (nf - 1 - f)) & 1u);
    if (!check_consistency(evidence, ontology)) continue;
    for (int d = 0; d < nd; ++d) {
      const bool forced =
          !detail::entailment_check(evidence, ontology, d).satisfiable;
      if (forced && !report.diagnoses[d].witness)
        report.diagnoses[d].witness = evidence;
      if (!forced) entailed_by_all[d] = 0;
    }
  }
  for (int d = 0; d < nd; ++d) {
    auto& entry = report.diagnoses[d];
    if (!entry.witness)
      entry.reachability = Reachability::NeverEntailed;
    else
      entry.reachability = entailed_by_all[d] ? Reachability::AlwaysEntailed
                                              : Reachability::EntailableBySomeEvidence;
  }
  for (int d = 0; d < nd; ++d)
    if (report.diagnoses[d].reachability == Reachability::NeverEntailed)
      report.warnings.push_back("diagnosis '" + ontology.diagnosis_name(d) +
                                "' is never entailed by any consistent evidence");
  return report;
}

inline nlohmann::ordered_json lint_to_json(const LintReport& report,
                                           const Ontology& ontology) {
  nlohmann::ordered_json out;
  out["global_consistent"] = report.global_consistent;
  nlohmann::ordered_json diagnoses = nlohmann::ordered_json::object();
  for (const DiagnosisLint& entry : report.diagnoses) {
    nlohmann::ordered_json item;
    item["reachability"] = reachability_name(entry.reachability);
    if (entry.witness) {
      nlohmann::ordered_json witness = nlohmann::ordered_json::object();
      for (int f = 0; f < ontology.finding_count(); ++f)
        witness[ontology.finding_name(f)] = entry.witness->value(f);
      item["witness"] = std::move(witness);
    } else {
      item["witness"] = nullptr;
    }
    diagnoses[ontology.diagnosis_name(entry.diagnosis)] = std::move(item);
  }
  out["diagnoses"] = std::move(diagnoses);
  out["warnings"] = report.warnings;
  return out;
}

}  // namespace entail
