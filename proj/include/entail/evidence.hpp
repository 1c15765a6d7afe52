#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entail/logic.hpp"
#include "entail/ontology.hpp"
#include "entail/text.hpp"

namespace entail {

/// Closed-world evidence vector: one value per finding, indexed by finding
/// ordinal. Anything not explicitly affirmed is 0.
struct EvidenceAssignment {
  std::vector<std::uint8_t> values;

  EvidenceAssignment() = default;
  explicit EvidenceAssignment(std::size_t finding_count) : values(finding_count, 0) {}

  bool value(int finding_ordinal) const { return values.at(finding_ordinal) != 0; }
  std::size_t size() const { return values.size(); }

  friend bool operator==(const EvidenceAssignment&, const EvidenceAssignment&) = default;
};

/// A record ready for verification: claimed diagnoses and the evidence
/// vector are filled in by ingest_record(); raw text is kept for the
/// lexical metrics.
struct ReportRecord {
  std::string id;
  std::optional<std::string> findings_text;
  std::optional<std::string> impression_text;
  std::optional<std::string> reference_findings_text;
  std::optional<std::string> reference_impression_text;
  /// Ground-truth labels by diagnosis ordinal, completed to all diagnoses
  /// (names missing from the input map default to absent).
  std::optional<std::vector<std::uint8_t>> labels;

  EvidenceAssignment evidence;
  std::vector<int> claimed;  // diagnosis ordinals, ascending
};

class MalformedRecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
struct TokenizedPhrase {
  std::string text;
  std::vector<std::string> tokens;
};

inline TokenizedPhrase make_phrase(std::string_view text) {
  TokenizedPhrase p{lowercase_ascii(text), tokenize(text)};
  if (p.tokens.empty())
    throw std::invalid_argument("phrase '" + std::string(text) + "' has no tokens");
  return p;
}
}  // namespace detail

/// Phrase tables and negation configuration for the deterministic text
/// extractor. Phrase lists are aligned with the ontology's finding and
/// diagnosis ordinals.
struct Lexicon {
  int negation_window = 5;
  std::vector<detail::TokenizedPhrase> negation_cues;
  std::vector<detail::TokenizedPhrase> hedge_cues;
  std::vector<std::vector<detail::TokenizedPhrase>> finding_phrases;
  std::vector<std::vector<detail::TokenizedPhrase>> diagnosis_phrases;

  /// Empty phrase tables with the default cue lists.
  static Lexicon with_defaults(const Ontology& ontology) {
    Lexicon lex;
    for (const char* cue : {"no", "not", "without", "absent", "negative for",
                            "free of", "resolved"})
      lex.negation_cues.push_back(detail::make_phrase(cue));
    for (const char* cue : {"possible", "possibly", "likely", "cannot exclude",
                            "cannot be excluded", "may represent", "suspected",
                            "questionable"})
      lex.hedge_cues.push_back(detail::make_phrase(cue));
    lex.finding_phrases.resize(ontology.finding_count());
    lex.diagnosis_phrases.resize(ontology.diagnosis_count());
    return lex;
  }
};

/// Loads a lexicon from its JSON form:
///   {"negation_cues": [...], "negation_window": n,
///    "findings": {name: [phrases]}, "diagnoses": {name: [phrases]},
///    "hedge_cues": [...]}            (hedge_cues optional)
/// Omitted cue lists keep the defaults. Unknown predicate names are errors.
inline Lexicon parse_lexicon(const nlohmann::json& doc, const Ontology& ontology) {
  if (!doc.is_object()) throw std::invalid_argument("lexicon must be a JSON object");
  Lexicon lex = Lexicon::with_defaults(ontology);

  if (doc.contains("negation_window")) {
    if (!doc["negation_window"].is_number_integer() ||
        doc["negation_window"].get<int>() < 0)
      throw std::invalid_argument("negation_window must be a non-negative integer");
    lex.negation_window = doc["negation_window"].get<int>();
  }
  auto read_cues = [&](const char* key, std::vector<detail::TokenizedPhrase>& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_array())
      throw std::invalid_argument(std::string(key) + " must be an array of strings");
    out.clear();
    for (const auto& item : doc[key])
      out.push_back(detail::make_phrase(item.get<std::string>()));
  };
  read_cues("negation_cues", lex.negation_cues);
  read_cues("hedge_cues", lex.hedge_cues);

  auto read_phrases = [&](const char* key, bool findings) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_object())
      throw std::invalid_argument(std::string(key) + " must be an object");
    for (const auto& [name, phrases] : doc[key].items()) {
      const auto ordinal = findings ? ontology.find_finding(name)
                                    : ontology.find_diagnosis(name);
      if (!ordinal)
        throw std::invalid_argument("lexicon names unknown predicate '" + name + "'");
      if (!phrases.is_array() || phrases.empty())
        throw std::invalid_argument("phrase list for '" + name +
                                    "' must be a non-empty array");
      auto& slot = findings ? lex.finding_phrases[*ordinal]
                            : lex.diagnosis_phrases[*ordinal];
      for (const auto& phrase : phrases)
        slot.push_back(detail::make_phrase(phrase.get<std::string>()));
    }
  };
  read_phrases("findings", true);
  read_phrases("diagnoses", false);
  return lex;
}

namespace detail {

inline bool tokens_match_at(const std::vector<std::string>& tokens, std::size_t pos,
                            const std::vector<std::string>& phrase) {
  if (pos + phrase.size() > tokens.size()) return false;
  for (std::size_t i = 0; i < phrase.size(); ++i)
    if (tokens[pos + i] != phrase[i]) return false;
  return true;
}

/// True when some occurrence of the phrase in the sentence has no negation
/// or hedge cue ending within the `window` tokens right before it.
inline bool phrase_affirmed_in(const std::vector<std::string>& sentence,
                               const std::vector<std::string>& phrase,
                               const Lexicon& lexicon) {
  for (std::size_t start = 0; start + phrase.size() <= sentence.size(); ++start) {
    if (!tokens_match_at(sentence, start, phrase)) continue;
    bool blocked = false;
    auto check_cues = [&](const std::vector<TokenizedPhrase>& cues) {
      for (const TokenizedPhrase& cue : cues) {
        const std::size_t len = cue.tokens.size();
        if (len > start) continue;
        // Cue may end at positions start-window .. start-1.
        for (std::size_t end = start; end-- > 0;) {
          if (start - end > static_cast<std::size_t>(lexicon.negation_window)) break;
          if (end + 1 < len) continue;  // cue does not fit ending here
          if (tokens_match_at(sentence, end + 1 - len, cue.tokens)) {
            blocked = true;
            return;
          }
        }
      }
    };
    check_cues(lexicon.negation_cues);
    if (!blocked) check_cues(lexicon.hedge_cues);
    if (!blocked) return true;
  }
  return false;
}

inline bool any_phrase_affirmed(const std::vector<std::vector<std::string>>& sentences,
                                const std::vector<TokenizedPhrase>& phrases,
                                const Lexicon& lexicon) {
  for (const auto& sentence : sentences)
    for (const TokenizedPhrase& phrase : phrases)
      if (phrase_affirmed_in(sentence, phrase.tokens, lexicon)) return true;
  return false;
}

}  // namespace detail

/// Deterministic closed-world extraction: a finding is 1 iff one of its
/// phrases occurs in some sentence with no negation/hedge cue in the
/// preceding window; everything else (negated, hedged, unmentioned) is 0.
inline EvidenceAssignment extract_findings(std::string_view text, const Lexicon& lexicon,
                                           const Ontology& ontology) {
  const auto sentences = sentence_tokens(text);
  EvidenceAssignment evidence(ontology.finding_count());
  for (int f = 0; f < ontology.finding_count(); ++f)
    if (detail::any_phrase_affirmed(sentences, lexicon.finding_phrases[f], lexicon))
      evidence.values[f] = 1;
  return evidence;
}

/// Same matching semantics as extract_findings, over the diagnosis phrase
/// table. Returns affirmed diagnosis ordinals, ascending.
inline std::vector<int> extract_diagnoses(std::string_view text, const Lexicon& lexicon,
                                          const Ontology& ontology) {
  const auto sentences = sentence_tokens(text);
  std::vector<int> claimed;
  for (int d = 0; d < ontology.diagnosis_count(); ++d)
    if (detail::any_phrase_affirmed(sentences, lexicon.diagnosis_phrases[d], lexicon))
      claimed.push_back(d);
  return claimed;
}

namespace detail {

inline const nlohmann::ordered_json* optional_field(const nlohmann::ordered_json& raw,
                                                    const char* key) {
  auto it = raw.find(key);
  if (it == raw.end() || it->is_null()) return nullptr;
  return &*it;
}

inline std::optional<std::string> optional_text(const nlohmann::ordered_json& raw,
                                                const char* key) {
  const auto* field = optional_field(raw, key);
  if (!field) return std::nullopt;
  if (!field->is_string())
    throw MalformedRecordError(std::string(key) + " must be a string");
  return field->get<std::string>();
}

}  // namespace detail

/// Builds a verification-ready record from one JSONL object. Structured
/// `findings` / `impression_diagnoses` win over the free-text fields; the
/// closed-world assumption fills every unmentioned finding with 0 and every
/// unlabelled diagnosis with absent. Schema violations and unknown
/// predicate names raise MalformedRecordError.
inline ReportRecord ingest_record(const nlohmann::ordered_json& raw,
                                  const Ontology& ontology,
                                  const Lexicon* lexicon = nullptr) {
  if (!raw.is_object()) throw MalformedRecordError("record must be a JSON object");

  ReportRecord record;
  const auto* id = detail::optional_field(raw, "id");
  if (!id || !id->is_string() || id->get<std::string>().empty())
    throw MalformedRecordError("record needs a non-empty string 'id'");
  record.id = id->get<std::string>();

  record.findings_text = detail::optional_text(raw, "findings_text");
  record.impression_text = detail::optional_text(raw, "impression_text");
  record.reference_findings_text = detail::optional_text(raw, "reference_findings_text");
  record.reference_impression_text =
      detail::optional_text(raw, "reference_impression_text");

  // Evidence: structured map, else extraction from text.
  if (const auto* findings = detail::optional_field(raw, "findings")) {
    if (!findings->is_object())
      throw MalformedRecordError("findings must be an object of booleans");
    record.evidence = EvidenceAssignment(ontology.finding_count());
    for (const auto& [name, value] : findings->items()) {
      const auto ordinal = ontology.find_finding(name);
      if (!ordinal)
        throw MalformedRecordError("unknown finding '" + name + "'");
      if (!value.is_boolean())
        throw MalformedRecordError("finding '" + name + "' must be a boolean");
      record.evidence.values[*ordinal] = value.get<bool>() ? 1 : 0;
    }
  } else if (record.findings_text) {
    if (!lexicon)
      throw MalformedRecordError("findings_text needs a lexicon for extraction");
    record.evidence = extract_findings(*record.findings_text, *lexicon, ontology);
  } else {
    throw MalformedRecordError("record has neither findings nor findings_text");
  }

  // Claimed diagnoses: structured list, else extraction from text.
  if (const auto* diagnoses = detail::optional_field(raw, "impression_diagnoses")) {
    if (!diagnoses->is_array())
      throw MalformedRecordError("impression_diagnoses must be an array of strings");
    std::vector<std::uint8_t> seen(ontology.diagnosis_count(), 0);
    for (const auto& name : *diagnoses) {
      if (!name.is_string())
        throw MalformedRecordError("impression_diagnoses entries must be strings");
      const auto ordinal = ontology.find_diagnosis(name.get<std::string>());
      if (!ordinal)
        throw MalformedRecordError("unknown diagnosis '" + name.get<std::string>() + "'");
      seen[*ordinal] = 1;
    }
    for (int d = 0; d < ontology.diagnosis_count(); ++d)
      if (seen[d]) record.claimed.push_back(d);
  } else if (record.impression_text) {
    if (!lexicon)
      throw MalformedRecordError("impression_text needs a lexicon for extraction");
    record.claimed = extract_diagnoses(*record.impression_text, *lexicon, ontology);
  } else {
    throw MalformedRecordError(
        "record has neither impression_diagnoses nor impression_text");
  }

  if (const auto* labels = detail::optional_field(raw, "labels")) {
    if (!labels->is_object())
      throw MalformedRecordError("labels must be an object of booleans");
    std::vector<std::uint8_t> values(ontology.diagnosis_count(), 0);
    for (const auto& [name, value] : labels->items()) {
      const auto ordinal = ontology.find_diagnosis(name);
      if (!ordinal)
        throw MalformedRecordError("unknown diagnosis '" + name + "' in labels");
      if (!value.is_boolean())
        throw MalformedRecordError("label '" + name + "' must be a boolean");
      values[*ordinal] = value.get<bool>() ? 1 : 0;
    }
    record.labels = std::move(values);
  }
  return record;
}

/// The propositional context of an evidence vector: the conjunction of all
/// affirmed findings and the negations of all absent ones. Empty ontologies
/// yield the constant true.
inline Formula phi(const EvidenceAssignment& evidence, const Ontology& ontology) {
  if (static_cast<int>(evidence.size()) != ontology.finding_count())
    throw std::invalid_argument("evidence vector does not cover the findings");
  std::vector<Formula> literals;
  literals.reserve(evidence.size());
  for (int f = 0; f < ontology.finding_count(); ++f)
    if (evidence.value(f)) literals.push_back(Formula::atom(ontology.finding_atom(f)));
  for (int f = 0; f < ontology.finding_count(); ++f)
    if (!evidence.value(f))
      literals.push_back(Formula::negation(Formula::atom(ontology.finding_atom(f))));
  if (literals.empty()) return Formula::constant(true);
  if (literals.size() == 1) return literals.front();
  return Formula::conjunction(std::move(literals));
}

}  // namespace entail
