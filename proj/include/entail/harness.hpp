#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entail/evidence.hpp"
#include "entail/kbl.hpp"
#include "entail/lexical.hpp"
#include "entail/lint.hpp"
#include "entail/metrics.hpp"
#include "entail/ontology.hpp"
#include "entail/verifier.hpp"

namespace entail {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

/// Unrecoverable condition (unreadable file, broken knowledge base, bad
/// configuration). The CLI maps it to exit code 1.
class FatalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string kb_path;
  std::string lexicon_path;
  std::string in_path;
  std::string out_path;
  std::string labels_path;
  std::string csv_path;
  std::string log_path;
  int jobs = 1;
  std::uint64_t seed = 0;
  bool emit_countermodels = false;
  bool compare_filtered = false;
  long synth_n = 0;
  double halluc_rate = 0.0;
  double omit_rate = 0.0;
};

/// Stochastic choices made for one synthetic report. The claimed set is
/// always (entailed \ omissions) ∪ hallucinations, and hallucinations never
/// intersect the entailed set.
struct InjectionRecord {
  std::string id;
  std::vector<int> entailed;
  std::vector<int> hallucinations;
  std::vector<int> omissions;
};

// ---------------------------------------------------------------------------
// File plumbing

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FatalError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Input lines without their terminators; CR before LF is stripped, empty
/// lines are dropped.
inline std::vector<std::string> read_jsonl_lines(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string line = text.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(std::move(line));
      start = i + 1;
    }
  }
  return lines;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FatalError("cannot write '" + path + "'");
  out << content;
  if (!out) throw FatalError("write to '" + path + "' failed");
}

inline std::string dataset_stem(const std::string& path) {
  if (path.empty()) return "-";
  return std::filesystem::path(path).stem().string();
}

}  // namespace detail

inline Ontology load_kb_file(const std::string& path) {
  const std::string text = detail::read_file(path);
  try {
    return parse_kb(text);
  } catch (const KbParseError& e) {
    throw FatalError(path + ":" + e.what());
  }
}

inline Lexicon load_lexicon_file(const std::string& path, const Ontology& ontology) {
  const std::string text = detail::read_file(path);
  try {
    return parse_lexicon(nlohmann::json::parse(text), ontology);
  } catch (const FatalError&) {
    throw;
  } catch (const std::exception& e) {
    throw FatalError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Deterministic parallel map

namespace detail {

/// Applies fn(i) over [0, n) with `jobs` workers and collects the results
/// by index, so the output order never depends on scheduling.
template <typename T, typename Fn>
std::vector<T> map_ordered(std::size_t n, int jobs, Fn&& fn) {
  std::vector<T> results(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const int worker_count = std::min<std::size_t>(jobs, n);
  workers.reserve(worker_count);
  for (int w = 0; w < worker_count; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        results[i] = fn(i);
      }
    });
  }
  for (auto& worker : workers) worker.join();
  return results;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// audit

namespace detail {

struct AuditLine {
  std::string text;
  VerdictStatus status = VerdictStatus::Malformed;
};

/// Parses and classifies one input line. Anything that fails validation
/// becomes a malformed verdict rather than aborting the batch.
inline AuditLine audit_one(const std::string& line, const Ontology& ontology,
                           const Lexicon* lexicon,
                           const nlohmann::ordered_json* labels_override,
                           bool emit_countermodels) {
  std::string id;
  try {
    nlohmann::ordered_json raw = nlohmann::ordered_json::parse(line);
    if (raw.is_object() && raw.contains("id") && raw["id"].is_string())
      id = raw["id"].get<std::string>();
    if (labels_override && raw.is_object()) raw["labels"] = *labels_override;
    const ReportRecord record = ingest_record(raw, ontology, lexicon);
    const Verdict verdict = classify(record, ontology, emit_countermodels);
    return {verdict_to_json(verdict, ontology).dump(), verdict.status};
  } catch (const std::exception&) {
    const Verdict verdict = make_malformed_verdict(id);
    return {verdict_to_json(verdict, ontology).dump(), VerdictStatus::Malformed};
  }
}

/// id → labels object from a JSONL file (records without labels are
/// ignored).
inline std::unordered_map<std::string, nlohmann::ordered_json> load_labels_map(
    const std::string& path) {
  std::unordered_map<std::string, nlohmann::ordered_json> map;
  for (const std::string& line : read_jsonl_lines(path)) {
    nlohmann::ordered_json raw;
    try {
      raw = nlohmann::ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw FatalError(path + ": invalid JSON line: " + e.what());
    }
    if (!raw.is_object() || !raw.contains("id") || !raw["id"].is_string()) continue;
    if (!raw.contains("labels") || !raw["labels"].is_object()) continue;
    map[raw["id"].get<std::string>()] = raw["labels"];
  }
  return map;
}

}  // namespace detail

/// Audits a report corpus: one verdict JSONL line per input line, in input
/// order, plus a status summary on stderr. Exit code 2 when any record was
/// malformed, 0 otherwise.
inline int run_audit(const RunConfig& config) {
  const Ontology ontology = load_kb_file(config.kb_path);
  std::optional<Lexicon> lexicon;
  if (!config.lexicon_path.empty())
    lexicon = load_lexicon_file(config.lexicon_path, ontology);
  std::unordered_map<std::string, nlohmann::ordered_json> labels_map;
  if (!config.labels_path.empty())
    labels_map = detail::load_labels_map(config.labels_path);

  const std::vector<std::string> lines = detail::read_jsonl_lines(config.in_path);
  auto results = detail::map_ordered<detail::AuditLine>(
      lines.size(), config.jobs, [&](std::size_t i) {
        const nlohmann::ordered_json* labels_override = nullptr;
        if (!labels_map.empty()) {
          // Match by id without a full parse first: audit_one re-parses.
          try {
            auto raw = nlohmann::ordered_json::parse(lines[i]);
            if (raw.is_object() && raw.contains("id") && raw["id"].is_string()) {
              auto it = labels_map.find(raw["id"].get<std::string>());
              if (it != labels_map.end()) labels_override = &it->second;
            }
          } catch (const std::exception&) {
          }
        }
        return detail::audit_one(lines[i], ontology, lexicon ? &*lexicon : nullptr,
                                 labels_override, config.emit_countermodels);
      });

  std::string out;
  long n_malformed = 0, n_inconsistent = 0, n_consistent = 0;
  for (const auto& result : results) {
    out += result.text;
    out += '\n';
    switch (result.status) {
      case VerdictStatus::Consistent: ++n_consistent; break;
      case VerdictStatus::Inconsistent: ++n_inconsistent; break;
      case VerdictStatus::Malformed: ++n_malformed; break;
    }
  }
  detail::write_file(config.out_path, out);
  std::cerr << "audit: " << results.size() << " records (" << n_consistent
            << " consistent, " << n_inconsistent << " inconsistent, " << n_malformed
            << " malformed)\n";
  return n_malformed > 0 ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// filter

/// Rewrites each record's impression_diagnoses to the verified subset.
/// Inconsistent reports are emptied and flagged in a verification_status
/// sidecar field; records that fail to parse pass through unchanged and are
/// counted. Every other field is preserved.
inline int run_filter(const RunConfig& config) {
  const Ontology ontology = load_kb_file(config.kb_path);
  std::optional<Lexicon> lexicon;
  if (!config.lexicon_path.empty())
    lexicon = load_lexicon_file(config.lexicon_path, ontology);

  const std::vector<std::string> lines = detail::read_jsonl_lines(config.in_path);
  struct FilterLine {
    std::string text;
    bool malformed = false;
  };
  auto results = detail::map_ordered<FilterLine>(
      lines.size(), config.jobs, [&](std::size_t i) -> FilterLine {
        nlohmann::ordered_json raw;
        try {
          raw = nlohmann::ordered_json::parse(lines[i]);
        } catch (const std::exception&) {
          return {lines[i], true};
        }
        try {
          const ReportRecord record =
              ingest_record(raw, ontology, lexicon ? &*lexicon : nullptr);
          const Verdict verdict = classify(record, ontology);
          nlohmann::ordered_json names = nlohmann::ordered_json::array();
          for (int d : verdict.verified) names.push_back(ontology.diagnosis_name(d));
          raw["impression_diagnoses"] = std::move(names);
          if (verdict.status == VerdictStatus::Inconsistent)
            raw["verification_status"] = "inconsistent";
          return {raw.dump(), false};
        } catch (const std::exception&) {
          raw["verification_status"] = "malformed";
          return {raw.dump(), true};
        }
      });

  std::string out;
  long n_malformed = 0;
  for (const auto& result : results) {
    out += result.text;
    out += '\n';
    if (result.malformed) ++n_malformed;
  }
  detail::write_file(config.out_path, out);
  std::cerr << "filter: " << results.size() << " records (" << n_malformed
            << " malformed)\n";
  return n_malformed > 0 ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// metrics

namespace detail {

/// Reads one line of the verdict JSONL stream back into a Verdict.
inline Verdict parse_verdict_line(const std::string& line, const Ontology& ontology) {
  nlohmann::ordered_json raw;
  try {
    raw = nlohmann::ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw FatalError(std::string("invalid verdict JSON: ") + e.what());
  }
  Verdict verdict;
  if (!raw.is_object() || !raw.contains("id") || !raw.contains("status"))
    throw FatalError("verdict line lacks id/status");
  verdict.id = raw["id"].get<std::string>();
  const std::string status = raw["status"].get<std::string>();
  if (status == "consistent") verdict.status = VerdictStatus::Consistent;
  else if (status == "inconsistent") verdict.status = VerdictStatus::Inconsistent;
  else if (status == "malformed") verdict.status = VerdictStatus::Malformed;
  else throw FatalError("unknown verdict status '" + status + "'");
  auto read_set = [&](const char* key, std::vector<int>& out) {
    if (!raw.contains(key)) return;
    for (const auto& name : raw[key]) {
      const auto ordinal = ontology.find_diagnosis(name.get<std::string>());
      if (!ordinal)
        throw FatalError("verdict names unknown diagnosis '" +
                         name.get<std::string>() + "'");
      out.push_back(*ordinal);
    }
  };
  read_set("entailed", verdict.entailed);
  read_set("claimed", verdict.claimed);
  read_set("verified", verdict.verified);
  return verdict;
}

/// The filtered view of a verdict: claims replaced by the verified subset.
inline Verdict filtered_view(const Verdict& verdict) {
  Verdict out = verdict;
  out.claimed = verdict.verified;
  out.verified = verdict.verified;
  return out;
}

/// Parses a "labels" JSON object into a full per-ordinal vector (absent
/// names default to 0).
inline std::vector<std::uint8_t> labels_vector(const nlohmann::ordered_json& labels,
                                               const Ontology& ontology) {
  std::vector<std::uint8_t> out(ontology.diagnosis_count(), 0);
  for (const auto& [name, value] : labels.items()) {
    const auto ordinal = ontology.find_diagnosis(name);
    if (!ordinal) throw FatalError("labels name unknown diagnosis '" + name + "'");
    if (!value.is_boolean())
      throw FatalError("label '" + name + "' must be a boolean");
    out[*ordinal] = value.get<bool>() ? 1 : 0;
  }
  return out;
}

/// Entailment summary plus, when labels are available, confusion of the
/// chosen predicted set (claimed or verified) against them.
inline MetricsSummary build_summary(
    const std::vector<Verdict>& verdicts,
    const std::unordered_map<std::string, nlohmann::ordered_json>& labels_map,
    const Ontology& ontology, bool use_verified) {
  MetricsSummary summary = aggregate(verdicts);
  std::vector<std::vector<int>> predicted;
  std::vector<std::vector<std::uint8_t>> labels;
  for (const Verdict& verdict : verdicts) {
    if (verdict.status == VerdictStatus::Malformed) continue;
    auto it = labels_map.find(verdict.id);
    if (it == labels_map.end()) continue;
    predicted.push_back(use_verified ? verdict.verified : verdict.claimed);
    labels.push_back(labels_vector(it->second, ontology));
  }
  if (!labels.empty())
    summary.labels = confusion_vs_labels(predicted, labels, ontology);
  return summary;
}

}  // namespace detail

/// Computes the metrics JSON (and optional CSV) from an audited verdict
/// stream. With --compare-filtered the filtered (ours) variant and the
/// ours − vlm deltas are included as well.
inline int run_metrics(const RunConfig& config) {
  const Ontology ontology = load_kb_file(config.kb_path);
  std::unordered_map<std::string, nlohmann::ordered_json> labels_map;
  if (!config.labels_path.empty())
    labels_map = detail::load_labels_map(config.labels_path);

  std::vector<Verdict> verdicts;
  for (const std::string& line : detail::read_jsonl_lines(config.in_path))
    verdicts.push_back(detail::parse_verdict_line(line, ontology));

  const MetricsSummary vlm =
      detail::build_summary(verdicts, labels_map, ontology, false);

  nlohmann::ordered_json out;
  const std::string dataset = detail::dataset_stem(config.in_path);
  out["dataset"] = dataset;
  out["vlm"] = summary_to_json(vlm, ontology);

  std::string csv = metrics_csv_header() + "\n";
  csv += metrics_csv_row(dataset, "vlm", vlm) + "\n";

  if (config.compare_filtered) {
    std::vector<Verdict> filtered;
    filtered.reserve(verdicts.size());
    for (const Verdict& verdict : verdicts)
      filtered.push_back(detail::filtered_view(verdict));
    const MetricsSummary ours =
        detail::build_summary(filtered, labels_map, ontology, false);
    out["ours"] = summary_to_json(ours, ontology);
    out["delta"] = delta_to_json(delta(ours, vlm));
    csv += metrics_csv_row(dataset, "ours", ours) + "\n";
  }

  detail::write_file(config.out_path, out.dump(2) + "\n");
  if (!config.csv_path.empty()) detail::write_file(config.csv_path, csv);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

namespace detail {

/// Fixed draw protocol on top of the standard Mersenne engine so corpora
/// are bit-identical everywhere for a given seed.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  bool bit() { return (engine_() & 1ull) != 0; }

  bool bernoulli(double p) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u < p;
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string synth_id(long index) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "synth-%06ld", index);
  return buffer;
}

}  // namespace detail

/// Generates a synthetic corpus with known failure injections. Evidence is
/// drawn uniformly from the consistent vectors by rejection sampling;
/// entailed diagnoses are omitted with probability omit_rate and
/// non-entailed ones claimed with probability halluc_rate. Labels are the
/// entailed set, and every stochastic choice lands in the injection log.
inline int run_synth(const RunConfig& config) {
  const Ontology ontology = load_kb_file(config.kb_path);
  if (ontology.finding_count() > 20)
    throw FatalError("synth needs at most 20 findings for rejection sampling");
  if (config.halluc_rate < 0.0 || config.halluc_rate > 1.0 ||
      config.omit_rate < 0.0 || config.omit_rate > 1.0)
    throw FatalError("rates must lie in [0,1]");
  {
    const LintReport lint = lint_kb(ontology, 0);  // consistency check only
    if (!lint.global_consistent)
      throw FatalError("knowledge base is unsatisfiable; no consistent evidence exists");
  }

  detail::SynthRng rng(config.seed);
  const int nf = ontology.finding_count();
  const int nd = ontology.diagnosis_count();
  std::string reports, log;
  for (long i = 1; i <= config.synth_n; ++i) {
    EvidenceAssignment evidence(nf);
    bool accepted = false;
    for (long attempt = 0; attempt < 1000000; ++attempt) {
      for (int f = 0; f < nf; ++f)
        evidence.values[f] = rng.bit() ? 1 : 0;
      if (check_consistency(evidence, ontology)) {
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw FatalError("rejection sampling found no consistent evidence vector");

    std::vector<std::uint8_t> entailed(nd, 0);
    for (int d = 0; d < nd; ++d)
      if (!detail::entailment_check(evidence, ontology, d).satisfiable)
        entailed[d] = 1;

    InjectionRecord injection;
    injection.id = detail::synth_id(i);
    std::vector<int> claimed;
    for (int d = 0; d < nd; ++d) {
      if (entailed[d]) {
        injection.entailed.push_back(d);
        if (rng.bernoulli(1.0 - config.omit_rate))
          claimed.push_back(d);
        else
          injection.omissions.push_back(d);
      } else if (rng.bernoulli(config.halluc_rate)) {
        claimed.push_back(d);
        injection.hallucinations.push_back(d);
      }
    }

    nlohmann::ordered_json report;
    report["id"] = injection.id;
    nlohmann::ordered_json findings = nlohmann::ordered_json::object();
    for (int f = 0; f < nf; ++f)
      findings[ontology.finding_name(f)] = evidence.value(f);
    report["findings"] = std::move(findings);
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (int d : claimed) names.push_back(ontology.diagnosis_name(d));
    report["impression_diagnoses"] = std::move(names);
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (int d = 0; d < nd; ++d)
      labels[ontology.diagnosis_name(d)] = entailed[d] != 0;
    report["labels"] = std::move(labels);
    reports += report.dump();
    reports += '\n';

    nlohmann::ordered_json entry;
    entry["id"] = injection.id;
    auto name_array = [&](const std::vector<int>& ordinals) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (int d : ordinals) arr.push_back(ontology.diagnosis_name(d));
      return arr;
    };
    entry["entailed"] = name_array(injection.entailed);
    entry["hallucinations"] = name_array(injection.hallucinations);
    entry["omissions"] = name_array(injection.omissions);
    log += entry.dump();
    log += '\n';
  }

  detail::write_file(config.out_path, reports);
  const std::string log_path =
      config.log_path.empty() ? config.out_path + ".injections.jsonl" : config.log_path;
  detail::write_file(log_path, log);
  std::cerr << "synth: " << config.synth_n << " reports (seed " << config.seed
            << ", h=" << config.halluc_rate << ", m=" << config.omit_rate << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// lint / extract / lexical

/// Lints the knowledge base. Exit code 2 when ⋀K is unsatisfiable; the JSON
/// report goes to --out or stdout.
inline int run_lint(const RunConfig& config) {
  const Ontology ontology = load_kb_file(config.kb_path);
  const LintReport report = lint_kb(ontology);
  const std::string text = lint_to_json(report, ontology).dump(2) + "\n";
  if (config.out_path.empty())
    std::cout << text;
  else
    detail::write_file(config.out_path, text);
  for (const std::string& warning : report.warnings)
    std::cerr << "lint: warning: " << warning << "\n";
  return report.global_consistent ? kExitOk : kExitPartial;
}

/// Runs the lexicon extractor over the text fields of each record and emits
/// the structured form. Records without usable id/JSON are counted and
/// skipped (exit 2).
inline int run_extract(const RunConfig& config) {
  const Ontology ontology = load_kb_file(config.kb_path);
  if (config.lexicon_path.empty()) throw FatalError("extract needs --lexicon");
  const Lexicon lexicon = load_lexicon_file(config.lexicon_path, ontology);

  const std::vector<std::string> lines = detail::read_jsonl_lines(config.in_path);
  std::string out;
  long n_malformed = 0;
  for (const std::string& line : lines) {
    nlohmann::ordered_json raw;
    try {
      raw = nlohmann::ordered_json::parse(line);
    } catch (const std::exception&) {
      ++n_malformed;
      continue;
    }
    if (!raw.is_object() || !raw.contains("id") || !raw["id"].is_string()) {
      ++n_malformed;
      continue;
    }
    std::string findings_text, impression_text;
    if (raw.contains("findings_text") && raw["findings_text"].is_string())
      findings_text = raw["findings_text"].get<std::string>();
    if (raw.contains("impression_text") && raw["impression_text"].is_string())
      impression_text = raw["impression_text"].get<std::string>();

    const EvidenceAssignment evidence =
        extract_findings(findings_text, lexicon, ontology);
    const std::vector<int> claimed =
        extract_diagnoses(impression_text, lexicon, ontology);

    nlohmann::ordered_json entry;
    entry["id"] = raw["id"];
    nlohmann::ordered_json findings = nlohmann::ordered_json::object();
    for (int f = 0; f < ontology.finding_count(); ++f)
      findings[ontology.finding_name(f)] = evidence.value(f);
    entry["findings"] = std::move(findings);
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (int d : claimed) names.push_back(ontology.diagnosis_name(d));
    entry["impression_diagnoses"] = std::move(names);
    out += entry.dump();
    out += '\n';
  }
  detail::write_file(config.out_path, out);
  if (n_malformed > 0)
    std::cerr << "extract: skipped " << n_malformed << " malformed records\n";
  return n_malformed > 0 ? kExitPartial : kExitOk;
}

/// BLEU-4 and ROUGE-L of generated text against the reference fields, per
/// section. Pairs where either side is missing are skipped and counted.
inline int run_lexical(const RunConfig& config) {
  const std::vector<std::string> lines = detail::read_jsonl_lines(config.in_path);

  struct Section {
    std::vector<std::string> candidates, references;
    long skipped = 0;
  };
  Section findings, impression, full;

  for (const std::string& line : lines) {
    nlohmann::ordered_json raw;
    try {
      raw = nlohmann::ordered_json::parse(line);
    } catch (const std::exception&) {
      ++findings.skipped;
      ++impression.skipped;
      ++full.skipped;
      continue;
    }
    auto text = [&](const char* key) -> std::optional<std::string> {
      if (raw.is_object() && raw.contains(key) && raw[key].is_string())
        return raw[key].get<std::string>();
      return std::nullopt;
    };
    const auto ft = text("findings_text");
    const auto it = text("impression_text");
    const auto rft = text("reference_findings_text");
    const auto rit = text("reference_impression_text");
    if (ft && rft) {
      findings.candidates.push_back(*ft);
      findings.references.push_back(*rft);
    } else {
      ++findings.skipped;
    }
    if (it && rit) {
      impression.candidates.push_back(*it);
      impression.references.push_back(*rit);
    } else {
      ++impression.skipped;
    }
    if (ft && it && rft && rit) {
      full.candidates.push_back(*ft + "\n" + *it);
      full.references.push_back(*rft + "\n" + *rit);
    } else {
      ++full.skipped;
    }
  }

  nlohmann::ordered_json out;
  auto section_json = [](const Section& section) {
    nlohmann::ordered_json obj;
    obj["n"] = static_cast<long>(section.candidates.size());
    obj["skipped"] = section.skipped;
    obj["bleu"] = corpus_bleu(section.candidates, section.references);
    obj["rouge_l"] = corpus_rouge_l(section.candidates, section.references);
    return obj;
  };
  out["dataset"] = detail::dataset_stem(config.in_path);
  out["findings"] = section_json(findings);
  out["impression"] = section_json(impression);
  out["full_report"] = section_json(full);

  const std::string text = out.dump(2) + "\n";
  if (config.out_path.empty())
    std::cout << text;
  else
    detail::write_file(config.out_path, text);
  return kExitOk;
}

}  // namespace entail
