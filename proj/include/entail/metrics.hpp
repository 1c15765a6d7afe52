#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "entail/ontology.hpp"
#include "entail/verifier.hpp"

namespace entail {

/// Safety threshold for micro-soundness: below this, unsupported claims are
/// considered too frequent for clinical use.
inline constexpr double kSoundnessTarget = 0.99;

/// num/den as a fraction; a zero denominator yields no value rather than a
/// coerced 0 or 1.
inline std::optional<double> safe_ratio(long num, long den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

/// Per-report entailment metrics. Soundness is the fraction of claimed
/// diagnoses that are entailed; completeness the fraction of entailed
/// diagnoses that are claimed. Each is undefined when its denominator is
/// empty.
struct ReportScore {
  std::optional<double> soundness;
  std::optional<double> completeness;
  long n_claimed = 0;
  long n_entailed = 0;
  long n_verified = 0;
};

inline ReportScore score_report(const Verdict& verdict) {
  ReportScore score;
  score.n_claimed = static_cast<long>(verdict.claimed.size());
  score.n_entailed = static_cast<long>(verdict.entailed.size());
  score.n_verified = static_cast<long>(verdict.verified.size());
  score.soundness = safe_ratio(score.n_verified, score.n_claimed);
  score.completeness = safe_ratio(score.n_verified, score.n_entailed);
  return score;
}

inline std::optional<double> report_soundness(const Verdict& verdict) {
  return score_report(verdict).soundness;
}

inline std::optional<double> report_completeness(const Verdict& verdict) {
  return score_report(verdict).completeness;
}

struct ConfusionCounts {
  long tp = 0, fp = 0, fn = 0, tn = 0;

  std::optional<double> precision() const { return safe_ratio(tp, tp + fp); }
  std::optional<double> recall() const { return safe_ratio(tp, tp + fn); }
  std::optional<double> specificity() const { return safe_ratio(tn, tn + fp); }
  std::optional<double> f1() const {
    const auto p = precision();
    const auto r = recall();
    if (!p || !r || *p + *r == 0.0) return std::nullopt;
    return 2.0 * *p * *r / (*p + *r);
  }
};

struct DiagnosisConfusion {
  int diagnosis = 0;  // ordinal
  ConfusionCounts counts;
};

/// Label-based evaluation: pooled confusion over every (report, diagnosis)
/// pair plus per-diagnosis breakdowns, with macro means over the diagnoses
/// whose ratio is defined.
struct ConfusionSummary {
  long n_labeled = 0;
  ConfusionCounts pooled;
  std::vector<DiagnosisConfusion> per_diagnosis;
  std::optional<double> macro_precision, macro_recall, macro_f1, macro_specificity;
};

/// Entailment metrics over a verdict stream, with label-based confusion
/// attached when labels were available.
struct MetricsSummary {
  long n_total = 0, n_consistent = 0, n_inconsistent = 0, n_malformed = 0;
  long pooled_claimed = 0, pooled_entailed = 0, pooled_verified = 0;
  std::optional<double> micro_soundness, micro_completeness;
  std::optional<double> macro_soundness, macro_completeness;
  long macro_soundness_n = 0, macro_completeness_n = 0;
  bool soundness_target_met = false;
  std::optional<ConfusionSummary> labels;
};

/// Folds verdicts into corpus-level entailment metrics. Micro ratios pool
/// the per-report counts; macro ratios average the per-report values that
/// are defined. Inconsistent and malformed reports are excluded from both
/// and surface only in the status counts.
inline MetricsSummary aggregate(std::span<const Verdict> verdicts) {
  MetricsSummary summary;
  double soundness_sum = 0.0, completeness_sum = 0.0;
  for (const Verdict& verdict : verdicts) {
    ++summary.n_total;
    if (verdict.status == VerdictStatus::Malformed) {
      ++summary.n_malformed;
      continue;
    }
    if (verdict.status == VerdictStatus::Inconsistent) {
      ++summary.n_inconsistent;
      continue;
    }
    ++summary.n_consistent;
    const ReportScore score = score_report(verdict);
    summary.pooled_claimed += score.n_claimed;
    summary.pooled_entailed += score.n_entailed;
    summary.pooled_verified += score.n_verified;
    if (score.soundness) {
      soundness_sum += *score.soundness;
      ++summary.macro_soundness_n;
    }
    if (score.completeness) {
      completeness_sum += *score.completeness;
      ++summary.macro_completeness_n;
    }
  }
  summary.micro_soundness = safe_ratio(summary.pooled_verified, summary.pooled_claimed);
  summary.micro_completeness =
      safe_ratio(summary.pooled_verified, summary.pooled_entailed);
  if (summary.macro_soundness_n > 0)
    summary.macro_soundness = soundness_sum / static_cast<double>(summary.macro_soundness_n);
  if (summary.macro_completeness_n > 0)
    summary.macro_completeness =
        completeness_sum / static_cast<double>(summary.macro_completeness_n);
  summary.soundness_target_met =
      summary.micro_soundness && *summary.micro_soundness >= kSoundnessTarget;
  return summary;
}

/// Confusion counts of predicted diagnosis sets against ground-truth
/// labels. `predicted` and `labels` are parallel per-report arrays; labels
/// are full vectors over the diagnosis ordinals.
inline ConfusionSummary confusion_vs_labels(
    std::span<const std::vector<int>> predicted,
    std::span<const std::vector<std::uint8_t>> labels, const Ontology& ontology) {
  if (predicted.size() != labels.size())
    throw std::invalid_argument("predicted/labels arrays differ in length");
  const int nd = ontology.diagnosis_count();
  ConfusionSummary summary;
  summary.n_labeled = static_cast<long>(predicted.size());
  summary.per_diagnosis.reserve(nd);
  for (int d = 0; d < nd; ++d) summary.per_diagnosis.push_back({d, {}});

  std::vector<std::uint8_t> is_predicted(nd);
  for (std::size_t r = 0; r < predicted.size(); ++r) {
    std::fill(is_predicted.begin(), is_predicted.end(), 0);
    for (int d : predicted[r]) is_predicted[d] = 1;
    for (int d = 0; d < nd; ++d) {
      ConfusionCounts& counts = summary.per_diagnosis[d].counts;
      const bool pred = is_predicted[d] != 0;
      const bool truth = labels[r][d] != 0;
      if (pred && truth) ++counts.tp;
      else if (pred && !truth) ++counts.fp;
      else if (!pred && truth) ++counts.fn;
      else ++counts.tn;
    }
  }
  for (const DiagnosisConfusion& entry : summary.per_diagnosis) {
    summary.pooled.tp += entry.counts.tp;
    summary.pooled.fp += entry.counts.fp;
    summary.pooled.fn += entry.counts.fn;
    summary.pooled.tn += entry.counts.tn;
  }
  auto macro_mean = [&](auto getter) -> std::optional<double> {
    double sum = 0.0;
    long n = 0;
    for (const DiagnosisConfusion& entry : summary.per_diagnosis) {
      const auto value = getter(entry.counts);
      if (value) {
        sum += *value;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  summary.macro_precision = macro_mean([](const ConfusionCounts& c) { return c.precision(); });
  summary.macro_recall = macro_mean([](const ConfusionCounts& c) { return c.recall(); });
  summary.macro_f1 = macro_mean([](const ConfusionCounts& c) { return c.f1(); });
  summary.macro_specificity =
      macro_mean([](const ConfusionCounts& c) { return c.specificity(); });
  return summary;
}

struct DeltaEntry {
  std::optional<double> vlm, ours, delta;
};

struct CountDelta {
  long vlm = 0, ours = 0, delta = 0;
};

/// Metric differences between the filtered (ours) and raw (vlm) variants.
/// Each entry carries both operands plus ours − vlm; an undefined side makes
/// the delta undefined.
struct DeltaSummary {
  DeltaEntry micro_soundness, macro_soundness;
  DeltaEntry micro_completeness, macro_completeness;
  DeltaEntry precision, recall, f1, specificity;
  std::optional<CountDelta> tp, fp, fn, tn;
};

namespace detail {
inline DeltaEntry delta_entry(std::optional<double> ours, std::optional<double> vlm) {
  DeltaEntry entry{vlm, ours, std::nullopt};
  if (ours && vlm) entry.delta = *ours - *vlm;
  return entry;
}
}  // namespace detail

inline DeltaSummary delta(const MetricsSummary& ours, const MetricsSummary& vlm) {
  DeltaSummary d;
  d.micro_soundness = detail::delta_entry(ours.micro_soundness, vlm.micro_soundness);
  d.macro_soundness = detail::delta_entry(ours.macro_soundness, vlm.macro_soundness);
  d.micro_completeness =
      detail::delta_entry(ours.micro_completeness, vlm.micro_completeness);
  d.macro_completeness =
      detail::delta_entry(ours.macro_completeness, vlm.macro_completeness);
  if (ours.labels && vlm.labels) {
    const ConfusionCounts& oc = ours.labels->pooled;
    const ConfusionCounts& vc = vlm.labels->pooled;
    d.precision = detail::delta_entry(oc.precision(), vc.precision());
    d.recall = detail::delta_entry(oc.recall(), vc.recall());
    d.f1 = detail::delta_entry(oc.f1(), vc.f1());
    d.specificity = detail::delta_entry(oc.specificity(), vc.specificity());
    d.tp = CountDelta{vc.tp, oc.tp, oc.tp - vc.tp};
    d.fp = CountDelta{vc.fp, oc.fp, oc.fp - vc.fp};
    d.fn = CountDelta{vc.fn, oc.fn, oc.fn - vc.fn};
    d.tn = CountDelta{vc.tn, oc.tn, oc.tn - vc.tn};
  }
  return d;
}

// ---------------------------------------------------------------------------
// Serialization: metrics JSON with a stable key order, and the flat CSV rows.

namespace detail {
inline nlohmann::ordered_json json_opt(const std::optional<double>& value) {
  if (!value) return nullptr;
  return *value;
}

inline nlohmann::ordered_json confusion_json(const ConfusionCounts& counts) {
  nlohmann::ordered_json out;
  out["tp"] = counts.tp;
  out["fp"] = counts.fp;
  out["fn"] = counts.fn;
  out["tn"] = counts.tn;
  out["precision"] = json_opt(counts.precision());
  out["recall"] = json_opt(counts.recall());
  out["f1"] = json_opt(counts.f1());
  out["specificity"] = json_opt(counts.specificity());
  return out;
}
}  // namespace detail

inline nlohmann::ordered_json summary_to_json(const MetricsSummary& summary,
                                              const Ontology& ontology) {
  nlohmann::ordered_json out;
  out["n_total"] = summary.n_total;
  out["n_consistent"] = summary.n_consistent;
  out["n_inconsistent"] = summary.n_inconsistent;
  out["n_malformed"] = summary.n_malformed;
  nlohmann::ordered_json pooled;
  pooled["claimed"] = summary.pooled_claimed;
  pooled["entailed"] = summary.pooled_entailed;
  pooled["verified"] = summary.pooled_verified;
  out["pooled"] = std::move(pooled);
  out["micro_soundness"] = detail::json_opt(summary.micro_soundness);
  out["macro_soundness"] = detail::json_opt(summary.macro_soundness);
  out["macro_soundness_n"] = summary.macro_soundness_n;
  out["micro_completeness"] = detail::json_opt(summary.micro_completeness);
  out["macro_completeness"] = detail::json_opt(summary.macro_completeness);
  out["macro_completeness_n"] = summary.macro_completeness_n;
  out["soundness_target"] = kSoundnessTarget;
  out["soundness_target_met"] = summary.soundness_target_met;
  if (summary.labels) {
    const ConfusionSummary& labels = *summary.labels;
    nlohmann::ordered_json section;
    section["n_labeled"] = labels.n_labeled;
    section["pooled_confusion"] = detail::confusion_json(labels.pooled);
    nlohmann::ordered_json macro;
    macro["precision"] = detail::json_opt(labels.macro_precision);
    macro["recall"] = detail::json_opt(labels.macro_recall);
    macro["f1"] = detail::json_opt(labels.macro_f1);
    macro["specificity"] = detail::json_opt(labels.macro_specificity);
    section["macro"] = std::move(macro);
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (const DiagnosisConfusion& entry : labels.per_diagnosis)
      per[ontology.diagnosis_name(entry.diagnosis)] =
          detail::confusion_json(entry.counts);
    section["per_diagnosis"] = std::move(per);
    out["labels"] = std::move(section);
  }
  return out;
}

inline nlohmann::ordered_json delta_to_json(const DeltaSummary& summary) {
  nlohmann::ordered_json out;
  auto entry = [](const DeltaEntry& e) {
    nlohmann::ordered_json obj;
    obj["vlm"] = detail::json_opt(e.vlm);
    obj["ours"] = detail::json_opt(e.ours);
    obj["delta"] = detail::json_opt(e.delta);
    return obj;
  };
  out["micro_soundness"] = entry(summary.micro_soundness);
  out["macro_soundness"] = entry(summary.macro_soundness);
  out["micro_completeness"] = entry(summary.micro_completeness);
  out["macro_completeness"] = entry(summary.macro_completeness);
  out["precision"] = entry(summary.precision);
  out["recall"] = entry(summary.recall);
  out["f1"] = entry(summary.f1);
  out["specificity"] = entry(summary.specificity);
  auto counts = [&](const char* key, const std::optional<CountDelta>& c) {
    if (!c) {
      out[key] = nullptr;
      return;
    }
    nlohmann::ordered_json obj;
    obj["vlm"] = c->vlm;
    obj["ours"] = c->ours;
    obj["delta"] = c->delta;
    out[key] = std::move(obj);
  };
  counts("tp", summary.tp);
  counts("fp", summary.fp);
  counts("fn", summary.fn);
  counts("tn", summary.tn);
  return out;
}

inline std::string metrics_csv_header() {
  return "dataset,variant,n_total,n_consistent,n_inconsistent,n_malformed,"
         "micro_soundness,macro_soundness,micro_completeness,macro_completeness,"
         "soundness_target_met,n_labeled,tp,fp,fn,tn,precision,recall,f1,"
         "specificity";
}

/// One CSV row per (dataset, variant). Undefined ratios become empty cells.
inline std::string metrics_csv_row(const std::string& dataset, const std::string& variant,
                                   const MetricsSummary& summary) {
  auto num = [](const std::optional<double>& value) {
    if (!value) return std::string();
    return nlohmann::json(*value).dump();
  };
  std::string row = dataset + "," + variant;
  row += "," + std::to_string(summary.n_total);
  row += "," + std::to_string(summary.n_consistent);
  row += "," + std::to_string(summary.n_inconsistent);
  row += "," + std::to_string(summary.n_malformed);
  row += "," + num(summary.micro_soundness);
  row += "," + num(summary.macro_soundness);
  row += "," + num(summary.micro_completeness);
  row += "," + num(summary.macro_completeness);
  row += std::string(",") + (summary.soundness_target_met ? "true" : "false");
  if (summary.labels) {
    const ConfusionSummary& labels = *summary.labels;
    row += "," + std::to_string(labels.n_labeled);
    row += "," + std::to_string(labels.pooled.tp);
    row += "," + std::to_string(labels.pooled.fp);
    row += "," + std::to_string(labels.pooled.fn);
    row += "," + std::to_string(labels.pooled.tn);
    row += "," + num(labels.pooled.precision());
    row += "," + num(labels.pooled.recall());
    row += "," + num(labels.pooled.f1());
    row += "," + num(labels.pooled.specificity());
  } else {
    row += ",0,,,,,,,,";
  }
  return row;
}

}  // namespace entail
