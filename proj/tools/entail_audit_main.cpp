// Command-line front end: audits report corpora against a knowledge base,
// filters unsupported claims, computes metrics, lints KBs, extracts
// structured evidence from text, scores lexical overlap, and generates
// synthetic corpora with known failure injections.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "entail/harness.hpp"

namespace {

void add_common_options(CLI::App* cmd, entail::RunConfig& config, bool kb_required) {
  auto* kb = cmd->add_option("--kb", config.kb_path, "knowledge base (.kbl)");
  if (kb_required) kb->required();
  cmd->add_option("--lexicon", config.lexicon_path, "lexicon JSON for text extraction");
  cmd->add_option("--jobs", config.jobs, "worker threads (outputs do not depend on it)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entail-audit: reference-free logical auditing of radiology-style reports"};
  app.require_subcommand(1);
  entail::RunConfig config;

  auto* audit = app.add_subcommand(
      "audit", "classify each report's diagnoses as supported/unsupported/missed");
  add_common_options(audit, config, true);
  audit->add_option("--in", config.in_path, "report JSONL")->required();
  audit->add_option("--out", config.out_path, "verdict JSONL")->required();
  audit->add_option("--labels", config.labels_path, "JSONL with id+labels to merge");
  audit->add_flag("--emit-countermodels", config.emit_countermodels,
                  "attach a countermodel to every non-entailed diagnosis");

  auto* filter = app.add_subcommand(
      "filter", "rewrite impression_diagnoses to the entailed subset");
  add_common_options(filter, config, true);
  filter->add_option("--in", config.in_path, "report JSONL")->required();
  filter->add_option("--out", config.out_path, "filtered report JSONL")->required();

  auto* metrics = app.add_subcommand(
      "metrics", "soundness/completeness and label-based metrics from verdicts");
  add_common_options(metrics, config, true);
  metrics->add_option("--in", config.in_path, "verdict JSONL (audit output)")->required();
  metrics->add_option("--out", config.out_path, "metrics JSON")->required();
  metrics->add_option("--labels", config.labels_path, "JSONL with id+labels");
  metrics->add_option("--csv", config.csv_path, "also write a flat CSV");
  metrics->add_flag("--compare-filtered", config.compare_filtered,
                    "include the filtered variant and ours-vs-vlm deltas");

  auto* synth = app.add_subcommand(
      "synth", "generate a seeded synthetic corpus with injected failures");
  add_common_options(synth, config, true);
  synth->add_option("--out", config.out_path, "report JSONL")->required();
  synth->add_option("--log", config.log_path,
                    "injection log JSONL (default: <out>.injections.jsonl)");
  synth->add_option("--n", config.synth_n, "number of reports")
      ->required()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--halluc-rate", config.halluc_rate,
                    "probability of claiming a non-entailed diagnosis")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--omit-rate", config.omit_rate,
                    "probability of withholding an entailed diagnosis")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", config.seed, "64-bit generator seed");

  auto* lint = app.add_subcommand("lint", "check a knowledge base for contradictions "
                                          "and unreachable diagnoses");
  add_common_options(lint, config, true);
  lint->add_option("--out", config.out_path, "lint report JSON (default stdout)");

  auto* extract = app.add_subcommand(
      "extract", "run the lexicon extractor over report text fields");
  add_common_options(extract, config, true);
  extract->add_option("--in", config.in_path, "report JSONL with text fields")->required();
  extract->add_option("--out", config.out_path, "structured JSONL")->required();

  auto* lexical = app.add_subcommand(
      "lexical", "BLEU-4 and ROUGE-L against the reference text fields");
  add_common_options(lexical, config, false);
  lexical->add_option("--in", config.in_path, "report JSONL with reference fields")
      ->required();
  lexical->add_option("--out", config.out_path, "metrics JSON (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (audit->parsed()) return entail::run_audit(config);
    if (filter->parsed()) return entail::run_filter(config);
    if (metrics->parsed()) return entail::run_metrics(config);
    if (synth->parsed()) return entail::run_synth(config);
    if (lint->parsed()) return entail::run_lint(config);
    if (extract->parsed()) return entail::run_extract(config);
    if (lexical->parsed()) return entail::run_lexical(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return entail::kExitFatal;
  }
  return entail::kExitFatal;
}
