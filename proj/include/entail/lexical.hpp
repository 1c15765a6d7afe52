#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entail/text.hpp"

namespace entail {

namespace detail {

/// N-gram counts keyed by tokens joined with an unprintable separator.
inline std::unordered_map<std::string, long> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::unordered_map<std::string, long> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t j = 0; j < n; ++j) {
      if (j) key += '\x1e';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

inline std::size_t lcs_length(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                     : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

}  // namespace detail

/// Corpus-level BLEU-4: the geometric mean of clipped 1..4-gram precisions
/// pooled over the corpus, times the brevity penalty. No smoothing — any
/// empty n-gram precision zeroes the score. Tokenization is the shared
/// lower-case alnum splitter.
inline double corpus_bleu(std::span<const std::string> candidates,
                          std::span<const std::string> references) {
  if (candidates.size() != references.size())
    throw std::invalid_argument("candidate/reference corpora differ in length");
  constexpr std::size_t kMaxOrder = 4;
  long matches[kMaxOrder] = {0, 0, 0, 0};
  long totals[kMaxOrder] = {0, 0, 0, 0};
  long candidate_len = 0, reference_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto cand = tokenize(candidates[i]);
    const auto ref = tokenize(references[i]);
    candidate_len += static_cast<long>(cand.size());
    reference_len += static_cast<long>(ref.size());
    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
      const auto cand_ngrams = detail::ngram_counts(cand, n);
      const auto ref_ngrams = detail::ngram_counts(ref, n);
      for (const auto& [key, count] : cand_ngrams) {
        totals[n - 1] += count;
        auto it = ref_ngrams.find(key);
        if (it != ref_ngrams.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  double log_sum = 0.0;
  for (std::size_t n = 0; n < kMaxOrder; ++n) {
    if (totals[n] == 0 || matches[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[n]) /
                        static_cast<double>(totals[n]));
  }
  const double brevity =
      candidate_len > reference_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(reference_len) /
                               static_cast<double>(candidate_len));
  return brevity * std::exp(log_sum / static_cast<double>(kMaxOrder));
}

/// ROUGE-L F1 (beta = 1) on token-level longest common subsequence:
/// P = LCS/|candidate|, R = LCS/|reference|, F = 2PR/(P+R), and 0 when the
/// LCS is empty.
inline double rouge_l(std::string_view candidate, std::string_view reference) {
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  const std::size_t lcs = detail::lcs_length(cand, ref);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(cand.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

/// Mean ROUGE-L F1 over aligned pairs; 0 for an empty corpus.
inline double corpus_rouge_l(std::span<const std::string> candidates,
                             std::span<const std::string> references) {
  if (candidates.size() != references.size())
    throw std::invalid_argument("candidate/reference corpora differ in length");
  if (candidates.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    sum += rouge_l(candidates[i], references[i]);
  return sum / static_cast<double>(candidates.size());
}

}  // namespace entail
