#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairsynth/errors.hpp"
#include "fairsynth/manifest.hpp"

namespace fairsynth {

// Text hygiene applied before tokenization. Applying a policy twice is the
// same as applying it once. Case folding and punctuation handling are
// ASCII-scoped; non-ASCII characters pass through untouched.
struct NormalizationPolicy {
  bool lowercase = true;
  // Punctuation becomes a word boundary (replaced by a space). Apostrophes
  // flanked by alphanumerics are kept, so "don't" survives intact.
  bool strip_punctuation = true;
  bool collapse_whitespace = true;

  bool operator==(const NormalizationPolicy&) const = default;
};

enum class TokenLevel { word, character };

// Applies the policy, then splits: word level on whitespace, character level
// into Unicode scalar values with spaces kept as tokens.
std::vector<std::string> normalize_and_tokenize(std::string_view raw,
                                                const NormalizationPolicy& policy,
                                                TokenLevel level);
std::string apply_policy(std::string_view raw, const NormalizationPolicy& policy);

// Outcome of a minimum-edit-cost alignment with unit costs.
// substitutions + deletions + correct == ref_len.
struct AlignmentCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t correct = 0;
  std::size_t ref_len = 0;

  std::size_t edits() const { return substitutions + deletions + insertions; }
  std::size_t hyp_len() const { return substitutions + insertions + correct; }
};

// Levenshtein alignment with unit costs. Ties in the backtrace resolve in a
// fixed order (match/substitution, then deletion, then insertion) so the
// counts are deterministic.
AlignmentCounts align(std::span<const std::string> ref_tokens,
                      std::span<const std::string> hyp_tokens);

// What to do when the reference is empty but the hypothesis is not.
enum class ZeroRefFallback { error, hypothesis_length };

// (S + D + I) / ref_len; may exceed 1. An empty reference with an empty
// hypothesis is 0 by convention; with a non-empty hypothesis it throws
// UndefinedRateError unless the fallback divides by the hypothesis length.
double error_rate(const AlignmentCounts& counts,
                  ZeroRefFallback fallback = ZeroRefFallback::error);

// prompt_rate - generated_rate. Positive means the generated audio scored
// better (lower error rate) than the prompt it was cloned from.
double delta_metric(double prompt_rate, double generated_rate);

// Per-utterance computed metrics. Fields whose inputs are absent stay empty;
// they are never defaulted to 0.
struct UtteranceMetrics {
  std::string utt_id;
  std::optional<double> wer_prompt;
  std::optional<double> wer_generated;
  std::optional<double> cer_prompt;
  std::optional<double> cer_generated;
  std::optional<double> delta_wer;
  std::optional<double> delta_cer;
  std::optional<double> simo;
  std::optional<double> autopcp;

  bool operator==(const UtteranceMetrics&) const = default;
};

// Computes every metric derivable from the record: WER/CER for whichever
// hypotheses exist, deltas when both sides exist, SIM-o and AutoPCP via the
// similarity resolvers. Warnings (e.g. a SIM-o conflict) are appended to
// `warnings` when given, keyed by utt_id.
UtteranceMetrics score_utterance(
    const UtteranceRecord& record, const NormalizationPolicy& policy = {},
    ZeroRefFallback fallback = ZeroRefFallback::error,
    std::vector<std::pair<std::string, std::string>>* warnings = nullptr);

}  // namespace fairsynth
