#include "fairsynth/textmetrics.hpp"

#include <cctype>

#include "fairsynth/simmetrics.hpp"
#include "fairsynth/unicode.hpp"

namespace fairsynth {

namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string apply_policy(std::string_view raw, const NormalizationPolicy& policy) {
  std::string text(raw);

  if (policy.lowercase) {
    for (char& c : text) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }

  if (policy.strip_punctuation) {
    std::string kept;
    kept.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if (!is_ascii_punct(c)) {
        kept.push_back(c);
        continue;
      }
      const bool inner_apostrophe = c == '\'' && i > 0 && i + 1 < text.size() &&
                                    is_ascii_alnum(text[i - 1]) && is_ascii_alnum(text[i + 1]);
      kept.push_back(inner_apostrophe ? c : ' ');
    }
    text = std::move(kept);
  }

  if (policy.collapse_whitespace) {
    std::string collapsed;
    collapsed.reserve(text.size());
    bool in_space = true;  // leading whitespace is dropped
    for (const char c : text) {
      if (is_ascii_space(c)) {
        if (!in_space) collapsed.push_back(' ');
        in_space = true;
      } else {
        collapsed.push_back(c);
        in_space = false;
      }
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    text = std::move(collapsed);
  }

  return text;
}

std::vector<std::string> normalize_and_tokenize(std::string_view raw,
                                                const NormalizationPolicy& policy,
                                                TokenLevel level) {
  const std::string text = apply_policy(raw, policy);
  if (level == TokenLevel::character) return utf8_codepoints(text);

  std::vector<std::string> words;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) words.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

AlignmentCounts align(std::span<const std::string> ref_tokens,
                      std::span<const std::string> hyp_tokens) {
  const std::size_t m = ref_tokens.size();
  const std::size_t n = hyp_tokens.size();

  // cost[i][j]: min edits turning ref[0..i) into hyp[0..j).
  std::vector<std::size_t> cost((m + 1) * (n + 1), 0);
  auto at = [n](std::size_t i, std::size_t j) { return i * (n + 1) + j; };
  for (std::size_t i = 1; i <= m; ++i) cost[at(i, 0)] = i;
  for (std::size_t j = 1; j <= n; ++j) cost[at(0, j)] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub =
          cost[at(i - 1, j - 1)] + (ref_tokens[i - 1] == hyp_tokens[j - 1] ? 0 : 1);
      const std::size_t del = cost[at(i - 1, j)] + 1;
      const std::size_t ins = cost[at(i, j - 1)] + 1;
      cost[at(i, j)] = std::min(sub, std::min(del, ins));
    }
  }

  // Backtrace with fixed priority: match/substitution, deletion, insertion.
  AlignmentCounts counts;
  counts.ref_len = m;
  std::size_t i = m;
  std::size_t j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool match = ref_tokens[i - 1] == hyp_tokens[j - 1];
      if (cost[at(i, j)] == cost[at(i - 1, j - 1)] + (match ? 0 : 1)) {
        match ? ++counts.correct : ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[at(i, j)] == cost[at(i - 1, j)] + 1) {
      ++counts.deletions;
      --i;
      continue;
    }
    ++counts.insertions;
    --j;
  }
  return counts;
}

double error_rate(const AlignmentCounts& counts, ZeroRefFallback fallback) {
  const std::size_t edits = counts.edits();
  if (counts.ref_len > 0) {
    return static_cast<double>(edits) / static_cast<double>(counts.ref_len);
  }
  if (edits == 0) return 0.0;
  if (fallback == ZeroRefFallback::hypothesis_length) {
    return static_cast<double>(edits) / static_cast<double>(counts.hyp_len());
  }
  throw UndefinedRateError("error rate undefined: empty reference with " +
                           std::to_string(edits) + " insertions");
}

double delta_metric(double prompt_rate, double generated_rate) {
  return prompt_rate - generated_rate;
}

UtteranceMetrics score_utterance(const UtteranceRecord& record,
                                 const NormalizationPolicy& policy, ZeroRefFallback fallback,
                                 std::vector<std::pair<std::string, std::string>>* warnings) {
  UtteranceMetrics metrics;
  metrics.utt_id = record.utt_id;

  const auto rate_against_ref = [&](const std::string& hyp, TokenLevel level) {
    const auto ref_tokens = normalize_and_tokenize(record.ref_text, policy, level);
    const auto hyp_tokens = normalize_and_tokenize(hyp, policy, level);
    return error_rate(align(ref_tokens, hyp_tokens), fallback);
  };

  if (record.hyp_prompt_text) {
    metrics.wer_prompt = rate_against_ref(*record.hyp_prompt_text, TokenLevel::word);
    metrics.cer_prompt = rate_against_ref(*record.hyp_prompt_text, TokenLevel::character);
  }
  if (record.hyp_generated_text) {
    metrics.wer_generated = rate_against_ref(*record.hyp_generated_text, TokenLevel::word);
    metrics.cer_generated = rate_against_ref(*record.hyp_generated_text, TokenLevel::character);
  }
  if (metrics.wer_prompt && metrics.wer_generated) {
    metrics.delta_wer = delta_metric(*metrics.wer_prompt, *metrics.wer_generated);
  }
  if (metrics.cer_prompt && metrics.cer_generated) {
    metrics.delta_cer = delta_metric(*metrics.cer_prompt, *metrics.cer_generated);
  }

  metrics.simo = resolve_simo(record, warnings);
  metrics.autopcp = resolve_autopcp(record);
  return metrics;
}

}  // namespace fairsynth
