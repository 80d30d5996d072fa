#include "fairsynth/simmetrics.hpp"

#include <algorithm>
#include <cmath>

namespace fairsynth {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("embedding length mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw InputError("empty embedding vector");

  const bool identical = std::equal(a.begin(), a.end(), b.begin());
  const bool a_zero = std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
  if (identical && a_zero) {
    throw UndefinedSimilarityError("cosine similarity undefined for zero-norm embedding");
  }
  if (identical) return 1.0;

  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
  }
  if (norm_a == 0.0 || norm_b == 0.0) {
    throw UndefinedSimilarityError("cosine similarity undefined for zero-norm embedding");
  }
  const double value = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  return std::clamp(value, -1.0, 1.0);
}

EmbeddingPair::EmbeddingPair(std::vector<double> prompt, std::vector<double> generated)
    : prompt_(std::move(prompt)), generated_(std::move(generated)) {
  if (prompt_.empty() || generated_.empty()) throw InputError("empty embedding vector");
  if (prompt_.size() != generated_.size()) {
    throw InputError("embedding length mismatch (" + std::to_string(prompt_.size()) + " vs " +
                     std::to_string(generated_.size()) + ")");
  }
  auto zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  if (zero(prompt_) || zero(generated_)) {
    throw UndefinedSimilarityError("zero-norm embedding");
  }
}

std::optional<double> resolve_simo(
    const UtteranceRecord& record,
    std::vector<std::pair<std::string, std::string>>* warnings) {
  const bool has_pair = record.embedding_prompt && record.embedding_generated;

  if (record.simo_precomputed) {
    if (has_pair && warnings) {
      try {
        const double computed =
            cosine_similarity(*record.embedding_prompt, *record.embedding_generated);
        if (std::abs(computed - *record.simo_precomputed) > 1e-6) {
          warnings->emplace_back(record.utt_id,
                                 "SIM-o conflict: precomputed differs from embedding "
                                 "cosine; precomputed wins");
        }
      } catch (const Error& e) {
        warnings->emplace_back(record.utt_id,
                               std::string("embedding pair unusable (") + e.what() +
                                   "); precomputed SIM-o kept");
      }
    }
    return record.simo_precomputed;
  }
  if (has_pair) {
    return cosine_similarity(*record.embedding_prompt, *record.embedding_generated);
  }
  return std::nullopt;
}

std::optional<double> resolve_autopcp(const UtteranceRecord& record) {
  if (!record.autopcp) return std::nullopt;
  if (*record.autopcp < 0.0) {
    throw InputError("AutoPCP score is negative for utt_id '" + record.utt_id + "'");
  }
  return record.autopcp;
}

}  // namespace fairsynth
