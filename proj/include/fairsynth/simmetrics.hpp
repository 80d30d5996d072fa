#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairsynth/errors.hpp"
#include "fairsynth/manifest.hpp"

namespace fairsynth {

// dot(a,b) / (|a|*|b|), clamped to [-1, 1] against round-off. Throws
// InputError on length mismatch and UndefinedSimilarityError on a zero-norm
// vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// A prompt/generated embedding pair. Construction enforces the invariants
// (equal nonzero length, no zero-norm side), so similarity() cannot fail.
class EmbeddingPair {
 public:
  EmbeddingPair(std::vector<double> prompt, std::vector<double> generated);

  const std::vector<double>& prompt() const { return prompt_; }
  const std::vector<double>& generated() const { return generated_; }
  double similarity() const { return cosine_similarity(prompt_, generated_); }

 private:
  std::vector<double> prompt_;
  std::vector<double> generated_;
};

// SIM-o for one record: a precomputed score wins over the embedding pair.
// When both are present and disagree by more than 1e-6 a warning is recorded
// and the precomputed score is kept. Returns empty when neither is present.
std::optional<double> resolve_simo(
    const UtteranceRecord& record,
    std::vector<std::pair<std::string, std::string>>* warnings = nullptr);

// AutoPCP passthrough with a >= 0 range check; the comparator model that
// produces the score is external to this toolkit.
std::optional<double> resolve_autopcp(const UtteranceRecord& record);

}  // namespace fairsynth
