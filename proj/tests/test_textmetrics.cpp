#include <doctest.h>

#include <random>

#include "fairsynth/textmetrics.hpp"
#include "oracles.hpp"

using namespace fairsynth;

namespace {

std::vector<std::string> words(std::string_view raw) {
  return normalize_and_tokenize(raw, {}, TokenLevel::word);
}

std::vector<std::string> chars(std::string_view raw) {
  return normalize_and_tokenize(raw, {}, TokenLevel::character);
}

}  // namespace

TEST_CASE("normalize_and_tokenize applies the default policy") {
  CHECK(words("The CAT sat.") == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(chars("ab a") == std::vector<std::string>{"a", "b", " ", "a"});
  CHECK(words("") == std::vector<std::string>{});
  CHECK(chars("") == std::vector<std::string>{});
  CHECK(words("  many   spaces\t here ") == std::vector<std::string>{"many", "spaces", "here"});
}

TEST_CASE("inner apostrophes survive punctuation stripping") {
  CHECK(words("Don't stop!") == std::vector<std::string>{"don't", "stop"});
  CHECK(words("'quoted'") == std::vector<std::string>{"quoted"});
  // Punctuation acts as a word boundary, not as glue.
  CHECK(words("end.start") == std::vector<std::string>{"end", "start"});
}

TEST_CASE("policy flags can be disabled") {
  NormalizationPolicy keep_case;
  keep_case.lowercase = false;
  CHECK(normalize_and_tokenize("The CAT", keep_case, TokenLevel::word) ==
        std::vector<std::string>{"The", "CAT"});

  NormalizationPolicy keep_punct;
  keep_punct.strip_punctuation = false;
  CHECK(normalize_and_tokenize("stop!", keep_punct, TokenLevel::word) ==
        std::vector<std::string>{"stop!"});
}

TEST_CASE("normalization is idempotent") {
  const NormalizationPolicy policy;
  const std::vector<std::string> samples = {
      "The CAT sat.", "don't  DO that!", "a,b;c.d", "  x  ", "caf\xC3\xA9 au lait?!",
      "(parens) [brackets] 'quotes'"};
  for (const auto& s : samples) {
    const std::string once = apply_policy(s, policy);
    CHECK(apply_policy(once, policy) == once);
  }

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> ch(32, 126);
  std::uniform_int_distribution<std::size_t> len(0, 40);
  for (int i = 0; i < 300; ++i) {
    std::string s(len(rng), ' ');
    for (auto& c : s) c = static_cast<char>(ch(rng));
    const std::string once = apply_policy(s, policy);
    CHECK(apply_policy(once, policy) == once);
  }
}

TEST_CASE("align counts the published examples") {
  const std::vector<std::string> abc = {"a", "b", "c"};

  AlignmentCounts identity = align(abc, abc);
  CHECK(identity.substitutions == 0);
  CHECK(identity.deletions == 0);
  CHECK(identity.insertions == 0);
  CHECK(identity.correct == 3);
  CHECK(identity.ref_len == 3);

  // Oracle agrees: dropping "b" costs exactly one deletion.
  const std::vector<std::string> ac = {"a", "c"};
  CHECK(oracles::edit_cost(abc, ac) == 1);
  AlignmentCounts dropped = align(abc, ac);
  CHECK(dropped.substitutions == 0);
  CHECK(dropped.deletions == 1);
  CHECK(dropped.insertions == 0);
  CHECK(dropped.correct == 2);

  AlignmentCounts forced = align({}, std::vector<std::string>{"x", "y"});
  CHECK(forced.insertions == 2);
  CHECK(forced.correct == 0);
  CHECK(forced.ref_len == 0);
}

TEST_CASE("align matches the brute-force oracle on random pairs") {
  std::mt19937 rng(1234);
  for (int i = 0; i < 2000; ++i) {
    const auto ref = oracles::random_tokens(rng, 8, 5);
    const auto hyp = oracles::random_tokens(rng, 8, 5);
    const AlignmentCounts counts = align(ref, hyp);
    CHECK(counts.edits() == oracles::edit_cost(ref, hyp));
    CHECK(counts.substitutions + counts.deletions + counts.correct == counts.ref_len);
    CHECK(counts.ref_len == ref.size());
    CHECK(counts.hyp_len() == hyp.size());
  }
}

TEST_CASE("edit cost is symmetric under swapping ref and hyp") {
  // Only the total cost is direction-free; the individual counts depend on
  // which of several optimal alignments the backtrace priority picks.
  std::mt19937 rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto ref = oracles::random_tokens(rng, 8, 4);
    const auto hyp = oracles::random_tokens(rng, 8, 4);
    const AlignmentCounts forward = align(ref, hyp);
    const AlignmentCounts backward = align(hyp, ref);
    CHECK(forward.edits() == backward.edits());
  }

  // With a unique optimal alignment the counts swap exactly.
  const std::vector<std::string> abc = {"a", "b", "c"};
  const std::vector<std::string> ac = {"a", "c"};
  const AlignmentCounts forward = align(abc, ac);
  const AlignmentCounts backward = align(ac, abc);
  CHECK(forward.deletions == backward.insertions);
  CHECK(forward.insertions == backward.deletions);
  CHECK(forward.substitutions == backward.substitutions);
  CHECK(forward.correct == backward.correct);
}

TEST_CASE("error_rate handles the edge conventions") {
  AlignmentCounts one_sub{.substitutions = 1, .deletions = 0, .insertions = 0, .correct = 2,
                          .ref_len = 3};
  CHECK(error_rate(one_sub) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const std::vector<std::string> four = {"w1", "w2", "w3", "w4"};
  CHECK(error_rate(align(four, four)) == 0.0);
  CHECK(error_rate(align(four, {})) == 1.0);  // four deletions over four

  AlignmentCounts empty{};
  CHECK(error_rate(empty) == 0.0);

  AlignmentCounts inserted{.substitutions = 0, .deletions = 0, .insertions = 2, .correct = 0,
                           .ref_len = 0};
  CHECK_THROWS_AS(error_rate(inserted), UndefinedRateError);
  CHECK(error_rate(inserted, ZeroRefFallback::hypothesis_length) == 1.0);
}

TEST_CASE("error_rate of a self-alignment is zero") {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto tokens = oracles::random_tokens(rng, 8, 5);
    CHECK(error_rate(align(tokens, tokens)) == 0.0);
  }
}

TEST_CASE("delta_metric follows the sign convention") {
  CHECK(delta_metric(0.90, 0.30) == doctest::Approx(0.60).epsilon(1e-15));
  CHECK(delta_metric(0.4, 0.4) == 0.0);
  CHECK(delta_metric(0.10, 0.25) == doctest::Approx(-0.15).epsilon(1e-15));

  std::mt19937 rng(21);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double a = dist(rng);
    const double b = dist(rng);
    CHECK(delta_metric(a, b) == -delta_metric(b, a));
  }
}

TEST_CASE("score_utterance computes only what its inputs allow") {
  UtteranceRecord rec;
  rec.utt_id = "u1";
  rec.ref_text = "the cat sat";

  SUBCASE("both hypotheses identical to the reference") {
    rec.hyp_prompt_text = rec.ref_text;
    rec.hyp_generated_text = rec.ref_text;
    const UtteranceMetrics m = score_utterance(rec);
    CHECK(m.wer_prompt == 0.0);
    CHECK(m.wer_generated == 0.0);
    CHECK(m.cer_prompt == 0.0);
    CHECK(m.cer_generated == 0.0);
    CHECK(m.delta_wer == 0.0);
    CHECK(m.delta_cer == 0.0);
    CHECK_FALSE(m.simo.has_value());
    CHECK_FALSE(m.autopcp.has_value());
  }

  SUBCASE("embeddings only") {
    rec.embedding_prompt = std::vector<double>{0.3, 0.4};
    rec.embedding_generated = std::vector<double>{0.3, 0.4};
    const UtteranceMetrics m = score_utterance(rec);
    CHECK_FALSE(m.wer_prompt.has_value());
    CHECK_FALSE(m.delta_wer.has_value());
    CHECK(m.simo == 1.0);
  }

  SUBCASE("prompt hypothesis misses one word") {
    rec.hyp_prompt_text = "the cat";
    rec.hyp_generated_text = rec.ref_text;
    // One deletion against a three-word reference; oracle confirms cost 1.
    CHECK(oracles::edit_cost({"the", "cat", "sat"}, {"the", "cat"}) == 1);
    const UtteranceMetrics m = score_utterance(rec);
    CHECK(*m.wer_prompt == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(*m.wer_generated == 0.0);
    CHECK(*m.delta_wer == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  SUBCASE("delta equals the difference of the rates exactly") {
    rec.hyp_prompt_text = "a cat sat";
    rec.hyp_generated_text = "the cat";
    const UtteranceMetrics m = score_utterance(rec);
    CHECK(*m.delta_wer == *m.wer_prompt - *m.wer_generated);
    CHECK(*m.delta_cer == *m.cer_prompt - *m.cer_generated);
  }
}
