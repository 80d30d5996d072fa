#include <doctest.h>

#include <cmath>
#include <random>

#include "fairsynth/simmetrics.hpp"

using namespace fairsynth;

TEST_CASE("cosine_similarity on the reference examples") {
  CHECK(cosine_similarity(std::vector<double>{0.3, 0.4}, std::vector<double>{0.3, 0.4}) == 1.0);
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{1, 1}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("cosine_similarity error cases") {
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 1}),
                  UndefinedSimilarityError);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}),
                  InputError);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{}, std::vector<double>{}), InputError);
}

TEST_CASE("cosine_similarity of parallel vectors is +-1") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  std::uniform_int_distribution<std::size_t> len(1, 16);
  std::uniform_real_distribution<double> scale(0.01, 10.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> a(len(rng));
    for (auto& x : a) x = dist(rng);
    if (std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; })) continue;
    std::vector<double> pos(a.size());
    std::vector<double> neg(a.size());
    const double c = scale(rng);
    for (std::size_t k = 0; k < a.size(); ++k) {
      pos[k] = c * a[k];
      neg[k] = -c * a[k];
    }
    CHECK(cosine_similarity(a, a) == 1.0);  // bitwise-identical fast path
    CHECK(cosine_similarity(a, pos) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(a, neg) == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("cosine_similarity is symmetric and clamped") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> a(8);
    std::vector<double> b(8);
    for (auto& x : a) x = dist(rng);
    for (auto& x : b) x = dist(rng);
    const bool a_zero = std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
    const bool b_zero = std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });
    if (a_zero || b_zero) continue;
    const double ab = cosine_similarity(a, b);
    CHECK(ab == cosine_similarity(b, a));
    CHECK(std::abs(ab) <= 1.0);
  }
}

TEST_CASE("resolve_simo prefers the precomputed score") {
  UtteranceRecord rec;
  rec.utt_id = "u1";
  rec.ref_text = "x";

  SUBCASE("precomputed passthrough") {
    rec.simo_precomputed = 0.62;
    CHECK(resolve_simo(rec) == 0.62);
  }
  SUBCASE("identical embeddings give 1") {
    rec.embedding_prompt = std::vector<double>{0.1, 0.2, 0.3};
    rec.embedding_generated = std::vector<double>{0.1, 0.2, 0.3};
    CHECK(resolve_simo(rec) == 1.0);
  }
  SUBCASE("neither input present") {
    CHECK_FALSE(resolve_simo(rec).has_value());
  }
  SUBCASE("conflicting sources warn and keep the precomputed value") {
    rec.simo_precomputed = 0.25;
    rec.embedding_prompt = std::vector<double>{1.0, 0.0};
    rec.embedding_generated = std::vector<double>{1.0, 0.0};  // cosine 1.0
    std::vector<std::pair<std::string, std::string>> warnings;
    CHECK(resolve_simo(rec, &warnings) == 0.25);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].first == "u1");
    CHECK(warnings[0].second.find("precomputed wins") != std::string::npos);
  }
  SUBCASE("agreeing sources do not warn") {
    rec.simo_precomputed = 1.0;
    rec.embedding_prompt = std::vector<double>{2.0, 0.0};
    rec.embedding_generated = std::vector<double>{4.0, 0.0};
    std::vector<std::pair<std::string, std::string>> warnings;
    CHECK(resolve_simo(rec, &warnings) == 1.0);
    CHECK(warnings.empty());
  }
}

TEST_CASE("EmbeddingPair enforces its invariants at construction") {
  const EmbeddingPair pair({1.0, 0.0}, {1.0, 1.0});
  CHECK(pair.similarity() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(EmbeddingPair({1.0}, {1.0, 2.0}), InputError);
  CHECK_THROWS_AS(EmbeddingPair({}, {}), InputError);
  CHECK_THROWS_AS(EmbeddingPair({0.0, 0.0}, {1.0, 2.0}), UndefinedSimilarityError);
}

TEST_CASE("resolve_autopcp checks the range") {
  UtteranceRecord rec;
  rec.utt_id = "u1";
  SUBCASE("passthrough") {
    rec.autopcp = 3.1;
    CHECK(resolve_autopcp(rec) == 3.1);
  }
  SUBCASE("absent means missing") { CHECK_FALSE(resolve_autopcp(rec).has_value()); }
  SUBCASE("negative is rejected") {
    rec.autopcp = -0.5;
    CHECK_THROWS_AS(resolve_autopcp(rec), InputError);
  }
}
