#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cocreate/stopwords.hpp"
#include "cocreate/topic_model.hpp"
#include "test_support.hpp"

using namespace cocreate;
using testing_support::at;
using testing_support::rev;

TEST_CASE("preprocess_text tokenization rules", "[topic]") {
  CHECK(preprocess_text("The Cat sat 123!", {"the"}) == TokenList{"cat", "sat"});
  CHECK(preprocess_text("", {}).empty());
  CHECK(preprocess_text("Hong-Kong 2019 protests", {}) == TokenList{"hong", "kong", "protests"});
  CHECK(preprocess_text("COVID19 mp3 ok", {}) == TokenList{"ok"});
  CHECK(preprocess_text("caf\xc3\xa9 bar", {}) == TokenList{"bar"});
  CHECK(preprocess_text("[[Link|text]] {{cite}}", {}) == TokenList{"link", "text", "cite"});
}

TEST_CASE("preprocess_text is idempotent on its own output", "[topic][property]") {
  std::mt19937_64 rng(5);
  const std::string alphabet = "abcXYZ019 -,.!'\n\xc3\xa9";
  std::uniform_int_distribution<std::size_t> len(0, 60), pick(0, alphabet.size() - 1);
  auto stop = default_stopwords();
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    for (auto n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
    auto once = preprocess_text(s, stop);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(preprocess_text(joined, stop) == once);
    for (const auto& t : once) {
      CHECK_FALSE(t.empty());
      CHECK_FALSE(stop.contains(t));
      for (char c : t) CHECK((c >= 'a' && c <= 'z'));
    }
  }
}

TEST_CASE("default stopword list matches the data file", "[topic]") {
  auto from_file = load_stopwords(std::filesystem::path(COCREATE_SOURCE_DIR) / "data" / "stopwords.txt");
  CHECK(from_file == default_stopwords());
  CHECK(from_file.contains("the"));
  CHECK_FALSE(from_file.contains("history"));
}

TEST_CASE("extract_sections reads heading lines", "[topic]") {
  CHECK(extract_sections("== History ==\ntext\n=== Early life ===").sections == SectionNames{"History", "Early life"});
  CHECK(extract_sections("no headings here").empty());
  CHECK(extract_sections("==A==\n==A==").sections == SectionNames{"A"});
  CHECK(extract_sections("= Title =\n====== Deep ======\n======= Deeper =======").sections ==
        SectionNames{"Deep", "= Deeper ="});
  CHECK(extract_sections("====\n==  ==\n  == Padded ==  \r").sections == SectionNames{"Padded"});
  CHECK(extract_sections("== Lopsided ===").sections == SectionNames{"Lopsided ="});
}

TEST_CASE("allocate_topics: marker first, then keyword overlap", "[topic]") {
  auto stop = default_stopwords();
  auto t = at("2020-01-01");
  SectionSet hist_impact{{"History", "Impact"}, 0};
  SectionSet impact_response{{"Impact", "Response"}, 0};

  CHECK(allocate_topics(rev(1, "A", t, "/* History */ tweak"), hist_impact, stop) == SectionNames{"History"});
  CHECK(allocate_topics(rev(2, "A", t, "/* history */"), hist_impact, stop) == SectionNames{"History"});
  CHECK(allocate_topics(rev(3, "A", t, "", "The impact on the economy was severe"), impact_response, stop) ==
        SectionNames{"Impact"});
  CHECK(allocate_topics(rev(4, "A", t), impact_response, stop).empty());
  // unknown marker falls back to content
  CHECK(allocate_topics(rev(5, "A", t, "/* Legacy */", "international response"), impact_response, stop) ==
        SectionNames{"Response"});
  CHECK(allocate_topics(rev(6, "A", t, "/* Legacy */"), impact_response, stop).empty());
}

TEST_CASE("content_weight is a normalized intersection", "[topic]") {
  CHECK(content_weight({}, {"a", "b"}, 4) == 0.0);
  CHECK(content_weight({"history", "impact"}, {"impact", "response"}, 4) == 0.25);
  CHECK(content_weight({"a", "b", "c", "d"}, {"a", "b", "c", "d"}, 4) == 1.0);
  try {
    content_weight({"a"}, {"a"}, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_article);
  }
}

TEST_CASE("content_weight is symmetric and bounded", "[topic][property]") {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t count = 1 + rng() % 8;
    SectionNames a, b;
    for (std::size_t k = 0; k < count; ++k) {
      if (coin(rng)) a.insert("s" + std::to_string(k));
      if (coin(rng)) b.insert("s" + std::to_string(k));
    }
    double w = content_weight(a, b, count);
    CHECK(w == content_weight(b, a, count));
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
  }
}
