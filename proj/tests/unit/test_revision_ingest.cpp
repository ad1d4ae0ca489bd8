#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cocreate/fixture.hpp"
#include "cocreate/revision.hpp"
#include "test_support.hpp"

using namespace cocreate;
using testing_support::TempDir;
using testing_support::write_text;

TEST_CASE("parse_section_marker follows the edit-summary convention", "[ingest]") {
  CHECK(parse_section_marker("/* History */ fixed typo") == std::optional<std::string>("History"));
  CHECK(parse_section_marker("/*  Early life  */") == std::optional<std::string>("Early life"));
  CHECK_FALSE(parse_section_marker(""));
  CHECK_FALSE(parse_section_marker("reverted vandalism"));
  CHECK_FALSE(parse_section_marker(" /* History */"));  // must begin with the marker
  CHECK_FALSE(parse_section_marker("/* unterminated"));
  CHECK_FALSE(parse_section_marker("/*   */ empty name"));
}

TEST_CASE("parse_section_marker is none for anything not starting with /*", "[ingest][property]") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "/* abcXYZ-_\t";
  std::uniform_int_distribution<std::size_t> len(0, 12), pick(0, alphabet.size() - 1);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    for (auto n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
    if (s.starts_with("/*")) continue;
    CHECK_FALSE(parse_section_marker(s));
  }
}

TEST_CASE("timestamps parse ISO-8601 UTC and round-trip", "[ingest]") {
  auto t = parse_timestamp("2023-11-30T22:57:44Z");
  REQUIRE(t);
  CHECK(format_timestamp(*t) == "2023-11-30T22:57:44Z");
  CHECK(parse_timestamp("2023-11-30 22:57:44+00:00") == t);
  CHECK(parse_timestamp("2020-02-29") == parse_timestamp("2020-02-29T00:00:00Z"));
  CHECK_FALSE(parse_timestamp("not-a-date"));
  CHECK_FALSE(parse_timestamp("2021-02-29T00:00:00Z"));
  CHECK_FALSE(parse_timestamp("2021-01-01T25:00:00Z"));
  CHECK_FALSE(parse_timestamp("2021-01-01T10:00:00+02:00"));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> secs(0, 2'000'000'000);
  for (int k = 0; k < 500; ++k) {
    Timestamp x{Seconds{secs(rng)}};
    CHECK(parse_timestamp(format_timestamp(x)) == x);
  }
}

TEST_CASE("editor ids are trimmed and must be non-empty", "[ingest]") {
  CHECK(EditorId("  Alice ") == EditorId("Alice"));
  CHECK(EditorId("192.168.0.1").str() == "192.168.0.1");
  CHECK_THROWS_AS(EditorId("   "), Error);
}

TEST_CASE("article refs validate title and category", "[ingest]") {
  auto a = make_article(" Hurricane Katrina ", "disasters");
  CHECK(a.title == "Hurricane Katrina");
  CHECK_THROWS_AS(make_article("  ", "tech"), Error);
  CHECK_THROWS_AS(make_article("X", "sports"), Error);
  CHECK(make_article("X", "sports", {"sports"}).category == "sports");
}

TEST_CASE("load_fixture: empty file gives no records", "[ingest]") {
  TempDir dir;
  write_text(dir / "empty.jsonl", "");
  CHECK(load_fixture(dir / "empty.jsonl").empty());
}

TEST_CASE("load_fixture: three lines come back sorted by timestamp", "[ingest]") {
  TempDir dir;
  write_text(dir / "three.jsonl",
             R"({"rev_id": 30, "user": "Carol", "timestamp": "2020-01-03T00:00:00Z", "comment": "", "content": null})"
             "\n"
             R"({"rev_id": 10, "user": "Alice", "timestamp": "2020-01-01T00:00:00Z", "comment": "/* History */ x", "content": null})"
             "\n"
             R"({"rev_id": 20, "user": "Bob", "timestamp": "2020-01-02T00:00:00Z", "comment": "copyedit", "content": "== A =="})"
             "\n");
  auto revs = load_fixture(dir / "three.jsonl");
  REQUIRE(revs.size() == 3);
  CHECK(revs[0].revision_id == 10);
  CHECK(revs[1].revision_id == 20);
  CHECK(revs[2].revision_id == 30);
  CHECK(revs[0].section_marker == std::optional<std::string>("History"));
  CHECK_FALSE(revs[1].section_marker);
  CHECK(revs[1].content == std::optional<std::string>("== A =="));
  CHECK_FALSE(revs[2].content);
}

TEST_CASE("load_fixture: equal timestamps are ordered by revision id", "[ingest]") {
  auto revs = parse_fixture(
      R"({"rev_id": 9, "user": "B", "timestamp": "2020-01-01T00:00:00Z", "comment": ""})"
      "\n"
      R"({"rev_id": 4, "user": "A", "timestamp": "2020-01-01T00:00:00Z", "comment": ""})");
  REQUIRE(revs.size() == 2);
  CHECK(revs[0].revision_id == 4);
  CHECK(revs[1].revision_id == 9);
}

TEST_CASE("load_fixture: errors name the problem", "[ingest]") {
  TempDir dir;
  SECTION("duplicate revision id") {
    write_text(dir / "dup.jsonl",
               R"({"rev_id": 42, "user": "A", "timestamp": "2020-01-01T00:00:00Z", "comment": ""})"
               "\n"
               R"({"rev_id": 42, "user": "B", "timestamp": "2020-01-02T00:00:00Z", "comment": ""})"
               "\n");
    try {
      load_fixture(dir / "dup.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::duplicate_revision);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("42"));
    }
  }
  SECTION("malformed line reports its line number") {
    write_text(dir / "bad.jsonl",
               R"({"rev_id": 1, "user": "A", "timestamp": "2020-01-01T00:00:00Z", "comment": ""})"
               "\n\n{not json\n");
    try {
      load_fixture(dir / "bad.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::parse);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 3"));
    }
  }
  SECTION("bad timestamp cites the revision id") {
    write_text(dir / "ts.jsonl", R"({"rev_id": 77, "user": "A", "timestamp": "not-a-date", "comment": ""})");
    try {
      load_fixture(dir / "ts.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::parse);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("77"));
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("timestamp"));
    }
  }
  SECTION("missing file") {
    try {
      load_fixture(dir / "nope.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::io);
    }
  }
  SECTION("empty user") {
    CHECK_THROWS_AS(parse_fixture(R"({"rev_id": 1, "user": " ", "timestamp": "2020-01-01T00:00:00Z", "comment": ""})"),
                    Error);
  }
  SECTION("non-positive rev_id") {
    CHECK_THROWS_AS(parse_fixture(R"({"rev_id": 0, "user": "A", "timestamp": "2020-01-01T00:00:00Z", "comment": ""})"),
                    Error);
  }
}

TEST_CASE("load_fixture output is sorted and a pure function of the bytes", "[ingest][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RevisionRecord> revs;
    std::uniform_int_distribution<int> n(0, 40), editor(0, 5);
    std::uniform_int_distribution<std::int64_t> offset(0, 3600 * 24 * 3);
    std::vector<std::int64_t> ids(200);
    std::iota(ids.begin(), ids.end(), 1);
    std::shuffle(ids.begin(), ids.end(), rng);
    const Timestamp base = testing_support::at("2019-06-01T00:00:00Z");
    for (int k = n(rng); k > 0; --k) {
      // coarse offsets so timestamp ties are common
      auto t = base + Seconds{offset(rng) / 7200 * 7200};
      revs.push_back(testing_support::rev(ids[static_cast<std::size_t>(k)], ("U" + std::to_string(editor(rng))).c_str(), t));
    }
    auto bytes = to_fixture(revs);
    auto a = parse_fixture(bytes);
    auto b = parse_fixture(bytes);
    REQUIRE(a.size() == revs.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].revision_id == b[k].revision_id);
      CHECK(a[k].editor == b[k].editor);
      if (k > 0) {
        CHECK(a[k - 1].timestamp <= a[k].timestamp);
        if (a[k - 1].timestamp == a[k].timestamp) CHECK(a[k - 1].revision_id < a[k].revision_id);
      }
    }
  }
}

TEST_CASE("exclude_editors drops listed accounts", "[ingest]") {
  auto t = testing_support::at("2020-01-01T00:00:00Z");
  std::vector<RevisionRecord> revs{testing_support::rev(1, "A", t), testing_support::rev(2, "ClueBot NG", t),
                                   testing_support::rev(3, "B", t)};
  exclude_editors(revs, {EditorId("ClueBot NG")});
  REQUIRE(revs.size() == 2);
  CHECK(revs[0].editor == EditorId("A"));
  CHECK(revs[1].editor == EditorId("B"));
}
