#include <catch2/catch_amalgamated.hpp>

#include <deque>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cocreate/mediawiki.hpp"
#include "test_support.hpp"

using namespace cocreate;
using testing_support::at;

namespace {

struct Scripted {
  std::deque<std::function<HttpResponse()>> replies;
  std::vector<std::string> requests;
};

class FakeTransport : public HttpTransport {
 public:
  explicit FakeTransport(std::shared_ptr<Scripted> s) : s_(std::move(s)) {}
  HttpResponse get(const std::string& q) override {
    s_->requests.push_back(q);
    if (s_->replies.empty()) throw Error(Errc::transport, "script exhausted");
    auto next = std::move(s_->replies.front());
    s_->replies.pop_front();
    return next();
  }

 private:
  std::shared_ptr<Scripted> s_;
};

FetchOptions fast_options() {
  FetchOptions o;
  o.rate_delay = std::chrono::milliseconds(0);
  o.backoff_base = std::chrono::milliseconds(1);
  o.page_limit = 2;
  return o;
}

nlohmann::json api_rev(std::int64_t id, const char* user, const char* ts, const char* comment = "") {
  return {{"revid", id}, {"parentid", 0}, {"user", user}, {"timestamp", ts}, {"comment", comment}};
}

std::string page_body(std::vector<nlohmann::json> revs, std::optional<std::string> cont) {
  nlohmann::json doc = {{"batchcomplete", true},
                        {"query", {{"pages", nlohmann::json::array({{{"pageid", 1}, {"ns", 0}, {"title", "Test"},
                                                                     {"revisions", nlohmann::json(revs)}}})}}}};
  if (cont) doc["continue"] = {{"rvcontinue", *cont}, {"continue", "||"}};
  return doc.dump();
}

const ArticleRef kArticle{"Test", "tech"};

}  // namespace

TEST_CASE("client follows continuation and sorts records", "[mediawiki]") {
  auto s = std::make_shared<Scripted>();
  s->replies.push_back([] {
    return HttpResponse{200, page_body({api_rev(3, "Carol", "2020-01-03T00:00:00Z"),
                                        api_rev(1, "Alice", "2020-01-01T00:00:00Z", "/* Intro */ x")},
                                       "20200104|5")};
  });
  s->replies.push_back([] { return HttpResponse{200, page_body({api_rev(2, "Bob", "2020-01-02T00:00:00Z")}, std::nullopt)}; });

  MediaWikiClient client("https://example.org/w/api.php", fast_options(), std::make_unique<FakeTransport>(s));
  auto revs = client.fetch_revisions(kArticle, at("2020-01-01"), at("2021-01-01"));
  REQUIRE(revs.size() == 3);
  CHECK(revs[0].revision_id == 1);
  CHECK(revs[1].revision_id == 2);
  CHECK(revs[2].revision_id == 3);
  CHECK(revs[0].section_marker == std::optional<std::string>("Intro"));

  REQUIRE(s->requests.size() == 2);
  CHECK(s->requests[0].starts_with("/w/api.php?action=query"));
  CHECK_THAT(s->requests[0], Catch::Matchers::ContainsSubstring("formatversion=2"));
  CHECK_THAT(s->requests[0], Catch::Matchers::ContainsSubstring("rvlimit=2"));
  CHECK_THAT(s->requests[0], Catch::Matchers::ContainsSubstring("rvdir=newer"));
  CHECK_THAT(s->requests[1], Catch::Matchers::ContainsSubstring("rvcontinue=20200104%7C5"));
}

TEST_CASE("records outside the half-open range are dropped", "[mediawiki]") {
  auto s = std::make_shared<Scripted>();
  s->replies.push_back([] {
    return HttpResponse{200, page_body({api_rev(1, "A", "2020-01-01T00:00:00Z"), api_rev(2, "B", "2020-02-01T00:00:00Z")},
                                       std::nullopt)};
  });
  MediaWikiClient client("https://example.org/w/api.php", fast_options(), std::make_unique<FakeTransport>(s));
  auto revs = client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01"));
  REQUIRE(revs.size() == 1);
  CHECK(revs[0].revision_id == 1);
}

TEST_CASE("a range with no revisions gives an empty list", "[mediawiki]") {
  auto s = std::make_shared<Scripted>();
  s->replies.push_back([] { return HttpResponse{200, page_body({}, std::nullopt)}; });
  MediaWikiClient client("https://example.org/w/api.php", fast_options(), std::make_unique<FakeTransport>(s));
  CHECK(client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01")).empty());
}

TEST_CASE("inverted range is rejected before any request", "[mediawiki]") {
  auto s = std::make_shared<Scripted>();
  MediaWikiClient client("https://example.org/w/api.php", fast_options(), std::make_unique<FakeTransport>(s));
  try {
    client.fetch_revisions(kArticle, at("2020-02-01"), at("2020-02-01"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_range);
  }
  CHECK(s->requests.empty());
}

TEST_CASE("transport failures are retried up to the limit", "[mediawiki]") {
  auto s = std::make_shared<Scripted>();
  SECTION("recovers on the third attempt") {
    for (int k = 0; k < 2; ++k) s->replies.push_back([]() -> HttpResponse { throw Error(Errc::transport, "reset"); });
    s->replies.push_back([] { return HttpResponse{200, page_body({api_rev(1, "A", "2020-01-01T00:00:00Z")}, std::nullopt)}; });
    MediaWikiClient client("https://example.org/w/api.php", fast_options(), std::make_unique<FakeTransport>(s));
    CHECK(client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01")).size() == 1);
    CHECK(s->requests.size() == 3);
  }
  SECTION("gives up after three retries") {
    for (int k = 0; k < 10; ++k) s->replies.push_back([]() -> HttpResponse { throw Error(Errc::transport, "reset"); });
    MediaWikiClient client("https://example.org/w/api.php", fast_options(), std::make_unique<FakeTransport>(s));
    try {
      client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::transport);
      CHECK(e.retryable());
    }
    CHECK(s->requests.size() == 4);
  }
}

TEST_CASE("non-2xx responses are endpoint errors carrying the status", "[mediawiki]") {
  auto s = std::make_shared<Scripted>();
  s->replies.push_back([] { return HttpResponse{503, "busy"}; });
  MediaWikiClient client("https://example.org/w/api.php", fast_options(), std::make_unique<FakeTransport>(s));
  try {
    client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::endpoint);
    CHECK(e.http_status() == 503);
    CHECK_FALSE(e.retryable());
  }
  CHECK(s->requests.size() == 1);
}

TEST_CASE("malformed payloads name the field and revision", "[mediawiki]") {
  auto s = std::make_shared<Scripted>();
  auto client_for = [&](std::string body) {
    s->replies.push_back([body] { return HttpResponse{200, body}; });
    return MediaWikiClient("https://example.org/w/api.php", fast_options(), std::make_unique<FakeTransport>(s));
  };
  SECTION("bad timestamp") {
    auto client = client_for(page_body({api_rev(9001, "A", "not-a-date")}, std::nullopt));
    try {
      client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::parse);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("9001"));
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("timestamp"));
    }
  }
  SECTION("not JSON") {
    auto client = client_for("<html>");
    CHECK_THROWS_AS(client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01")), Error);
  }
  SECTION("API error object") {
    auto client = client_for(R"({"error": {"code": "badvalue"}})");
    try {
      client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::endpoint);
    }
  }
  SECTION("missing page") {
    auto client = client_for(R"({"query": {"pages": [{"title": "Test", "missing": true}]}})");
    try {
      client.fetch_revisions(kArticle, at("2020-01-01"), at("2020-02-01"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::endpoint);
    }
  }
}

TEST_CASE("hidden usernames are skipped and content is read from the main slot", "[mediawiki]") {
  nlohmann::json hidden = {{"revid", 5}, {"userhidden", true}, {"timestamp", "2020-01-01T00:00:00Z"}};
  CHECK_FALSE(detail::revision_from_api_json(hidden));
  nlohmann::json with_content = api_rev(6, "A", "2020-01-01T00:00:00Z");
  with_content["slots"] = {{"main", {{"contentmodel", "wikitext"}, {"content", "== H =="}}}};
  auto rec = detail::revision_from_api_json(with_content);
  REQUIRE(rec);
  CHECK(rec->content == std::optional<std::string>("== H =="));
}

TEST_CASE("rate limiter spaces consecutive calls", "[mediawiki]") {
  RateLimiter limiter(std::chrono::milliseconds(30));
  auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < 4; ++k) limiter.acquire();
  CHECK(std::chrono::steady_clock::now() - t0 >= std::chrono::milliseconds(90));
}

TEST_CASE("split_endpoint and url_encode", "[mediawiki]") {
  CHECK(split_endpoint("https://en.wikipedia.org/w/api.php") ==
        std::pair<std::string, std::string>{"https://en.wikipedia.org", "/w/api.php"});
  CHECK(split_endpoint("http://127.0.0.1:8080") == std::pair<std::string, std::string>{"http://127.0.0.1:8080", "/"});
  CHECK_THROWS_AS(split_endpoint("en.wikipedia.org"), Error);
  CHECK(url_encode("Hurricane Katrina") == "Hurricane%20Katrina");
  CHECK(url_encode("a|b") == "a%7Cb");
}

TEST_CASE("real HTTP round trip against a local mock endpoint", "[mediawiki][http]") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Get("/w/api.php", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    if (!req.has_param("rvcontinue")) {
      res.set_content(page_body({api_rev(30, "Carol", "2020-03-01T00:00:00Z"), api_rev(10, "Alice", "2020-01-01T00:00:00Z")},
                                "page2"),
                      "application/json");
    } else {
      CHECK(req.get_param_value("rvcontinue") == "page2");
      CHECK(req.get_param_value("titles") == "Test");
      res.set_content(page_body({api_rev(20, "Bob", "2020-02-01T00:00:00Z")}, std::nullopt), "application/json");
    }
  });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  struct Stop {
    httplib::Server& s;
    std::thread& t;
    ~Stop() {
      s.stop();
      t.join();
    }
  } stop{server, th};

  MediaWikiClient client("http://127.0.0.1:" + std::to_string(port) + "/w/api.php", fast_options());
  auto revs = client.fetch_revisions(kArticle, at("2020-01-01"), at("2021-01-01"));

  REQUIRE(revs.size() == 3);
  CHECK(revs[0].revision_id == 10);
  CHECK(revs[1].revision_id == 20);
  CHECK(revs[2].revision_id == 30);
  CHECK(hits == 2);
}
