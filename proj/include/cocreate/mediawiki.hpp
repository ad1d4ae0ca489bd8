#pragma once

#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cocreate/error.hpp"
#include "cocreate/revision.hpp"
#include "cocreate/time_util.hpp"

namespace cocreate {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Minimal GET transport so the client can be driven by a fake in tests.
/// Implementations throw Error(Errc::transport) when no response was received.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& path_and_query) = 0;
};

/// Splits "scheme://host[:port]/path" into ("scheme://host[:port]", "/path").
inline std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::config, "endpoint '" + url + "' has no scheme");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(const std::string& scheme_host_port, std::string user_agent)
      : client_(scheme_host_port), user_agent_(std::move(user_agent)) {
    client_.set_connection_timeout(10, 0);
    client_.set_read_timeout(60, 0);
    client_.set_follow_location(true);
  }

  HttpResponse get(const std::string& path_and_query) override {
    httplib::Headers headers{{"User-Agent", user_agent_}};
    auto res = client_.Get(path_and_query, headers);
    if (!res) throw Error(Errc::transport, "GET " + path_and_query + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  httplib::Client client_;
  std::string user_agent_;
};

/// Enforces a minimum delay between consecutive calls. Thread-safe.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds delay) : delay_(delay) {}

  void acquire() {
    std::lock_guard lock(mu_);
    auto now = std::chrono::steady_clock::now();
    if (started_ && now < next_) {
      std::this_thread::sleep_until(next_);
      now = next_;
    }
    started_ = true;
    next_ = now + delay_;
  }

 private:
  std::mutex mu_;
  std::chrono::milliseconds delay_;
  std::chrono::steady_clock::time_point next_{};
  bool started_ = false;
};

struct FetchOptions {
  int page_limit = 500;
  std::chrono::milliseconds rate_delay{200};
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{500};
  bool include_content = false;
  std::string user_agent = "cocreate/0.1 (collaboration-network research tool)";
};

inline std::string url_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

namespace detail {

inline std::optional<RevisionRecord> revision_from_api_json(const nlohmann::json& rev) {
  auto fail = [](const std::string& why) { return Error(Errc::parse, why); };
  auto id = rev.find("revid");
  if (id == rev.end() || !id->is_number_integer() || id->get<std::int64_t>() <= 0)
    throw fail("revision field 'revid' missing or not a positive integer");
  RevisionRecord rec;
  rec.revision_id = id->get<std::int64_t>();
  const auto rid = std::to_string(rec.revision_id);

  // Suppressed usernames cannot be attributed to a node.
  if (rev.value("userhidden", false)) return std::nullopt;
  auto user = rev.find("user");
  if (user == rev.end() || !user->is_string() || trim(user->get_ref<const std::string&>()).empty())
    throw fail("revision " + rid + ": field 'user' missing or empty");
  rec.editor = EditorId(user->get_ref<const std::string&>());

  auto ts = rev.find("timestamp");
  if (ts == rev.end() || !ts->is_string()) throw fail("revision " + rid + ": field 'timestamp' missing");
  auto parsed = parse_timestamp(ts->get_ref<const std::string&>());
  if (!parsed)
    throw fail("revision " + rid + ": field 'timestamp' is not ISO-8601 UTC: '" + ts->get<std::string>() + "'");
  rec.timestamp = *parsed;

  auto comment = rev.find("comment");
  if (comment != rev.end()) {
    if (!comment->is_string()) throw fail("revision " + rid + ": field 'comment' is not a string");
    rec.comment = comment->get<std::string>();
  }
  rec.section_marker = parse_section_marker(rec.comment);

  if (auto slots = rev.find("slots"); slots != rev.end() && slots->contains("main")) {
    const auto& main = (*slots)["main"];
    if (auto c = main.find("content"); c != main.end() && c->is_string()) rec.content = c->get<std::string>();
  } else if (auto c = rev.find("content"); c != rev.end() && c->is_string()) {
    rec.content = c->get<std::string>();
  }
  return rec;
}

}  // namespace detail

/// Revision-history client for a MediaWiki `api.php` endpoint. All calls made
/// through one client share its rate limiter and are serialized.
class MediaWikiClient {
 public:
  MediaWikiClient(std::string endpoint, FetchOptions options, std::unique_ptr<HttpTransport> transport = nullptr)
      : options_(std::move(options)), limiter_(options_.rate_delay) {
    if (options_.page_limit <= 0) throw Error(Errc::config, "page_limit must be positive");
    auto [base, path] = split_endpoint(endpoint);
    path_ = path;
    transport_ = transport ? std::move(transport) : std::make_unique<HttplibTransport>(base, options_.user_agent);
  }

  /// Revisions of `article` with timestamps in [start, end), sorted by (timestamp, revision_id).
  std::vector<RevisionRecord> fetch_revisions(const ArticleRef& article, Timestamp start, Timestamp end) {
    if (!(start < end)) throw Error(Errc::empty_range, "fetch range start must precede end");
    std::lock_guard lock(mu_);

    std::vector<RevisionRecord> out;
    std::map<std::string, std::string> continuation;
    for (;;) {
      auto body = get_with_retry(build_query(article, start, end, continuation));
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(body);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::parse, std::string("response is not JSON: ") + e.what());
      }
      if (auto err = doc.find("error"); err != doc.end())
        throw Error(Errc::endpoint, "API error: " + err->dump());
      collect_page(doc, out, start, end);

      auto cont = doc.find("continue");
      if (cont == doc.end() || !cont->is_object()) break;
      continuation.clear();
      for (const auto& [k, v] : cont->items()) {
        if (!v.is_string() && !v.is_number()) throw Error(Errc::parse, "continuation field '" + k + "' malformed");
        continuation[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    sort_revisions(out);
    return out;
  }

 private:
  std::string build_query(const ArticleRef& article, Timestamp start, Timestamp end,
                          const std::map<std::string, std::string>& continuation) const {
    std::string rvprop = options_.include_content ? "ids|timestamp|user|comment|content" : "ids|timestamp|user|comment";
    std::string q = path_ + "?action=query&format=json&formatversion=2&prop=revisions";
    q += "&titles=" + url_encode(article.title);
    q += "&rvprop=" + url_encode(rvprop);
    if (options_.include_content) q += "&rvslots=main";
    q += "&rvlimit=" + std::to_string(options_.page_limit);
    q += "&rvdir=newer";
    q += "&rvstart=" + url_encode(format_timestamp(start));
    // rvend is inclusive on the server side; the half-open bound is enforced on receipt.
    q += "&rvend=" + url_encode(format_timestamp(end));
    for (const auto& [k, v] : continuation) q += "&" + url_encode(k) + "=" + url_encode(v);
    return q;
  }

  std::string get_with_retry(const std::string& query) {
    for (int attempt = 0;; ++attempt) {
      limiter_.acquire();
      try {
        auto res = transport_->get(query);
        if (res.status < 200 || res.status >= 300)
          throw Error(Errc::endpoint, "HTTP status " + std::to_string(res.status), res.status);
        return std::move(res.body);
      } catch (const Error& e) {
        if (!e.retryable() || attempt >= options_.max_retries) throw;
        std::this_thread::sleep_for(options_.backoff_base * (1 << attempt));
      }
    }
  }

  static void collect_page(const nlohmann::json& doc, std::vector<RevisionRecord>& out, Timestamp start,
                           Timestamp end) {
    auto query = doc.find("query");
    if (query == doc.end()) return;  // nothing in range
    auto pages = query->find("pages");
    if (pages == query->end()) throw Error(Errc::parse, "field 'query.pages' missing");
    auto visit = [&](const nlohmann::json& page) {
      if (page.contains("missing")) throw Error(Errc::endpoint, "page '" + page.value("title", std::string{}) + "' does not exist");
      auto revs = page.find("revisions");
      if (revs == page.end()) return;
      if (!revs->is_array()) throw Error(Errc::parse, "field 'revisions' is not an array");
      for (const auto& rev : *revs) {
        auto rec = detail::revision_from_api_json(rev);
        if (rec && rec->timestamp >= start && rec->timestamp < end) out.push_back(std::move(*rec));
      }
    };
    if (pages->is_array()) {
      for (const auto& p : *pages) visit(p);
    } else if (pages->is_object()) {  // formatversion=1 keyed by page id
      for (const auto& [_, p] : pages->items()) visit(p);
    } else {
      throw Error(Errc::parse, "field 'query.pages' malformed");
    }
  }

  FetchOptions options_;
  RateLimiter limiter_;
  std::string path_;
  std::unique_ptr<HttpTransport> transport_;
  std::mutex mu_;
};

/// One-shot convenience wrapper around MediaWikiClient.
inline std::vector<RevisionRecord> fetch_revisions(const ArticleRef& article, Timestamp start, Timestamp end,
                                                   const std::string& endpoint, int page_limit) {
  FetchOptions opts;
  opts.page_limit = page_limit;
  MediaWikiClient client(endpoint, opts);
  return client.fetch_revisions(article, start, end);
}

}  // namespace cocreate
