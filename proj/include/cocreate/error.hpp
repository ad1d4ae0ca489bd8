#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace cocreate {

enum class Errc {
  transport,        // network failure, retryable
  endpoint,         // HTTP non-2xx
  parse,            // malformed payload or fixture line
  io,               // missing / unreadable file
  duplicate_revision,
  invalid_pair,
  degenerate_article,
  no_collaboration,
  empty_range,
  empty_graph,
  negative_age,
  must_be_connected,
  undefined_path,
  undefined_centralization,
  singular_design,
  insufficient_data,
  no_data,
  domain,
  config,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::transport: return "transport";
    case Errc::endpoint: return "endpoint";
    case Errc::parse: return "parse";
    case Errc::io: return "io";
    case Errc::duplicate_revision: return "duplicate-revision";
    case Errc::invalid_pair: return "invalid-pair";
    case Errc::degenerate_article: return "degenerate-article";
    case Errc::no_collaboration: return "no-collaboration";
    case Errc::empty_range: return "empty-range";
    case Errc::empty_graph: return "empty-graph";
    case Errc::negative_age: return "negative-age";
    case Errc::must_be_connected: return "must-be-connected";
    case Errc::undefined_path: return "undefined-path";
    case Errc::undefined_centralization: return "undefined-centralization";
    case Errc::singular_design: return "singular-design";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::no_data: return "no-data";
    case Errc::domain: return "domain";
    case Errc::config: return "config";
  }
  return "unknown";
}

/// Single exception type for the library. `code()` tells callers which
/// contract was violated; `http_status()` is set for endpoint errors.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<int> http_status = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        http_status_(http_status) {}

  Errc code() const noexcept { return code_; }
  std::optional<int> http_status() const noexcept { return http_status_; }
  bool retryable() const noexcept { return code_ == Errc::transport; }

 private:
  Errc code_;
  std::optional<int> http_status_;
};

}  // namespace cocreate
