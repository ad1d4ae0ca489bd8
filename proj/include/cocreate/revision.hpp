#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cocreate/error.hpp"
#include "cocreate/time_util.hpp"

namespace cocreate {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Registered username or anonymous IP string. Compared byte-wise after trimming.
class EditorId {
 public:
  EditorId() = default;
  explicit EditorId(std::string_view id) : id_(trim(id)) {
    if (id_.empty()) throw Error(Errc::parse, "editor id is empty");
  }

  const std::string& str() const noexcept { return id_; }
  auto operator<=>(const EditorId&) const = default;

 private:
  std::string id_;
};

inline const std::vector<std::string>& default_categories() {
  static const std::vector<std::string> labels{"politics", "conflicts", "disasters", "tech",
                                               "entertainment"};
  return labels;
}

struct ArticleRef {
  std::string title;
  std::string category;

  auto operator<=>(const ArticleRef&) const = default;
};

/// Validates and normalizes an article reference against the allowed category labels.
inline ArticleRef make_article(std::string_view title, std::string_view category,
                               const std::vector<std::string>& allowed = default_categories()) {
  ArticleRef ref{std::string(trim(title)), std::string(trim(category))};
  if (ref.title.empty()) throw Error(Errc::config, "article title is empty");
  if (std::find(allowed.begin(), allowed.end(), ref.category) == allowed.end())
    throw Error(Errc::config, "unknown category '" + ref.category + "' for article '" + ref.title + "'");
  return ref;
}

struct RevisionRecord {
  std::int64_t revision_id = 0;
  EditorId editor;
  Timestamp timestamp{};
  std::string comment;
  std::optional<std::string> section_marker;
  std::optional<std::string> content;
};

/// Extracts the section name from a MediaWiki auto-summary such as
/// "/* History */ fixed typo".
inline std::optional<std::string> parse_section_marker(std::string_view comment) {
  if (!comment.starts_with("/*")) return std::nullopt;
  auto close = comment.find("*/", 2);
  if (close == std::string_view::npos) return std::nullopt;
  auto name = trim(comment.substr(2, close - 2));
  if (name.empty()) return std::nullopt;
  return std::string(name);
}

/// Total order used everywhere revisions are sequenced: (timestamp, revision_id).
inline bool revision_before(const RevisionRecord& a, const RevisionRecord& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.revision_id < b.revision_id;
}

/// Sorts in place and rejects duplicate revision ids.
inline void sort_revisions(std::vector<RevisionRecord>& revs) {
  std::sort(revs.begin(), revs.end(), revision_before);
  std::vector<std::int64_t> ids;
  ids.reserve(revs.size());
  for (const auto& r : revs) ids.push_back(r.revision_id);
  std::sort(ids.begin(), ids.end());
  auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end())
    throw Error(Errc::duplicate_revision, "revision_id " + std::to_string(*dup) + " appears more than once");
}

/// Drops revisions whose editor appears in `excluded` (e.g. a bot list).
inline void exclude_editors(std::vector<RevisionRecord>& revs, const std::vector<EditorId>& excluded) {
  if (excluded.empty()) return;
  std::erase_if(revs, [&](const RevisionRecord& r) {
    return std::find(excluded.begin(), excluded.end(), r.editor) != excluded.end();
  });
}

}  // namespace cocreate
