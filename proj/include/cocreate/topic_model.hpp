#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cocreate/error.hpp"
#include "cocreate/revision.hpp"
#include "cocreate/stopwords.hpp"

namespace cocreate {

/// Lowercase alphabetic tokens, stopwords removed.
using TokenList = std::vector<std::string>;
using SectionNames = std::set<std::string>;

/// The section headings of an article at one revision.
struct SectionSet {
  SectionNames sections;
  std::int64_t source_revision_id = 0;

  std::size_t size() const noexcept { return sections.size(); }
  bool empty() const noexcept { return sections.empty(); }
};

/// Sections one editor has worked on within a window.
struct TopicSet {
  EditorId editor;
  SectionNames topics;
};

namespace detail {

inline bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}
inline bool is_separator(unsigned char c) { return c < 0x80 && !is_ascii_alnum(c); }

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace detail

/// Splits on ASCII punctuation and whitespace, lowercases, and drops tokens
/// that contain digits or non-ASCII bytes, then removes stopwords.
inline TokenList preprocess_text(std::string_view text, const StopwordSet& stopwords) {
  TokenList out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_separator(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    bool alphabetic = true;
    while (i < text.size() && !detail::is_separator(static_cast<unsigned char>(text[i]))) {
      unsigned char c = static_cast<unsigned char>(text[i]);
      if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) alphabetic = false;
      ++i;
    }
    if (i == start || !alphabetic) continue;
    auto token = detail::to_lower_ascii(text.substr(start, i - start));
    if (stopwords.find(token) == stopwords.end()) out.push_back(std::move(token));
  }
  return out;
}

/// Collects "== Name ==" style headings (levels 2 through 6).
inline SectionSet extract_sections(std::string_view wikitext) {
  SectionSet out;
  std::size_t pos = 0;
  while (pos <= wikitext.size()) {
    auto nl = wikitext.find('\n', pos);
    auto line = trim(wikitext.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? wikitext.size() + 1 : nl + 1;

    std::size_t lead = 0;
    while (lead < line.size() && line[lead] == '=') ++lead;
    if (lead == line.size()) continue;  // empty or all '='
    std::size_t trail = 0;
    while (trail < line.size() && line[line.size() - 1 - trail] == '=') ++trail;
    std::size_t level = std::min({lead, trail, std::size_t{6}});
    if (level < 2) continue;
    auto name = trim(line.substr(level, line.size() - 2 * level));
    if (!name.empty()) out.sections.emplace(name);
  }
  return out;
}

/// Sections a single revision touched. A section marker naming a known
/// section wins outright; otherwise every section sharing at least one
/// token with the revision text is assigned.
inline SectionNames allocate_topics(const RevisionRecord& rev, const SectionSet& sections,
                                    const StopwordSet& stopwords) {
  if (rev.section_marker) {
    auto marker = detail::to_lower_ascii(*rev.section_marker);
    for (const auto& s : sections.sections)
      if (detail::to_lower_ascii(s) == marker) return {s};
  }
  if (!rev.content) return {};

  auto tokens = preprocess_text(*rev.content, stopwords);
  std::set<std::string, std::less<>> vocab(tokens.begin(), tokens.end());
  SectionNames out;
  for (const auto& s : sections.sections) {
    for (const auto& t : preprocess_text(s, stopwords)) {
      if (vocab.contains(t)) {
        out.insert(s);
        break;
      }
    }
  }
  return out;
}

/// |topics_i ∩ topics_j| / section_count.
inline double content_weight(const SectionNames& topics_i, const SectionNames& topics_j, std::size_t section_count) {
  if (section_count == 0) throw Error(Errc::degenerate_article, "article has no sections");
  std::size_t shared = 0;
  for (const auto& t : topics_i) shared += topics_j.count(t);
  return static_cast<double>(shared) / static_cast<double>(section_count);
}

}  // namespace cocreate
