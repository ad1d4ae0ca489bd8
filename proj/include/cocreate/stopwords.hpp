#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <string_view>

#include "cocreate/error.hpp"
#include "cocreate/revision.hpp"

namespace cocreate {

using StopwordSet = std::set<std::string, std::less<>>;

// Mirrors data/stopwords.txt; a unit test keeps the two in sync.
inline constexpr std::array kDefaultStopwords = {
    "a", "about", "above", "after", "again", "against", "all", "am",
    "an", "and", "any", "are", "as", "at", "be", "because",
    "been", "before", "being", "below", "between", "both", "but", "by",
    "can", "could", "did", "do", "does", "doing", "down", "during",
    "each", "few", "for", "from", "further", "had", "has", "have",
    "having", "he", "her", "here", "hers", "herself", "him", "himself",
    "his", "how", "i", "if", "in", "into", "is", "it",
    "its", "itself", "just", "me", "more", "most", "my", "myself",
    "no", "nor", "not", "now", "of", "off", "on", "once",
    "only", "or", "other", "our", "ours", "ourselves", "out", "over",
    "own", "same", "she", "should", "so", "some", "such", "than",
    "that", "the", "their", "theirs", "them", "themselves", "then", "there",
    "these", "they", "this", "those", "through", "to", "too", "under",
    "until", "up", "very", "was", "we", "were", "what", "when",
    "where", "which", "while", "who", "whom", "why", "will", "with",
    "would", "you", "your", "yours", "yourself", "yourselves",
};

inline StopwordSet default_stopwords() {
  StopwordSet s;
  for (std::string_view w : kDefaultStopwords) s.emplace(w);
  return s;
}

/// Reads a stopword file: one word per line, lowercased, blank lines and
/// lines starting with '#' ignored.
inline StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open stopword file '" + path.string() + "'");
  StopwordSet s;
  std::string line;
  while (std::getline(in, line)) {
    auto w = std::string(trim(line));
    if (w.empty() || w.front() == '#') continue;
    for (auto& c : w)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    s.insert(std::move(w));
  }
  return s;
}

}  // namespace cocreate
