#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cocreate/error.hpp"
#include "cocreate/revision.hpp"

namespace cocreate {

namespace detail {

inline RevisionRecord revision_from_fixture_json(const nlohmann::json& obj, std::size_t line_no) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(Errc::parse, "line " + std::to_string(line_no) + ": " + why);
  };
  if (!obj.is_object()) throw fail("expected a JSON object");

  RevisionRecord rec;
  auto id = obj.find("rev_id");
  if (id == obj.end() || !id->is_number_integer() || id->get<std::int64_t>() <= 0)
    throw fail("field 'rev_id' must be a positive integer");
  rec.revision_id = id->get<std::int64_t>();

  auto user = obj.find("user");
  if (user == obj.end() || !user->is_string() || trim(user->get_ref<const std::string&>()).empty())
    throw fail("field 'user' must be a non-empty string (rev_id " + std::to_string(rec.revision_id) + ")");
  rec.editor = EditorId(user->get_ref<const std::string&>());

  auto ts = obj.find("timestamp");
  if (ts == obj.end() || !ts->is_string())
    throw fail("field 'timestamp' must be a string (rev_id " + std::to_string(rec.revision_id) + ")");
  auto parsed = parse_timestamp(ts->get_ref<const std::string&>());
  if (!parsed)
    throw fail("field 'timestamp' is not ISO-8601 UTC: '" + ts->get<std::string>() + "' (rev_id " +
               std::to_string(rec.revision_id) + ")");
  rec.timestamp = *parsed;

  auto comment = obj.find("comment");
  if (comment != obj.end() && !comment->is_null()) {
    if (!comment->is_string())
      throw fail("field 'comment' must be a string (rev_id " + std::to_string(rec.revision_id) + ")");
    rec.comment = comment->get<std::string>();
  }
  rec.section_marker = parse_section_marker(rec.comment);

  auto content = obj.find("content");
  if (content != obj.end() && !content->is_null()) {
    if (!content->is_string())
      throw fail("field 'content' must be a string or null (rev_id " + std::to_string(rec.revision_id) + ")");
    rec.content = content->get<std::string>();
  }
  return rec;
}

}  // namespace detail

/// Parses fixture bytes: one JSON object per line, blank lines ignored.
/// Output is sorted by (timestamp, revision_id).
inline std::vector<RevisionRecord> parse_fixture(std::string_view bytes) {
  std::vector<RevisionRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto nl = bytes.find('\n', pos);
    auto line = bytes.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::parse, "line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
    }
    out.push_back(detail::revision_from_fixture_json(obj, line_no));
  }
  sort_revisions(out);
  return out;
}

inline std::vector<RevisionRecord> load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open fixture '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_fixture(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

/// Serializes records in the fixture line format (used to snapshot live fetches).
inline std::string to_fixture(const std::vector<RevisionRecord>& revs) {
  std::string out;
  for (const auto& r : revs) {
    nlohmann::ordered_json obj;
    obj["rev_id"] = r.revision_id;
    obj["user"] = r.editor.str();
    obj["timestamp"] = format_timestamp(r.timestamp);
    obj["comment"] = r.comment;
    obj["content"] = r.content ? nlohmann::ordered_json(*r.content) : nlohmann::ordered_json(nullptr);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

}  // namespace cocreate
