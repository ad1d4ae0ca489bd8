#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace cocreate {

/// UTC instant with second resolution.
using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

inline constexpr std::int64_t kSecondsPerDay = 86400;

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return ec == std::errc{} && p == s.data() + pos + len;
}

}  // namespace detail

/// Parses "YYYY-MM-DDTHH:MM:SSZ", the same with a "+00:00" offset or a
/// space separator, and bare "YYYY-MM-DD" (midnight UTC). Non-UTC offsets
/// are rejected.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
  if (!detail::read_int(s, 0, 4, y) || s.size() < 10 || s[4] != '-' ||
      !detail::read_int(s, 5, 2, mo) || s[7] != '-' || !detail::read_int(s, 8, 2, d))
    return std::nullopt;
  std::string_view rest = s.substr(10);
  if (!rest.empty()) {
    if (rest.size() < 9 || (rest[0] != 'T' && rest[0] != ' ')) return std::nullopt;
    if (!detail::read_int(rest, 1, 2, h) || rest[3] != ':' || !detail::read_int(rest, 4, 2, mi) ||
        rest[6] != ':' || !detail::read_int(rest, 7, 2, se))
      return std::nullopt;
    std::string_view zone = rest.substr(9);
    if (zone != "Z" && zone != "+00:00" && zone != "") return std::nullopt;
    if (h > 23 || mi > 59 || se > 59) return std::nullopt;
  }
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Timestamp{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{se}};
}

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss hms{t - day_point};
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(hms.hours().count()), static_cast<long long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

/// Converts a duration given in (possibly fractional) hours or days to whole seconds.
inline Seconds hours_to_seconds(double hours) {
  return Seconds{static_cast<std::int64_t>(std::llround(hours * 3600.0))};
}
inline Seconds days_to_seconds(double days) {
  return Seconds{static_cast<std::int64_t>(std::llround(days * static_cast<double>(kSecondsPerDay)))};
}

}  // namespace cocreate
