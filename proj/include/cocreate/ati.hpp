#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "cocreate/error.hpp"
#include "cocreate/revision.hpp"
#include "cocreate/time_util.hpp"

namespace cocreate {

struct AtiParams {
  double threshold_hours = 48.0;

  Seconds threshold() const { return hours_to_seconds(threshold_hours); }
  void validate() const {
    if (!(threshold_hours > 0.0)) throw Error(Errc::config, "threshold_hours must be positive");
  }
};

enum class PairSide : std::uint8_t { first, second };

struct PairEvent {
  Timestamp timestamp;
  PairSide side;
  std::int64_t revision_id;
};

/// Merged edit sequence of exactly two editors, ordered by (timestamp, revision_id).
/// Edits by anyone else are not part of the timeline.
struct PairTimeline {
  std::vector<PairEvent> events;

  std::size_t size() const noexcept { return events.size(); }
  bool empty() const noexcept { return events.empty(); }
};

inline PairTimeline build_pair_timeline(std::span<const RevisionRecord> edits_i,
                                        std::span<const RevisionRecord> edits_j) {
  auto check_single = [](std::span<const RevisionRecord> edits, const char* side) {
    for (const auto& r : edits)
      if (r.editor != edits.front().editor)
        throw Error(Errc::invalid_pair, std::string("edits on side ") + side + " come from more than one editor");
  };
  check_single(edits_i, "i");
  check_single(edits_j, "j");
  if (!edits_i.empty() && !edits_j.empty() && edits_i.front().editor == edits_j.front().editor)
    throw Error(Errc::invalid_pair, "both sides belong to editor '" + edits_i.front().editor.str() + "'");

  PairTimeline tl;
  tl.events.reserve(edits_i.size() + edits_j.size());
  for (const auto& r : edits_i) tl.events.push_back({r.timestamp, PairSide::first, r.revision_id});
  for (const auto& r : edits_j) tl.events.push_back({r.timestamp, PairSide::second, r.revision_id});
  std::sort(tl.events.begin(), tl.events.end(), [](const PairEvent& a, const PairEvent& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.revision_id < b.revision_id;
  });
  return tl;
}

/// Alternating timed interactions: the number of consecutive events whose
/// editors differ and whose gap is at most the threshold (inclusive).
inline std::int64_t ati_weight(const PairTimeline& timeline, const AtiParams& params) {
  const auto limit = params.threshold();
  std::int64_t count = 0;
  for (std::size_t k = 1; k < timeline.events.size(); ++k) {
    const auto& prev = timeline.events[k - 1];
    const auto& next = timeline.events[k];
    auto gap = next.timestamp - prev.timestamp;
    if (gap < Seconds{0}) gap = -gap;
    if (prev.side != next.side && gap <= limit) ++count;
  }
  return count;
}

}  // namespace cocreate
