#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smsxfer/transcode.hpp"

namespace smsxfer {

/// Each rendered segment starts with a zero-padded decimal index "000".."999".
inline constexpr std::size_t kHeaderPoints = 3;
inline constexpr std::size_t kMaxSegments = 1000;
/// One UCS-2 SMS.
inline constexpr std::size_t kDefaultCapacityPoints = 70;

/// Per-message size limit, header included.
class SegmentPlan {
 public:
  /// Throws std::invalid_argument when capacity_points < 4.
  explicit SegmentPlan(std::size_t capacity_points = kDefaultCapacityPoints);

  std::size_t capacity_points() const noexcept { return capacity_points_; }
  std::size_t body_capacity() const noexcept { return capacity_points_ - kHeaderPoints; }

  friend bool operator==(const SegmentPlan&, const SegmentPlan&) = default;

 private:
  std::size_t capacity_points_;
};

struct Segment {
  Segment() = default;
  /// Throws std::out_of_range when index > 999.
  Segment(std::size_t index, CodePointText body);

  std::uint16_t index = 0;
  CodePointText body;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Number of segments split() produces for a payload of this many points:
/// max(1, ceil(payload_points / body_capacity)). Does not enforce the
/// 1000-segment limit.
std::size_t segment_count(std::size_t payload_points, const SegmentPlan& plan) noexcept;

/// Cuts the payload into segments 0..k-1 whose bodies hold body_capacity
/// points each (the last may be shorter; an empty payload yields one empty
/// segment). Throws TooManySegments when k > 1000.
std::vector<Segment> split(const CodePointText& payload, const SegmentPlan& plan);

/// Three ASCII digits followed by the body.
CodePointText render(const Segment& segment);

/// Inverse of render. Throws MalformedHeader.
Segment parse(std::span<const CodePoint> rendered);
inline Segment parse(const CodePointText& rendered) { return parse(rendered.points()); }

/// Collects segments for one transfer. Exact redeliveries are ignored;
/// a second, different body for the same index is rejected.
class Reassembler {
 public:
  enum class AddResult { kStored, kDuplicate };

  /// Throws ConflictingDuplicate.
  AddResult add(Segment segment);

  std::size_t size() const noexcept { return parts_.size(); }
  bool contains(std::size_t index) const { return parts_.contains(static_cast<std::uint16_t>(index)); }

  /// Indices absent from 0..expected_count-1, or, when the count is unknown,
  /// gaps below the highest index seen (index 0 when nothing arrived).
  std::vector<std::size_t> missing(std::optional<std::size_t> expected_count) const;

  /// Concatenates bodies in index order. Throws MissingSegments, or
  /// UnexpectedSegment when an index at or beyond expected_count is held.
  CodePointText finish(std::optional<std::size_t> expected_count) const;

 private:
  std::map<std::uint16_t, CodePointText> parts_;
};

/// One-shot form of Reassembler: add every segment then finish.
CodePointText reassemble(std::span<const Segment> segments,
                         std::optional<std::size_t> expected_count);

/// Contents of a segments file: an optional "#count=<k>" manifest line
/// followed by one UTF-8 rendered segment per LF-terminated line.
struct SegmentsFile {
  std::optional<std::size_t> count;
  std::vector<std::string> lines;
};

/// Serializes rendered messages, one per line, each terminated by LF.
std::string write_segments_file(std::span<const CodePointText> messages,
                                std::optional<std::size_t> count);

/// Splits file contents into raw lines. A "#count=" first line is lifted
/// into `count`; a final LF does not introduce an empty line. Lines are not
/// decoded here so that callers can skip malformed ones individually.
SegmentsFile read_segments_file(std::string_view contents);

}  // namespace smsxfer
