#include "smsxfer/segmentation.hpp"

#include <charconv>
#include <stdexcept>

namespace smsxfer {

namespace {

constexpr CodePoint kDigitZero = '0';
constexpr std::string_view kCountPrefix = "#count=";

bool is_digit_point(CodePoint p) { return p >= '0' && p <= '9'; }

}  // namespace

SegmentPlan::SegmentPlan(std::size_t capacity_points) : capacity_points_(capacity_points) {
  if (capacity_points_ < kHeaderPoints + 1) {
    throw std::invalid_argument("segment capacity must be at least 4 points, got " +
                                std::to_string(capacity_points_));
  }
}

Segment::Segment(std::size_t index_, CodePointText body_) : body(std::move(body_)) {
  if (index_ >= kMaxSegments) {
    throw std::out_of_range("segment index " + std::to_string(index_) + " exceeds 999");
  }
  index = static_cast<std::uint16_t>(index_);
}

std::size_t segment_count(std::size_t payload_points, const SegmentPlan& plan) noexcept {
  if (payload_points == 0) return 1;
  const std::size_t body = plan.body_capacity();
  return payload_points / body + (payload_points % body != 0 ? 1 : 0);
}

std::vector<Segment> split(const CodePointText& payload, const SegmentPlan& plan) {
  const std::size_t count = segment_count(payload.size(), plan);
  if (count > kMaxSegments) throw TooManySegments(count);

  const std::size_t body = plan.body_capacity();
  std::vector<Segment> segments;
  segments.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    segments.emplace_back(i, payload.slice(i * body, body));
  }
  return segments;
}

CodePointText render(const Segment& segment) {
  std::vector<CodePoint> points;
  points.reserve(kHeaderPoints + segment.body.size());
  const unsigned index = segment.index;
  points.push_back(static_cast<CodePoint>(kDigitZero + index / 100));
  points.push_back(static_cast<CodePoint>(kDigitZero + index / 10 % 10));
  points.push_back(static_cast<CodePoint>(kDigitZero + index % 10));
  points.insert(points.end(), segment.body.begin(), segment.body.end());
  return CodePointText::from_points(std::move(points));
}

Segment parse(std::span<const CodePoint> rendered) {
  if (rendered.size() < kHeaderPoints) {
    throw MalformedHeader("segment has " + std::to_string(rendered.size()) +
                          " points, shorter than the 3-digit index");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < kHeaderPoints; ++i) {
    if (!is_digit_point(rendered[i])) {
      throw MalformedHeader("segment header point " + std::to_string(i) + " is " +
                            std::to_string(rendered[i]) + ", not an ASCII digit");
    }
    index = index * 10 + (rendered[i] - kDigitZero);
  }
  return Segment(index, CodePointText::from_points(rendered.subspan(kHeaderPoints)));
}

Reassembler::AddResult Reassembler::add(Segment segment) {
  auto [it, inserted] = parts_.try_emplace(segment.index, std::move(segment.body));
  if (inserted) return AddResult::kStored;
  if (it->second == segment.body) return AddResult::kDuplicate;
  throw ConflictingDuplicate(segment.index);
}

std::vector<std::size_t> Reassembler::missing(std::optional<std::size_t> expected_count) const {
  std::size_t limit;
  if (expected_count) {
    limit = *expected_count;
  } else if (parts_.empty()) {
    limit = 1;
  } else {
    limit = static_cast<std::size_t>(parts_.rbegin()->first) + 1;
  }
  std::vector<std::size_t> absent;
  for (std::size_t i = 0; i < limit; ++i) {
    if (!parts_.contains(static_cast<std::uint16_t>(i))) absent.push_back(i);
  }
  return absent;
}

CodePointText Reassembler::finish(std::optional<std::size_t> expected_count) const {
  if (expected_count && !parts_.empty() && parts_.rbegin()->first >= *expected_count) {
    throw UnexpectedSegment(parts_.rbegin()->first, *expected_count);
  }
  auto absent = missing(expected_count);
  if (!absent.empty()) throw MissingSegments(std::move(absent));

  CodePointText text;
  for (const auto& [index, body] : parts_) text.append(body);
  return text;
}

CodePointText reassemble(std::span<const Segment> segments,
                         std::optional<std::size_t> expected_count) {
  Reassembler context;
  for (const auto& segment : segments) context.add(segment);
  return context.finish(expected_count);
}

std::string write_segments_file(std::span<const CodePointText> messages,
                                std::optional<std::size_t> count) {
  std::string out;
  if (count) {
    out += kCountPrefix;
    out += std::to_string(*count);
    out += '\n';
  }
  for (const auto& message : messages) {
    out += to_utf8(message);
    out += '\n';
  }
  return out;
}

SegmentsFile read_segments_file(std::string_view contents) {
  SegmentsFile file;
  bool first = true;
  while (!contents.empty()) {
    const auto eol = contents.find('\n');
    std::string_view line = contents.substr(0, eol);
    contents = eol == std::string_view::npos ? std::string_view{} : contents.substr(eol + 1);

    if (first && line.starts_with(kCountPrefix)) {
      std::size_t count = 0;
      const auto digits = line.substr(kCountPrefix.size());
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), count);
      if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
        file.count = count;
        first = false;
        continue;
      }
    }
    first = false;
    file.lines.emplace_back(line);
  }
  return file;
}

}  // namespace smsxfer
