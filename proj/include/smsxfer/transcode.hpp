#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smsxfer/errors.hpp"

namespace smsxfer {

/// Raw payload octets. std::uint8_t pins every element to [0, 255].
using ByteStream = std::vector<std::uint8_t>;

using CodePoint = std::uint16_t;

/// Bytes at or below this value are control characters that cannot travel
/// in an SMS body; they are lifted by kControlShift.
inline constexpr CodePoint kLastControlByte = 31;
inline constexpr CodePoint kControlShift = 256;
inline constexpr CodePoint kMinCodePoint = kLastControlByte + 1;               // 32
inline constexpr CodePoint kMaxCodePoint = kLastControlByte + kControlShift;   // 287

constexpr bool is_valid_code_point(unsigned long value) noexcept {
  return value >= kMinCodePoint && value <= kMaxCodePoint;
}

/// Sequence of SMS-safe code points, each in [32, 255] or [256, 287].
/// Every constructor path validates, so a CodePointText is always well formed.
class CodePointText {
 public:
  CodePointText() = default;

  /// Throws RangeViolation naming the first offending position.
  static CodePointText from_points(std::span<const CodePoint> points);
  static CodePointText from_points(std::vector<CodePoint>&& points);
  static CodePointText from_points(std::initializer_list<CodePoint> points) {
    return from_points(std::span<const CodePoint>(points.begin(), points.size()));
  }

  /// Build from ASCII text (tests and headers). Throws RangeViolation for
  /// control characters.
  static CodePointText from_ascii(std::string_view ascii);

  std::span<const CodePoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  CodePoint operator[](std::size_t i) const { return points_[i]; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// Sub-range [offset, offset + count), clamped to the end.
  CodePointText slice(std::size_t offset, std::size_t count) const;
  void append(const CodePointText& other);

  friend bool operator==(const CodePointText&, const CodePointText&) = default;

 private:
  struct Unchecked {};
  CodePointText(Unchecked, std::vector<CodePoint> points) : points_(std::move(points)) {}

  friend CodePointText encode_bytes(std::span<const std::uint8_t> payload);

  std::vector<CodePoint> points_;
};

/// Maps each byte to one code point: 0..31 become 256..287, everything else
/// is carried unchanged. Output length equals input length.
CodePointText encode_bytes(std::span<const std::uint8_t> payload);

/// Exact inverse of encode_bytes. Throws RangeViolation if any point lies in
/// [0, 31] or at or above 288.
ByteStream decode_text(std::span<const CodePoint> points);
inline ByteStream decode_text(const CodePointText& text) { return decode_text(text.points()); }

/// UTF-8 serialization, one Unicode scalar per code point (255 -> C3 BF,
/// 256 -> C4 80, 287 -> C4 9F).
std::string to_utf8(std::span<const CodePoint> points);
inline std::string to_utf8(const CodePointText& text) { return to_utf8(text.points()); }

/// Decodes UTF-8 into raw scalar values without range checks. Throws
/// MalformedText on invalid encodings (overlong forms, surrogates, truncation).
std::vector<char32_t> utf8_scalars(std::string_view utf8);

/// Decodes UTF-8 and validates the alphabet. Throws MalformedText or
/// RangeViolation.
CodePointText from_utf8(std::string_view utf8);

}  // namespace smsxfer
