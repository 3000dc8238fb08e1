#include "smsxfer/transcode.hpp"

#include <algorithm>

namespace smsxfer {

namespace {

void check_points(std::span<const CodePoint> points) {
  auto bad = std::find_if(points.begin(), points.end(),
                          [](CodePoint p) { return !is_valid_code_point(p); });
  if (bad != points.end()) {
    throw RangeViolation(static_cast<std::size_t>(bad - points.begin()), *bad);
  }
}

[[noreturn]] void bad_utf8(std::size_t offset, const char* what) {
  throw MalformedText("invalid UTF-8 at byte " + std::to_string(offset) + ": " + what);
}

}  // namespace

CodePointText CodePointText::from_points(std::span<const CodePoint> points) {
  check_points(points);
  return CodePointText(Unchecked{}, std::vector<CodePoint>(points.begin(), points.end()));
}

CodePointText CodePointText::from_points(std::vector<CodePoint>&& points) {
  check_points(points);
  return CodePointText(Unchecked{}, std::move(points));
}

CodePointText CodePointText::from_ascii(std::string_view ascii) {
  std::vector<CodePoint> points;
  points.reserve(ascii.size());
  for (char c : ascii) points.push_back(static_cast<unsigned char>(c));
  return from_points(std::move(points));
}

CodePointText CodePointText::slice(std::size_t offset, std::size_t count) const {
  offset = std::min(offset, points_.size());
  count = std::min(count, points_.size() - offset);
  auto first = points_.begin() + static_cast<std::ptrdiff_t>(offset);
  return CodePointText(Unchecked{},
                       std::vector<CodePoint>(first, first + static_cast<std::ptrdiff_t>(count)));
}

void CodePointText::append(const CodePointText& other) {
  points_.insert(points_.end(), other.points_.begin(), other.points_.end());
}

CodePointText encode_bytes(std::span<const std::uint8_t> payload) {
  std::vector<CodePoint> points(payload.size());
  std::transform(payload.begin(), payload.end(), points.begin(), [](std::uint8_t b) {
    return static_cast<CodePoint>(b <= kLastControlByte ? b + kControlShift : b);
  });
  return CodePointText(CodePointText::Unchecked{}, std::move(points));
}

ByteStream decode_text(std::span<const CodePoint> points) {
  check_points(points);
  ByteStream bytes(points.size());
  std::transform(points.begin(), points.end(), bytes.begin(), [](CodePoint p) {
    return static_cast<std::uint8_t>(p >= kControlShift ? p - kControlShift : p);
  });
  return bytes;
}

std::string to_utf8(std::span<const CodePoint> points) {
  std::string out;
  out.reserve(points.size() * 2);
  for (CodePoint p : points) {
    if (p < 0x80) {
      out.push_back(static_cast<char>(p));
    } else if (p < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (p >> 6)));
      out.push_back(static_cast<char>(0x80 | (p & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xE0 | (p >> 12)));
      out.push_back(static_cast<char>(0x80 | ((p >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (p & 0x3F)));
    }
  }
  return out;
}

std::vector<char32_t> utf8_scalars(std::string_view utf8) {
  std::vector<char32_t> out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const unsigned char*>(utf8.data());
  const std::size_t n = utf8.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char lead = s[i];
    std::size_t extra;
    char32_t value;
    char32_t min_value;
    if (lead < 0x80) {
      out.push_back(lead);
      ++i;
      continue;
    } else if ((lead & 0xE0) == 0xC0) {
      extra = 1, value = lead & 0x1F, min_value = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2, value = lead & 0x0F, min_value = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3, value = lead & 0x07, min_value = 0x10000;
    } else {
      bad_utf8(i, "bad lead byte");
    }
    if (n - i <= extra) bad_utf8(i, "truncated sequence");
    for (std::size_t k = 1; k <= extra; ++k) {
      const unsigned char c = s[i + k];
      if ((c & 0xC0) != 0x80) bad_utf8(i, "bad continuation byte");
      value = (value << 6) | (c & 0x3F);
    }
    if (value < min_value) bad_utf8(i, "overlong encoding");
    if (value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) bad_utf8(i, "not a Unicode scalar");
    out.push_back(value);
    i += extra + 1;
  }
  return out;
}

CodePointText from_utf8(std::string_view utf8) {
  const auto scalars = utf8_scalars(utf8);
  std::vector<CodePoint> points;
  points.reserve(scalars.size());
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    if (!is_valid_code_point(scalars[i])) throw RangeViolation(i, scalars[i]);
    points.push_back(static_cast<CodePoint>(scalars[i]));
  }
  return CodePointText::from_points(std::move(points));
}

}  // namespace smsxfer
