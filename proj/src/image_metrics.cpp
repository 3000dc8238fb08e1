#include "smsxfer/image_metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace smsxfer {

namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

/// Cursor over the PPM header.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      const std::size_t digit = bytes_[pos_] - '0';
      if (value > (std::numeric_limits<std::size_t>::max() - digit) / 10) {
        throw MalformedPpm(std::string("PPM ") + field + " is too large");
      }
      value = value * 10 + digit;
      ++pos_;
    }
    if (pos_ == start) throw MalformedPpm(std::string("PPM header is missing ") + field);
    return value;
  }

  std::size_t position() const { return pos_; }
  void advance() { ++pos_; }
  bool at_space() const { return pos_ < bytes_.size() && is_space(bytes_[pos_]); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), rgb_(std::move(rgb)) {
  if (width_ == 0 || height_ == 0) throw std::invalid_argument("image dimensions must be >= 1");
  if (width_ > std::numeric_limits<std::size_t>::max() / 3 / height_ ||
      rgb_.size() != 3 * width_ * height_) {
    throw std::invalid_argument("pixel buffer does not match " + std::to_string(width_) + "x" +
                                std::to_string(height_));
  }
}

RgbImage parse_ppm(std::span<const std::uint8_t> file_bytes) {
  if (file_bytes.size() < 2 || file_bytes[0] != 'P' || file_bytes[1] != '6') {
    throw MalformedPpm("not a binary PPM (missing P6 magic)");
  }
  HeaderReader header(file_bytes);
  if (file_bytes.size() > 2 && !is_space(file_bytes[2]) && file_bytes[2] != '#') {
    throw MalformedPpm("PPM magic must be followed by whitespace");
  }
  const std::size_t width = header.number("width");
  const std::size_t height = header.number("height");
  const std::size_t maxval = header.number("maxval");
  if (width == 0 || height == 0) throw MalformedPpm("PPM dimensions must be positive");
  if (maxval != 255) {
    throw MalformedPpm("only 8-bit PPM (maxval 255) is supported, got maxval " +
                       std::to_string(maxval));
  }
  if (!header.at_space()) throw MalformedPpm("PPM header must end with one whitespace byte");
  header.advance();

  const std::size_t offset = header.position();
  if (width > std::numeric_limits<std::size_t>::max() / 3 / height) {
    throw MalformedPpm("PPM dimensions overflow");
  }
  const std::size_t expected = 3 * width * height;
  const std::size_t actual = file_bytes.size() - offset;
  if (actual < expected) {
    throw MalformedPpm("PPM raster truncated: expected " + std::to_string(expected) +
                       " bytes, found " + std::to_string(actual));
  }
  if (actual > expected) {
    throw MalformedPpm("PPM has " + std::to_string(actual - expected) +
                       " trailing bytes after the raster");
  }
  auto raster = file_bytes.subspan(offset);
  return RgbImage(width, height, std::vector<std::uint8_t>(raster.begin(), raster.end()));
}

ByteStream write_ppm(const RgbImage& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  ByteStream out(header.begin(), header.end());
  out.insert(out.end(), image.rgb().begin(), image.rgb().end());
  return out;
}

std::size_t unique_colors(const RgbImage& image) {
  const auto rgb = image.rgb();
  std::vector<std::uint32_t> packed(image.pixel_count());
  for (std::size_t i = 0; i < packed.size(); ++i) {
    packed[i] = (std::uint32_t{rgb[3 * i]} << 16) | (std::uint32_t{rgb[3 * i + 1]} << 8) |
                std::uint32_t{rgb[3 * i + 2]};
  }
  std::sort(packed.begin(), packed.end());
  return static_cast<std::size_t>(std::unique(packed.begin(), packed.end()) - packed.begin());
}

TransferStats transfer_stats(std::span<const std::uint8_t> payload, const SegmentPlan& plan,
                             const RgbImage* image) {
  TransferStats stats;
  const CodePointText text = encode_bytes(payload);
  stats.characters = text.size();
  stats.messages = split(text, plan).size();
  if (image) stats.unique_colors = unique_colors(*image);
  return stats;
}

std::string format_stats_csv(const TransferStats& stats) {
  std::string line = std::to_string(stats.characters) + "," + std::to_string(stats.messages) + ",";
  line += stats.unique_colors ? std::to_string(*stats.unique_colors) : "-";
  return line;
}

std::string format_stats_table(const TransferStats& stats, const SegmentPlan& plan) {
  std::ostringstream out;
  auto row = [&](const char* name, const std::string& value) {
    out << std::left << std::setw(22) << name << value << '\n';
  };
  row("Segment capacity", std::to_string(plan.capacity_points()) + " points (" +
                              std::to_string(plan.body_capacity()) + " body)");
  row("No. of characters", std::to_string(stats.characters));
  row("No. of messages", std::to_string(stats.messages));
  row("No. of unique colors", stats.unique_colors ? std::to_string(*stats.unique_colors) : "-");
  return out.str();
}

}  // namespace smsxfer
