#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smsxfer/segmentation.hpp"
#include "smsxfer/transcode.hpp"

namespace smsxfer {

/// 8-bit RGB raster, row-major, three bytes per pixel.
class RgbImage {
 public:
  /// Throws std::invalid_argument unless width, height >= 1 and
  /// rgb.size() == 3 * width * height.
  RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> rgb);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }
  std::span<const std::uint8_t> rgb() const noexcept { return rgb_; }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> rgb_;
};

/// Binary PPM (P6) with maxval 255. Header tokens may be separated by any
/// whitespace and '#' comments; exactly one whitespace byte precedes the
/// raster, which must be exactly 3 * width * height bytes long.
RgbImage parse_ppm(std::span<const std::uint8_t> file_bytes);

/// Minimal P6 serialization ("P6\n<w> <h>\n255\n" + raster).
ByteStream write_ppm(const RgbImage& image);

/// Number of distinct (r, g, b) triples.
std::size_t unique_colors(const RgbImage& image);

struct TransferStats {
  std::size_t characters = 0;
  std::size_t messages = 0;
  std::optional<std::size_t> unique_colors;

  friend bool operator==(const TransferStats&, const TransferStats&) = default;
};

/// Characters, messages and (when an image is given) unique colors for
/// sending `payload` under `plan`. Throws TooManySegments.
TransferStats transfer_stats(std::span<const std::uint8_t> payload, const SegmentPlan& plan,
                             const RgbImage* image = nullptr);

/// "characters,messages,unique_colors" with "-" for an absent color count.
/// No trailing newline.
std::string format_stats_csv(const TransferStats& stats);

/// Two-column table for humans.
std::string format_stats_table(const TransferStats& stats, const SegmentPlan& plan);

}  // namespace smsxfer
