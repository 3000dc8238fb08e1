#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smsxfer/segmentation.hpp"
#include "smsxfer/transcode.hpp"

namespace smsxfer {

/// Behaviour of the simulated SMS bearer.
///
/// Randomness comes from std::mt19937_64 seeded with `seed`; its output
/// sequence is fixed by the C++ standard, and all draws are converted to
/// decisions with integer arithmetic, so a given profile and input produce
/// the same delivery trace on every conforming platform.
struct ChannelProfile {
  std::size_t capacity_points = kDefaultCapacityPoints;
  /// Maximum distance a message may move from its send position.
  std::size_t reorder_window = 0;
  double duplicate_prob = 0.0;
  double loss_prob = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument for capacity < 4 or probabilities outside
  /// [0, 1].
  void validate() const;
};

/// One delivered copy and the send position it originated from.
struct Delivery {
  std::size_t source = 0;
  CodePointText message;

  friend bool operator==(const Delivery&, const Delivery&) = default;
};

/// Full delivery trace: each message is first possibly duplicated, then
/// each copy is independently lost, then survivors are reordered with
/// bounded displacement. Throws OversizeMessage before any randomness is
/// drawn.
std::vector<Delivery> transmit_trace(std::span<const CodePointText> messages,
                                     const ChannelProfile& profile);

/// Delivered messages in arrival order.
std::vector<CodePointText> transmit(std::span<const CodePointText> messages,
                                    const ChannelProfile& profile);

}  // namespace smsxfer
