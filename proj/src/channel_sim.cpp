#include "smsxfer/channel_sim.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

namespace smsxfer {

namespace {

/// Decision source built on std::mt19937_64 (Matsumoto and Nishimura's
/// 64-bit Mersenne Twister, default seed constants fixed by the standard).
/// Standard distributions are avoided because their algorithms are
/// implementation-defined.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}

  /// True with probability p. Compares the top 53 bits of one draw against
  /// p * 2^53; both sides are exact in a double.
  bool chance(double p) {
    const auto bits = static_cast<double>(engine_() >> 11);
    return bits < p * 9007199254740992.0;
  }

  /// Uniform integer in [0, bound] by rejection.
  std::uint64_t up_to(std::uint64_t bound) {
    if (bound == std::numeric_limits<std::uint64_t>::max()) return engine_();
    const std::uint64_t range = bound + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % range;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

void ChannelProfile::validate() const {
  if (capacity_points < kHeaderPoints + 1) {
    throw std::invalid_argument("channel capacity must be at least 4 points");
  }
  auto check = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                  std::to_string(p));
    }
  };
  check(duplicate_prob, "duplicate probability");
  check(loss_prob, "loss probability");
}

std::vector<Delivery> transmit_trace(std::span<const CodePointText> messages,
                                     const ChannelProfile& profile) {
  profile.validate();
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages[i].size() > profile.capacity_points) {
      throw OversizeMessage(i, messages[i].size(), profile.capacity_points);
    }
  }

  Draws draws(profile.seed);

  std::vector<std::size_t> survivors;
  survivors.reserve(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const int copies = draws.chance(profile.duplicate_prob) ? 2 : 1;
    for (int c = 0; c < copies; ++c) {
      if (!draws.chance(profile.loss_prob)) survivors.push_back(i);
    }
  }

  // Each survivor at queue position q gets the sort key (q + r, tiebreak)
  // with r uniform in [0, window]. At most `window` later items can sort
  // ahead of it and at most `window` earlier ones behind it, which bounds
  // its displacement by the window.
  struct Keyed {
    std::uint64_t key;
    std::uint64_t tiebreak;
    std::size_t position;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(survivors.size());
  for (std::size_t q = 0; q < survivors.size(); ++q) {
    if (profile.reorder_window == 0) {
      keyed.push_back({q, 0, q});
    } else {
      const std::uint64_t offset = draws.up_to(profile.reorder_window);
      keyed.push_back({q + offset, draws.raw(), q});
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.key, a.tiebreak, a.position) < std::tie(b.key, b.tiebreak, b.position);
  });

  std::vector<Delivery> trace;
  trace.reserve(keyed.size());
  for (const auto& k : keyed) {
    const std::size_t source = survivors[k.position];
    trace.push_back({source, messages[source]});
  }
  return trace;
}

std::vector<CodePointText> transmit(std::span<const CodePointText> messages,
                                    const ChannelProfile& profile) {
  auto trace = transmit_trace(messages, profile);
  std::vector<CodePointText> delivered;
  delivered.reserve(trace.size());
  for (auto& d : trace) delivered.push_back(std::move(d.message));
  return delivered;
}

}  // namespace smsxfer
