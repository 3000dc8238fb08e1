#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "smsxfer/channel_sim.hpp"
#include "test_support.hpp"

namespace smsxfer {
namespace {

std::vector<CodePointText> numbered(std::size_t n) {
  std::vector<CodePointText> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(render(Segment(i, CodePointText::from_ascii("payload"))));
  }
  return out;
}

TEST(Channel, StandardEngineSequence) {
  // The tenth-thousandth output is fixed by the C++ standard; traces are
  // only portable if this holds.
  std::mt19937_64 engine;
  engine.discard(9999);
  EXPECT_EQ(engine(), 9981545732273789042ull);
}

TEST(Channel, IdentityProfileDeliversInOrder) {
  const auto sent = numbered(3);
  EXPECT_EQ(transmit(sent, ChannelProfile{}), sent);
}

TEST(Channel, TotalLossDeliversNothing) {
  ChannelProfile profile;
  profile.loss_prob = 1.0;
  EXPECT_TRUE(transmit(numbered(3), profile).empty());
}

TEST(Channel, CertainDuplicationDeliversEverythingTwice) {
  ChannelProfile profile;
  profile.duplicate_prob = 1.0;
  const auto trace = transmit_trace(numbered(20), profile);
  ASSERT_EQ(trace.size(), 40u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(trace[2 * i].source, i);
    EXPECT_EQ(trace[2 * i + 1].source, i);
  }
}

TEST(Channel, SameSeedSameTrace) {
  ChannelProfile profile;
  profile.seed = 42;
  profile.reorder_window = 2;
  const auto sent = numbered(100);
  const auto first = transmit_trace(sent, profile);
  const auto second = transmit_trace(sent, profile);
  EXPECT_EQ(first, second);

  profile.duplicate_prob = 0.2;
  profile.loss_prob = 0.1;
  EXPECT_EQ(transmit_trace(sent, profile), transmit_trace(sent, profile));
}

TEST(Channel, DifferentSeedsReorderDifferently) {
  ChannelProfile a, b;
  a.reorder_window = b.reorder_window = 4;
  a.seed = 1;
  b.seed = 2;
  const auto sent = numbered(100);
  EXPECT_NE(transmit(sent, a), transmit(sent, b));
  EXPECT_NE(transmit(sent, a), sent);
}

TEST(Channel, LosslessProfilesConserveAndBoundDisplacement) {
  const auto sent = numbered(200);
  for (std::size_t window : {0u, 1u, 2u, 5u, 17u, 300u}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      ChannelProfile profile;
      profile.reorder_window = window;
      profile.seed = seed;
      const auto trace = transmit_trace(sent, profile);
      ASSERT_EQ(trace.size(), sent.size());
      std::vector<bool> seen(sent.size());
      for (std::size_t pos = 0; pos < trace.size(); ++pos) {
        const std::size_t src = trace[pos].source;
        ASSERT_FALSE(seen[src]);
        seen[src] = true;
        ASSERT_EQ(trace[pos].message, sent[src]);
        const std::size_t displacement = pos > src ? pos - src : src - pos;
        ASSERT_LE(displacement, window) << "window " << window << " seed " << seed;
      }
    }
  }
}

TEST(Channel, WindowOneCanSwapNeighbours) {
  ChannelProfile profile;
  profile.reorder_window = 1;
  profile.seed = 3;
  const auto sent = numbered(100);
  EXPECT_NE(transmit(sent, profile), sent);
}

TEST(Channel, LossRateIsRoughlyHonoured) {
  ChannelProfile profile;
  profile.loss_prob = 0.25;
  profile.seed = 9;
  const auto delivered = transmit(numbered(1000), profile).size() +
                         transmit(numbered(1000), ChannelProfile{.loss_prob = 0.25, .seed = 10}).size();
  // Binomial(2000, 0.75): mean 1500, sd ~19.4.
  EXPECT_NEAR(static_cast<double>(delivered), 1500.0, 100.0);
}

TEST(Channel, OversizeMessageRejected) {
  ChannelProfile profile;
  profile.capacity_points = 6;
  std::vector<CodePointText> messages{CodePointText::from_ascii("000abc"),
                                      CodePointText::from_ascii("001abcd")};
  try {
    transmit(messages, profile);
    FAIL();
  } catch (const OversizeMessage& e) {
    EXPECT_EQ(e.position(), 1u);
  }
}

TEST(Channel, InvalidProfilesRejected) {
  EXPECT_THROW(transmit({}, ChannelProfile{.capacity_points = 3}), std::invalid_argument);
  EXPECT_THROW(transmit({}, ChannelProfile{.duplicate_prob = 1.5}), std::invalid_argument);
  EXPECT_THROW(transmit({}, ChannelProfile{.loss_prob = -0.1}), std::invalid_argument);
}

}  // namespace
}  // namespace smsxfer
