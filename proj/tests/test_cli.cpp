#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "smsxfer/cli.hpp"
#include "smsxfer/image_metrics.hpp"
#include "test_support.hpp"

namespace smsxfer::cli {
namespace {

using smsxfer::testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const ByteStream& bytes) const {
    smsxfer::testing::write_bytes(dir_ / name, bytes);
  }

  std::vector<std::string> segment_lines(const std::string& name) const {
    return read_segments_file(smsxfer::testing::read_string(dir_ / name)).lines;
  }

  TempDir dir_;
};

TEST_F(CliTest, SendHundredBytesMakesTwoSegments) {
  write("in.bin", ByteStream(100, 'q'));
  const auto r = invoke({"send", path("in.bin"), "-o", path("seg.txt"), "--transfer-id", "t"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(segment_lines("seg.txt").size(), 2u);
  const auto manifest = TransferManifest::load(manifest_path_for(path("seg.txt")));
  EXPECT_EQ(manifest.segment_count, 2u);
  EXPECT_EQ(manifest.payload_length, 100u);
  EXPECT_EQ(manifest.transfer_id, "t");
  EXPECT_EQ(manifest.source_name, "in.bin");
  EXPECT_NE(r.out.find("segments=2"), std::string::npos);
}

TEST_F(CliTest, SendEmptyFileMakesOneEmptySegment) {
  write("empty.bin", {});
  ASSERT_EQ(invoke({"send", path("empty.bin"), "-o", path("seg.txt")}).code, kOk);
  EXPECT_EQ(segment_lines("seg.txt"), std::vector<std::string>{"000"});
}

TEST_F(CliTest, SendOverflowExitsTwo) {
  write("big.bin", ByteStream(70000, 1));
  const auto r = invoke({"send", path("big.bin"), "-o", path("seg.txt")});
  EXPECT_EQ(r.code, kTooManySegments);
  EXPECT_NE(r.err.find("1045"), std::string::npos);
}

TEST_F(CliTest, SendMissingInputIsUsageError) {
  EXPECT_EQ(invoke({"send", path("nope.bin"), "-o", path("seg.txt")}).code, kUsage);
  EXPECT_EQ(invoke({"send"}).code, kUsage);
  EXPECT_EQ(invoke({}).code, kUsage);
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

TEST_F(CliTest, SendRejectsBadChannelFlags) {
  write("in.bin", ByteStream(10, 1));
  EXPECT_EQ(invoke({"send", path("in.bin"), "-o", path("s"), "--loss-prob", "2"}).code, kUsage);
  EXPECT_EQ(invoke({"send", path("in.bin"), "-o", path("s"), "--capacity", "3"}).code, kUsage);
}

TEST_F(CliTest, ReceiveIsIndexDrivenAndIdempotent) {
  smsxfer::testing::write_string(dir_ / "seg.txt", "001B\n000A\n");
  auto r = invoke({"receive", path("seg.txt"), "--store", path("store"), "--transfer-id", "t"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("stored=2 duplicate=0 malformed=0"), std::string::npos) << r.out;

  r = invoke({"receive", path("seg.txt"), "--store", path("store"), "--transfer-id", "t"});
  EXPECT_NE(r.out.find("stored=0 duplicate=2"), std::string::npos) << r.out;

  r = invoke({"reconstruct", "--store", path("store"), "--transfer-id", "t", "--count", "2", "-o",
              path("out.bin")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(smsxfer::testing::read_string(dir_ / "out.bin"), "AB");
}

TEST_F(CliTest, ReceiveSkipsMalformedLines) {
  smsxfer::testing::write_string(dir_ / "seg.txt", "#count=1\n000A\nXY\n001\x01\n");
  const auto r =
      invoke({"receive", path("seg.txt"), "--store", path("store"), "--transfer-id", "t"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("stored=1 duplicate=0 malformed=2"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
}

TEST_F(CliTest, ReceiveCountsConflicts) {
  smsxfer::testing::write_string(dir_ / "seg.txt", "000A\n000B\n");
  const auto r =
      invoke({"receive", path("seg.txt"), "--store", path("store"), "--transfer-id", "t"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("stored=1 duplicate=0 malformed=0 conflicting=1"), std::string::npos);
}

TEST_F(CliTest, ReceiveDerivesTransferIdFromSender) {
  smsxfer::testing::write_string(dir_ / "seg.txt", "000A\n");
  const auto r =
      invoke({"receive", path("seg.txt"), "--store", path("store"), "--sender", "+15551234"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.rfind("transfer_id=_15551234-", 0), 0u) << r.out;
}

TEST_F(CliTest, ReceiveStoreFailureExitsOne) {
  smsxfer::testing::write_string(dir_ / "seg.txt", "000A\n");
  smsxfer::testing::write_string(dir_ / "blocker", "x");
  EXPECT_EQ(invoke({"receive", path("seg.txt"), "--store", path("blocker"), "--transfer-id", "t"})
                .code,
            kIoFailure);
}

TEST_F(CliTest, RoundTripWithManifest) {
  std::mt19937_64 rng(1);
  const auto payload = smsxfer::testing::random_bytes(rng, 5000);
  write("in.bin", payload);
  ASSERT_EQ(invoke({"send", path("in.bin"), "-o", path("seg.txt"), "--reorder-window", "5",
                    "--dup-prob", "0.3", "--seed", "8"})
                .code,
            kOk);
  ASSERT_EQ(invoke({"receive", path("seg.txt"), "--store", path("st"), "--transfer-id", "x"}).code,
            kOk);
  const auto r = invoke({"reconstruct", "--store", path("st"), "--transfer-id", "x", "--manifest",
                         path("seg.txt.manifest.json"), "-o", path("out.bin")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(smsxfer::testing::read_bytes(dir_ / "out.bin"), payload);
}

TEST_F(CliTest, WithheldSegmentExitsThreeNamingGap) {
  write("in.bin", ByteStream(300, 'z'));
  ASSERT_EQ(invoke({"send", path("in.bin"), "-o", path("seg.txt")}).code, kOk);
  auto file = read_segments_file(smsxfer::testing::read_string(dir_ / "seg.txt"));
  ASSERT_EQ(file.lines.size(), 5u);
  file.lines.erase(file.lines.begin() + 2);
  std::string trimmed;
  for (const auto& l : file.lines) trimmed += l + "\n";
  smsxfer::testing::write_string(dir_ / "cut.txt", trimmed);

  ASSERT_EQ(invoke({"receive", path("cut.txt"), "--store", path("st"), "--transfer-id", "x"}).code,
            kOk);
  const auto r = invoke({"reconstruct", "--store", path("st"), "--transfer-id", "x", "--count",
                         "5", "-o", path("out.bin")});
  EXPECT_EQ(r.code, kMissingSegments);
  EXPECT_NE(r.err.find("missing segments: 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, EmptyPayloadReconstructsEmptyFile) {
  write("empty.bin", {});
  ASSERT_EQ(invoke({"send", path("empty.bin"), "-o", path("seg.txt")}).code, kOk);
  ASSERT_EQ(invoke({"receive", path("seg.txt"), "--store", path("st"), "--transfer-id", "e"}).code,
            kOk);
  ASSERT_EQ(invoke({"reconstruct", "--store", path("st"), "--transfer-id", "e", "--count", "1",
                    "-o", path("out.bin")})
                .code,
            kOk);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "out.bin"));
  EXPECT_EQ(std::filesystem::file_size(dir_ / "out.bin"), 0u);
}

TEST_F(CliTest, ReconstructUnknownTransferExitsThree) {
  EXPECT_EQ(invoke({"reconstruct", "--store", path("st"), "--transfer-id", "ghost", "-o",
                    path("out.bin")})
                .code,
            kMissingSegments);
}

TEST_F(CliTest, StatsCsv) {
  write("laundry.bin", ByteStream(2244, 0));
  auto r = invoke({"stats", path("laundry.bin"), "--capacity", "452"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, "2244,5,-\n");

  write("venus.bin", ByteStream(1940, 0));
  r = invoke({"stats", path("venus.bin"), "--capacity", "452"});
  EXPECT_EQ(r.out, "1940,5,-\n");

  r = invoke({"stats", path("laundry.bin"), "--table"});
  EXPECT_NE(r.out.find("No. of messages       34"), std::string::npos) << r.out;
}

TEST_F(CliTest, StatsUniqueColorsFromPpm) {
  const RgbImage uniform(2, 2, std::vector<std::uint8_t>(12, 9));
  write("u.ppm", write_ppm(uniform));
  const auto r = invoke({"stats", path("u.ppm"), "--ppm", path("u.ppm")});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "23,1,1\n");

  write("bad.ppm", {'P', '3', ' ', '1'});
  EXPECT_EQ(invoke({"stats", path("u.ppm"), "--ppm", path("bad.ppm")}).code, kIoFailure);

  write("big.bin", ByteStream(70000, 0));
  EXPECT_EQ(invoke({"stats", path("big.bin")}).code, kTooManySegments);
}

TEST(Manifest, JsonRoundTripAndValidation) {
  const TransferManifest m{"id-1", 2, 100, "in.bin", 70};
  EXPECT_EQ(TransferManifest::from_json(m.to_json()), m);
  EXPECT_THROW(TransferManifest::from_json(R"({"transfer_id":"a","segment_count":3,
      "payload_length":100,"source_name":"x"})"),
               std::invalid_argument);
  EXPECT_THROW(TransferManifest::from_json("{"), std::invalid_argument);
}

TEST(TransferId, SanitizedPrefixAndUtcStamp) {
  const auto id = derive_transfer_id("a b/c");
  EXPECT_EQ(id.rfind("a_b_c-", 0), 0u);
  EXPECT_EQ(id.size(), std::string("a_b_c-YYYYMMDDTHHMMSSZ").size());
  EXPECT_EQ(id.back(), 'Z');
}

// send -> transmit -> receive -> reconstruct is the identity for lossless
// channels, whatever the reordering and duplication.
TEST(EndToEnd, ThousandRandomFilesOverLosslessChannels) {
  TempDir dir;
  std::mt19937_64 rng(60606);
  std::ostringstream sink;
  for (int iter = 0; iter < 1000; ++iter) {
    const auto payload =
        smsxfer::testing::random_bytes(rng, smsxfer::testing::random_size(rng, 0, 60 * 1024));
    const auto input = dir / ("in" + std::to_string(iter));
    const auto segments = dir / ("seg" + std::to_string(iter));
    const auto output = dir / ("out" + std::to_string(iter));
    smsxfer::testing::write_bytes(input, payload);

    SendOptions send{input, segments, SegmentPlan(), {}, "t"};
    send.channel.seed = rng();
    send.channel.reorder_window = rng() % 12;
    send.channel.duplicate_prob = static_cast<double>(rng() % 50) / 100.0;
    ASSERT_EQ(cmd_send(send, sink, sink), kOk);

    ReceiveOptions receive;
    receive.segments = segments;
    receive.store = dir / "store";
    receive.transfer_id = "t" + std::to_string(iter);
    receive.store_options.sync_writes = false;
    ASSERT_EQ(cmd_receive(receive, sink, sink), kOk);

    ReconstructOptions rebuild;
    rebuild.store = dir / "store";
    rebuild.transfer_id = *receive.transfer_id;
    rebuild.manifest = manifest_path_for(segments);
    rebuild.output = output;
    ASSERT_EQ(cmd_reconstruct(rebuild, sink, sink), kOk) << sink.str();

    ASSERT_EQ(smsxfer::testing::read_bytes(output), payload) << "file " << iter;
    std::filesystem::remove(input);
    std::filesystem::remove(segments);
    std::filesystem::remove(manifest_path_for(segments));
    std::filesystem::remove(output);
  }
}

}  // namespace
}  // namespace smsxfer::cli
