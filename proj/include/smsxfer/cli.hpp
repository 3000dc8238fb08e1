#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smsxfer/channel_sim.hpp"
#include "smsxfer/inbox_store.hpp"
#include "smsxfer/segmentation.hpp"

namespace smsxfer::cli {

/// Process exit status. 0-3 are the stable contract; kUsage covers bad flags.
enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kTooManySegments = 2,
  kMissingSegments = 3,
  kUsage = 64,
};

/// Sender-side description of one transfer, written next to the segments
/// file as JSON. Never sent in-band.
struct TransferManifest {
  std::string transfer_id;
  std::size_t segment_count = 0;
  std::size_t payload_length = 0;
  std::string source_name;
  std::size_t capacity_points = kDefaultCapacityPoints;

  std::string to_json() const;
  /// Throws std::invalid_argument on bad JSON or when segment_count does not
  /// match payload_length under capacity_points.
  static TransferManifest from_json(const std::string& text);
  static TransferManifest load(const std::filesystem::path& path);

  friend bool operator==(const TransferManifest&, const TransferManifest&) = default;
};

/// "<segments path>.manifest.json"
std::filesystem::path manifest_path_for(const std::filesystem::path& segments_path);

/// "<prefix>-YYYYMMDDTHHMMSSZ" in UTC, with the prefix reduced to
/// [A-Za-z0-9._-].
std::string derive_transfer_id(std::string_view prefix);

struct SendOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  SegmentPlan plan;
  /// capacity_points is overwritten with the plan's capacity.
  ChannelProfile channel;
  std::optional<std::string> transfer_id;
};

struct ReceiveOptions {
  std::filesystem::path segments;
  std::filesystem::path store;
  std::optional<std::string> transfer_id;
  std::string sender = "local";
  StoreOptions store_options;
};

struct ReconstructOptions {
  std::filesystem::path store;
  std::string transfer_id;
  std::optional<std::size_t> expected_count;
  std::optional<std::filesystem::path> manifest;
  std::filesystem::path output;
};

struct StatsOptions {
  std::filesystem::path input;
  SegmentPlan plan;
  std::optional<std::filesystem::path> ppm;
  bool table = false;
};

int cmd_send(const SendOptions& options, std::ostream& out, std::ostream& err);
int cmd_receive(const ReceiveOptions& options, std::ostream& out, std::ostream& err);
int cmd_reconstruct(const ReconstructOptions& options, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches to a command.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace smsxfer::cli
