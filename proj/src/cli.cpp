#include "smsxfer/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smsxfer/image_metrics.hpp"
#include "smsxfer/transcode.hpp"

namespace smsxfer::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

ByteStream read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  ByteStream bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("read failed for " + path.string());
  return bytes;
}

std::string read_text(const fs::path& path) {
  const ByteStream bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_file(const fs::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const TooManySegments& e) {
    err << "error: " << e.what() << '\n';
    return kTooManySegments;
  } catch (const MissingSegments& e) {
    err << "error: " << e.what() << '\n';
    return kMissingSegments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }
}

}  // namespace

std::string TransferManifest::to_json() const {
  json j = {
      {"transfer_id", transfer_id},
      {"segment_count", segment_count},
      {"payload_length", payload_length},
      {"source_name", source_name},
      {"capacity_points", capacity_points},
  };
  return j.dump(2) + "\n";
}

TransferManifest TransferManifest::from_json(const std::string& text) {
  TransferManifest m;
  try {
    const json j = json::parse(text);
    m.transfer_id = j.at("transfer_id").get<std::string>();
    m.segment_count = j.at("segment_count").get<std::size_t>();
    m.payload_length = j.at("payload_length").get<std::size_t>();
    m.source_name = j.at("source_name").get<std::string>();
    m.capacity_points = j.value("capacity_points", kDefaultCapacityPoints);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad manifest: ") + e.what());
  }
  const SegmentPlan plan(m.capacity_points);
  const std::size_t expected = smsxfer::segment_count(m.payload_length, plan);
  if (m.segment_count != expected || m.segment_count > kMaxSegments) {
    throw std::invalid_argument("bad manifest: segment_count " + std::to_string(m.segment_count) +
                                " does not match " + std::to_string(m.payload_length) +
                                " bytes at capacity " + std::to_string(m.capacity_points));
  }
  return m;
}

TransferManifest TransferManifest::load(const fs::path& path) {
  return from_json(read_text(path));
}

fs::path manifest_path_for(const fs::path& segments_path) {
  fs::path p = segments_path;
  p += ".manifest.json";
  return p;
}

std::string derive_transfer_id(std::string_view prefix) {
  std::string id;
  for (char c : prefix) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '.' || c == '_' || c == '-';
    id.push_back(keep ? c : '_');
  }
  if (id.empty()) id = "transfer";

  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
  return id + "-" + stamp;
}

int cmd_send(const SendOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ByteStream payload = read_file(options.input);
    const auto segments = split(encode_bytes(payload), options.plan);

    std::vector<CodePointText> rendered;
    rendered.reserve(segments.size());
    for (const auto& s : segments) rendered.push_back(render(s));

    ChannelProfile channel = options.channel;
    channel.capacity_points = options.plan.capacity_points();
    const auto delivered = transmit(rendered, channel);

    TransferManifest manifest;
    manifest.transfer_id = options.transfer_id.value_or(
        derive_transfer_id(options.input.stem().string()));
    manifest.segment_count = segments.size();
    manifest.payload_length = payload.size();
    manifest.source_name = options.input.filename().string();
    manifest.capacity_points = options.plan.capacity_points();

    write_file(options.output, write_segments_file(delivered, segments.size()));
    write_file(manifest_path_for(options.output), manifest.to_json());

    out << "transfer_id=" << manifest.transfer_id << " segments=" << segments.size()
        << " delivered=" << delivered.size() << " payload_bytes=" << payload.size() << '\n';
    return kOk;
  });
}

int cmd_receive(const ReceiveOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SegmentsFile file = read_segments_file(read_text(options.segments));
    InboxStore store(options.store, options.store_options);
    const std::string transfer_id =
        options.transfer_id.value_or(derive_transfer_id(options.sender));

    std::size_t stored = 0, duplicate = 0, malformed = 0, conflicting = 0;
    const std::size_t first_line = file.count ? 2 : 1;
    for (std::size_t i = 0; i < file.lines.size(); ++i) {
      try {
        const Segment segment = parse(from_utf8(file.lines[i]));
        if (store.put_record(transfer_id, segment)) {
          ++stored;
        } else {
          ++duplicate;
        }
      } catch (const MalformedHeader& e) {
        ++malformed;
        err << "warning: line " << first_line + i << " skipped: " << e.what() << '\n';
      } catch (const MalformedText& e) {
        ++malformed;
        err << "warning: line " << first_line + i << " skipped: " << e.what() << '\n';
      } catch (const RangeViolation& e) {
        ++malformed;
        err << "warning: line " << first_line + i << " skipped: " << e.what() << '\n';
      } catch (const ConflictingDuplicate& e) {
        ++conflicting;
        err << "warning: line " << first_line + i << " skipped: " << e.what() << '\n';
      }
    }

    out << "transfer_id=" << transfer_id << " stored=" << stored << " duplicate=" << duplicate
        << " malformed=" << malformed << " conflicting=" << conflicting << '\n';
    return kOk;
  });
}

int cmd_reconstruct(const ReconstructOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::optional<std::size_t> expected = options.expected_count;
    if (options.manifest) {
      const auto manifest = TransferManifest::load(*options.manifest);
      if (expected && *expected != manifest.segment_count) {
        throw std::invalid_argument("--count disagrees with the manifest");
      }
      expected = manifest.segment_count;
    }

    InboxStore store(options.store);
    const ByteStream payload = store.reconstruct(options.transfer_id, expected);
    write_file(options.output,
               std::string_view(reinterpret_cast<const char*>(payload.data()), payload.size()));
    out << "transfer_id=" << options.transfer_id << " bytes=" << payload.size()
        << " output=" << options.output.string() << '\n';
    return kOk;
  });
}

int cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ByteStream payload = read_file(options.input);
    std::optional<RgbImage> image;
    if (options.ppm) image = parse_ppm(read_file(*options.ppm));
    const TransferStats stats =
        transfer_stats(payload, options.plan, image ? &*image : nullptr);
    if (options.table) {
      out << format_stats_table(stats, options.plan);
    } else {
      out << format_stats_csv(stats) << '\n';
    }
    return kOk;
  });
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Send binary files as indexed SMS text segments", "smsxfer"};
  app.require_subcommand(1);

  const auto capacity_range = CLI::Range(std::size_t{4}, std::numeric_limits<std::size_t>::max());
  const auto probability = CLI::Range(0.0, 1.0);

  std::size_t capacity = kDefaultCapacityPoints;

  SendOptions send;
  std::string send_id;
  auto* send_cmd = app.add_subcommand("send", "Encode and split a file into a segments file");
  send_cmd->add_option("input", send.input, "File to send")->required()->check(CLI::ExistingFile);
  send_cmd->add_option("-o,--out", send.output, "Segments file to write")->required();
  send_cmd->add_option("--capacity", capacity, "Code points per message, header included")
      ->check(capacity_range)
      ->capture_default_str();
  send_cmd->add_option("--transfer-id", send_id, "Label recorded in the manifest");
  send_cmd->add_option("--seed", send.channel.seed, "Channel PRNG seed");
  send_cmd->add_option("--reorder-window", send.channel.reorder_window,
                       "Maximum delivery displacement");
  send_cmd->add_option("--dup-prob", send.channel.duplicate_prob, "Duplication probability")
      ->check(probability);
  send_cmd->add_option("--loss-prob", send.channel.loss_prob, "Loss probability")
      ->check(probability);

  ReceiveOptions receive;
  std::string receive_id;
  auto* receive_cmd = app.add_subcommand("receive", "Store received segments in an inbox");
  receive_cmd->add_option("segments", receive.segments, "Segments file")
      ->required()
      ->check(CLI::ExistingFile);
  receive_cmd->add_option("--store", receive.store, "Store directory")->required();
  receive_cmd->add_option("--transfer-id", receive_id,
                          "Transfer id (default: <sender>-<UTC timestamp>)");
  receive_cmd->add_option("--sender", receive.sender, "Sender address used to derive an id")
      ->capture_default_str();

  ReconstructOptions reconstruct;
  std::size_t count = 0;
  std::string manifest;
  auto* reconstruct_cmd =
      app.add_subcommand("reconstruct", "Rebuild the original file from an inbox");
  reconstruct_cmd->add_option("--store", reconstruct.store, "Store directory")->required();
  reconstruct_cmd->add_option("--transfer-id", reconstruct.transfer_id, "Transfer id")->required();
  auto* count_opt = reconstruct_cmd->add_option("--count", count, "Expected segment count")
                        ->check(CLI::Range(std::size_t{1}, kMaxSegments));
  reconstruct_cmd->add_option("--manifest", manifest, "Manifest giving the segment count")
      ->check(CLI::ExistingFile);
  reconstruct_cmd->add_option("-o,--out", reconstruct.output, "Output file")->required();

  StatsOptions stats;
  std::string ppm;
  auto* stats_cmd = app.add_subcommand("stats", "Characters, messages and unique colors");
  stats_cmd->add_option("input", stats.input, "Payload file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--capacity", capacity, "Code points per message, header included")
      ->check(capacity_range)
      ->capture_default_str();
  stats_cmd->add_option("--ppm", ppm, "Binary PPM whose colors are counted")
      ->check(CLI::ExistingFile);
  stats_cmd->add_flag("--table", stats.table, "Print a table instead of CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (send_cmd->parsed()) {
    send.plan = SegmentPlan(capacity);
    if (!send_id.empty()) send.transfer_id = send_id;
    return cmd_send(send, out, err);
  }
  if (receive_cmd->parsed()) {
    if (!receive_id.empty()) receive.transfer_id = receive_id;
    return cmd_receive(receive, out, err);
  }
  if (reconstruct_cmd->parsed()) {
    if (count_opt->count() > 0) reconstruct.expected_count = count;
    if (!manifest.empty()) reconstruct.manifest = manifest;
    return cmd_reconstruct(reconstruct, out, err);
  }
  stats.plan = SegmentPlan(capacity);
  if (!ppm.empty()) stats.ppm = ppm;
  return cmd_stats(stats, out, err);
}

}  // namespace smsxfer::cli
