#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smsxfer/segmentation.hpp"
#include "smsxfer/transcode.hpp"

namespace smsxfer {

/// One received segment as persisted: the UTF-8 bytes of its rendered form.
struct InboxRecord {
  std::string transfer_id;
  std::uint16_t index = 0;
  ByteStream body_bytes;

  /// UTF-8 decode and parse back into the segment that was stored.
  Segment segment() const;

  friend bool operator==(const InboxRecord&, const InboxRecord&) = default;
};

struct StoreOptions {
  /// fsync after every appended record. Turning this off keeps records in
  /// the page cache, which is only acceptable for scratch stores.
  bool sync_writes = true;
};

/// Directory of append-only logs, one file per transfer id.
///
/// Each record is framed as
///
///     <index: 3 ASCII digits> SP <length: decimal ASCII> LF <body bytes>
///
/// A frame cut short at the end of a log (crash during append) is ignored on
/// load and overwritten by the next append. Any other framing error is a
/// StorageFailure.
///
/// Single writer: an instance caches each log it touches, so two instances
/// must not write to the same directory at once.
class InboxStore {
 public:
  /// Creates the directory if needed. Throws StorageFailure.
  explicit InboxStore(std::filesystem::path directory, StoreOptions options = {});

  const std::filesystem::path& directory() const noexcept { return directory_; }

  /// Returns true if the record was written, false for an exact duplicate.
  /// Throws ConflictingDuplicate or StorageFailure.
  bool put_record(std::string_view transfer_id, const Segment& segment);

  /// Records in ascending index order; empty for an unknown id.
  std::vector<InboxRecord> list_records(std::string_view transfer_id);

  /// Reassembles and decodes a transfer. Throws MissingSegments,
  /// UnexpectedSegment, RangeViolation, or StorageFailure.
  ByteStream reconstruct(std::string_view transfer_id, std::optional<std::size_t> expected_count);

  /// Ids with a log in the directory, sorted.
  std::vector<std::string> transfer_ids() const;

  /// Log file backing a transfer id. Ids are percent-escaped so any string
  /// maps to a single file name inside the directory.
  std::filesystem::path log_path(std::string_view transfer_id) const;

 private:
  struct Log {
    std::map<std::uint16_t, ByteStream> records;
    std::uintmax_t valid_length = 0;
    std::uintmax_t file_length = 0;
  };

  Log& load(std::string_view transfer_id);

  std::filesystem::path directory_;
  StoreOptions options_;
  std::map<std::string, Log, std::less<>> logs_;
};

/// Escapes a transfer id into a portable file-name stem and back.
std::string escape_transfer_id(std::string_view transfer_id);
std::string unescape_transfer_id(std::string_view stem);

}  // namespace smsxfer
