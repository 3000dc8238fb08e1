#include "smsxfer/inbox_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <system_error>

namespace smsxfer {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kLogExtension = ".rms";

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string errno_message(const std::string& what, const fs::path& path) {
  return what + " " + path.string() + ": " + std::strerror(errno);
}

/// Owns a POSIX descriptor.
class Fd {
 public:
  Fd(const fs::path& path, int flags, mode_t mode = 0644) : fd_(::open(path.c_str(), flags, mode)) {
    if (fd_ < 0) throw StorageFailure(errno_message("cannot open", path));
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const { return fd_; }

 private:
  int fd_;
};

void write_all(const Fd& fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd.get(), data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StorageFailure(errno_message("write failed for", path));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync(const Fd& fd, const fs::path& path) {
  if (::fsync(fd.get()) != 0) throw StorageFailure(errno_message("fsync failed for", path));
}

ByteStream to_bytes(std::string_view s) { return ByteStream(s.begin(), s.end()); }

Segment decode_record(std::span<const std::uint8_t> body_bytes) {
  std::string_view text(reinterpret_cast<const char*>(body_bytes.data()), body_bytes.size());
  return parse(from_utf8(text));
}

struct Frame {
  std::uint16_t index;
  std::size_t body_offset;
  std::size_t body_length;
};

enum class FrameStatus { kComplete, kTruncated };

/// Reads the frame starting at `pos`. A frame whose visible prefix is well
/// formed but which runs past the end of the buffer is reported truncated.
FrameStatus read_frame(std::string_view log, std::size_t pos, Frame& frame,
                       const fs::path& path) {
  const std::string_view rest = log.substr(pos);
  auto corrupt = [&](const char* why) {
    return StorageFailure("corrupt record at byte " + std::to_string(pos) + " of " +
                          path.string() + ": " + why);
  };

  // Validate whatever part of the header is present.
  const std::size_t eol = rest.find('\n');
  const std::string_view header = rest.substr(0, eol);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const char c = header[i];
    const bool ok = i < 3 ? is_digit(c) : i == 3 ? c == ' ' : is_digit(c);
    if (!ok) throw corrupt("bad frame header");
  }
  if (eol == std::string_view::npos) return FrameStatus::kTruncated;
  if (header.size() < 5) throw corrupt("short frame header");

  std::size_t length = 0;
  const auto digits = header.substr(4);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), length);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) throw corrupt("bad length");

  frame.index = static_cast<std::uint16_t>((header[0] - '0') * 100 + (header[1] - '0') * 10 +
                                           (header[2] - '0'));
  frame.body_offset = pos + eol + 1;
  frame.body_length = length;
  if (log.size() - frame.body_offset < length) return FrameStatus::kTruncated;
  return FrameStatus::kComplete;
}

}  // namespace

Segment InboxRecord::segment() const { return decode_record(body_bytes); }

std::string escape_transfer_id(std::string_view transfer_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < transfer_id.size(); ++i) {
    const auto c = static_cast<unsigned char>(transfer_id[i]);
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                       c == '_' || c == '-' || (c == '.' && i != 0);
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string unescape_transfer_id(std::string_view stem) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (stem[i] == '%' && i + 2 < stem.size() && hex(stem[i + 1]) >= 0 && hex(stem[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex(stem[i + 1]) * 16 + hex(stem[i + 2])));
      i += 2;
    } else {
      out.push_back(stem[i]);
    }
  }
  return out;
}

InboxStore::InboxStore(fs::path directory, StoreOptions options)
    : directory_(std::move(directory)), options_(options) {
  std::error_code ec;
  fs::create_directories(directory_, ec);
  if (ec || !fs::is_directory(directory_)) {
    throw StorageFailure("cannot create store directory " + directory_.string() + ": " +
                         (ec ? ec.message() : "not a directory"));
  }
}

fs::path InboxStore::log_path(std::string_view transfer_id) const {
  if (transfer_id.empty()) throw std::invalid_argument("transfer id must not be empty");
  return directory_ / (escape_transfer_id(transfer_id) + std::string(kLogExtension));
}

InboxStore::Log& InboxStore::load(std::string_view transfer_id) {
  if (auto it = logs_.find(transfer_id); it != logs_.end()) return it->second;

  const fs::path path = log_path(transfer_id);
  Log log;
  std::error_code ec;
  if (fs::exists(path, ec)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageFailure("cannot read " + path.string());
    const std::string contents{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw StorageFailure("read failed for " + path.string());

    std::size_t pos = 0;
    while (pos < contents.size()) {
      Frame frame{};
      if (read_frame(contents, pos, frame, path) == FrameStatus::kTruncated) break;
      const std::string_view body(contents.data() + frame.body_offset, frame.body_length);
      ByteStream bytes = to_bytes(body);
      try {
        if (decode_record(bytes).index != frame.index) {
          throw StorageFailure("record index disagrees with its segment header");
        }
      } catch (const StorageFailure&) {
        throw;
      } catch (const Error& e) {
        throw StorageFailure("undecodable record " + std::to_string(frame.index) + " in " +
                             path.string() + ": " + e.what());
      }
      auto [slot, inserted] = log.records.try_emplace(frame.index, std::move(bytes));
      if (!inserted && slot->second != to_bytes(body)) {
        throw StorageFailure("conflicting records for index " + std::to_string(frame.index) +
                             " in " + path.string());
      }
      pos = frame.body_offset + frame.body_length;
    }
    log.valid_length = pos;
    log.file_length = contents.size();
  } else if (ec) {
    throw StorageFailure("cannot stat " + path.string() + ": " + ec.message());
  }
  return logs_.emplace(std::string(transfer_id), std::move(log)).first->second;
}

bool InboxStore::put_record(std::string_view transfer_id, const Segment& segment) {
  Log& log = load(transfer_id);
  const std::string body = to_utf8(render(segment));

  if (auto it = log.records.find(segment.index); it != log.records.end()) {
    if (it->second == to_bytes(body)) return false;
    throw ConflictingDuplicate(segment.index);
  }

  const fs::path path = log_path(transfer_id);
  const bool created = log.file_length == 0 && !fs::exists(path);
  if (log.valid_length < log.file_length) {
    std::error_code ec;
    fs::resize_file(path, log.valid_length, ec);
    if (ec) throw StorageFailure("cannot drop torn record in " + path.string() + ": " + ec.message());
    log.file_length = log.valid_length;
  }

  char index_digits[4];
  index_digits[0] = static_cast<char>('0' + segment.index / 100);
  index_digits[1] = static_cast<char>('0' + segment.index / 10 % 10);
  index_digits[2] = static_cast<char>('0' + segment.index % 10);
  index_digits[3] = ' ';
  std::string frame(index_digits, 4);
  frame += std::to_string(body.size());
  frame += '\n';
  frame += body;

  {
    Fd fd(path, O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC);
    write_all(fd, frame, path);
    if (options_.sync_writes) sync(fd, path);
  }
  if (created && options_.sync_writes) {
    Fd dir(directory_, O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    sync(dir, directory_);
  }

  log.valid_length += frame.size();
  log.file_length = log.valid_length;
  log.records.emplace(segment.index, to_bytes(body));
  return true;
}

std::vector<InboxRecord> InboxStore::list_records(std::string_view transfer_id) {
  const Log& log = load(transfer_id);
  std::vector<InboxRecord> out;
  out.reserve(log.records.size());
  for (const auto& [index, bytes] : log.records) {
    out.push_back({std::string(transfer_id), index, bytes});
  }
  return out;
}

ByteStream InboxStore::reconstruct(std::string_view transfer_id,
                                   std::optional<std::size_t> expected_count) {
  Reassembler context;
  for (const auto& record : list_records(transfer_id)) context.add(record.segment());
  return decode_text(context.finish(expected_count));
}

std::vector<std::string> InboxStore::transfer_ids() const {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(directory_, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == kLogExtension) {
      ids.push_back(unescape_transfer_id(entry.path().stem().string()));
    }
  }
  if (ec) throw StorageFailure("cannot list " + directory_.string() + ": " + ec.message());
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace smsxfer
