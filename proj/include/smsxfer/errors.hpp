#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace smsxfer {

/// Base for every failure raised by the transfer pipeline.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A code point outside the SMS-safe alphabet [32, 287] reached the decoder.
class RangeViolation : public Error {
 public:
  RangeViolation(std::size_t position, unsigned long value);
  std::size_t position() const noexcept { return position_; }
  unsigned long value() const noexcept { return value_; }

 private:
  std::size_t position_;
  unsigned long value_;
};

/// Serialized text is not well-formed UTF-8.
class MalformedText : public Error {
 public:
  using Error::Error;
};

/// The payload needs more segments than the 000-999 index space provides.
class TooManySegments : public Error {
 public:
  explicit TooManySegments(std::size_t required);
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

/// Rendered segment lacks a three-digit index prefix.
class MalformedHeader : public Error {
 public:
  using Error::Error;
};

class MissingSegments : public Error {
 public:
  explicit MissingSegments(std::vector<std::size_t> missing);
  const std::vector<std::size_t>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::size_t> missing_;
};

/// A segment index outside 0..expected_count-1 was presented for reassembly.
class UnexpectedSegment : public Error {
 public:
  UnexpectedSegment(std::size_t index, std::size_t expected_count);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ConflictingDuplicate : public Error {
 public:
  explicit ConflictingDuplicate(std::size_t index);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class StorageFailure : public Error {
 public:
  using Error::Error;
};

/// A message longer than the channel's per-message capacity was submitted.
class OversizeMessage : public Error {
 public:
  OversizeMessage(std::size_t position, std::size_t length, std::size_t capacity);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class MalformedPpm : public Error {
 public:
  using Error::Error;
};

/// Renders a list of indices as "1, 4, 7" for diagnostics.
std::string join_indices(const std::vector<std::size_t>& indices);

}  // namespace smsxfer
