#include "smsxfer/errors.hpp"

#include <sstream>

namespace smsxfer {

RangeViolation::RangeViolation(std::size_t position, unsigned long value)
    : Error("code point " + std::to_string(value) + " at position " + std::to_string(position) +
            " is outside the SMS-safe range [32, 287]"),
      position_(position),
      value_(value) {}

TooManySegments::TooManySegments(std::size_t required)
    : Error("payload needs " + std::to_string(required) +
            " segments but the 3-digit index allows at most 1000"),
      required_(required) {}

MissingSegments::MissingSegments(std::vector<std::size_t> missing)
    : Error("missing segments: " + join_indices(missing)), missing_(std::move(missing)) {}

UnexpectedSegment::UnexpectedSegment(std::size_t index, std::size_t expected_count)
    : Error("segment " + std::to_string(index) + " lies outside the expected count " +
            std::to_string(expected_count)),
      index_(index) {}

ConflictingDuplicate::ConflictingDuplicate(std::size_t index)
    : Error("segment " + std::to_string(index) + " received twice with different bodies"),
      index_(index) {}

OversizeMessage::OversizeMessage(std::size_t position, std::size_t length, std::size_t capacity)
    : Error("message " + std::to_string(position) + " has " + std::to_string(length) +
            " points, channel capacity is " + std::to_string(capacity)),
      position_(position) {}

std::string join_indices(const std::vector<std::size_t>& indices) {
  std::ostringstream out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i != 0) out << ", ";
    out << indices[i];
  }
  return out.str();
}

}  // namespace smsxfer
