#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected configuration or parameter set. Raised before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// next_int / Distribution with low > high.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Dead or never-allocated OID / class id.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

class InvalidPlanError : public Error {
 public:
  using Error::Error;
};

class EmptyReportError : public Error {
 public:
  using Error::Error;
};

// Malformed snapshot; offset is the byte position where decoding failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ocb
