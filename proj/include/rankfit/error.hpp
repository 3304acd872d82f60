#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rankfit {

// Base for all errors raised by the toolkit. Each subclass maps onto one
// CLI exit status (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empty, degenerate or underdetermined input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid UTF-8 in a text stream.
class DecodeError : public DataError {
 public:
  DecodeError(const std::string& what, std::size_t byte_offset)
      : DataError(what + " at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Model evaluated outside its domain, or invalid parameters.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Ill-conditioned linear systems and other numeric failures.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace rankfit
