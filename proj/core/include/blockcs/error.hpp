#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace blockcs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation (bad order, bad size, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of the operation does not hold for the inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed its configured cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::uint64_t required, std::uint64_t cap)
      : Error(what), required_(required), cap_(cap) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

/// Reading or writing a file failed, or its content is malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace blockcs
