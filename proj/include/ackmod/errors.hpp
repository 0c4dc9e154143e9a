#pragma once

#include <stdexcept>
#include <string>

namespace ackmod {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An input is outside the feasible size bounds of the requested operation
/// (table too large, oracle domain exceeded, ...).
class InfeasibleSizeError : public Error {
 public:
  explicit InfeasibleSizeError(const std::string& what) : Error(what) {}
};

/// An argument violates a precondition that is not a size bound
/// (bad modulus, unsupported level, malformed spec, ...).
class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

}  // namespace ackmod
