#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace xconvex {

// Malformed user input: bad JSON, bad expression text, inconsistent dimensions.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression text that does not parse; carries the byte offset of the failure.
struct ParseError : InputError {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : InputError(msg + " (byte " + std::to_string(off) + ")"), offset(off) {}
};

// A function evaluation that produced a non-finite value or hit an invalid
// operation (log of a negative number, division by zero) at a concrete point.
struct EvalError : std::runtime_error {
  std::vector<double> at;
  EvalError(const std::string& msg, std::vector<double> point)
      : std::runtime_error(msg), at(std::move(point)) {}
};

}  // namespace xconvex
