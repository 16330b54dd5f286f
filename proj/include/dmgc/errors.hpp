#pragma once

#include <stdexcept>
#include <string>

namespace dmgc {

/// Invalid argument or configuration. The CLI maps this to exit code 4.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Malformed input text (unparseable line, bad token). Exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structurally valid input with inconsistent content. Exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Failure of a numerical routine, e.g. eigensolver non-convergence. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dmgc
