/// @file  error.hpp
/// @brief Exception types and small formatting helpers shared by all modules

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <system_error>

namespace strel {

/// Base class of every error raised by the library
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands from different carriers or domains were combined
class algebra_error : public error {
public:
  using error::error;
};

/// A spatial model failed validation
class model_error : public error {
public:
  using error::error;
};

/// Formula text could not be parsed; carries a 1-based position
class parse_error : public error {
public:
  parse_error(const std::string &message, std::size_t line, std::size_t column)
      : error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        _line(line), _column(column) {}

  [[nodiscard]] std::size_t line() const noexcept { return _line; }
  [[nodiscard]] std::size_t column() const noexcept { return _column; }

private:
  std::size_t _line;
  std::size_t _column;
};

/// A formula uses an operator the requested operation cannot handle
class unsupported_operator : public error {
public:
  using error::error;
};

/// An atomic predicate could not be labeled at a location
class label_error : public error {
public:
  using error::error;
};

/// Malformed or inconsistent trace input
class trace_error : public error {
public:
  using error::error;
};

/// Invalid scenario configuration
class config_error : public error {
public:
  using error::error;
};

/// Shortest round-trip decimal text of a double; infinities print as `inf`/`-inf`
inline std::string format_real(double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  if (v == 0.0)
    return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{})
    throw error("cannot format real value");
  return std::string(buf, end);
}

} // namespace strel
