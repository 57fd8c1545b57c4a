#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace proppwalk {

/// An invalid configuration: negative chips or chips on both parity classes.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<std::int64_t> positions = {})
      : std::runtime_error(what), positions_(std::move(positions)) {}

  const std::vector<std::int64_t>& positions() const { return positions_; }

 private:
  std::vector<std::int64_t> positions_;
};

/// Malformed text input (configuration, split log, prescription, sweep spec).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A request whose estimated memory would exceed the configured budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructed configuration failed its simulate-and-check verification.
class ForcingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace proppwalk
