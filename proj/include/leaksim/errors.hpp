/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <stdexcept>
#include <string>

namespace leaksim {

/// Scenario text failed to parse or validate. `line` is 1-based, 0 when the
/// problem is not tied to a specific line.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string source, int line, const std::string &message)
      : std::runtime_error(format(source, line, message)), source_(std::move(source)),
        line_(line) {}

  const std::string &source() const { return source_; }
  int line() const { return line_; }

private:
  static std::string format(const std::string &source, int line, const std::string &message) {
    return source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message;
  }

  std::string source_;
  int line_;
};

/// A simulation invariant failed; always a bug, never bad input.
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace leaksim
