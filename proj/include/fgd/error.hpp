#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fgd {

// Invalid arguments are reported with std::invalid_argument throughout the
// library. The types below cover the remaining failure classes.

// Least-squares system without a unique solution.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Regression input without variance in the predictor.
class degenerate_fit_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input; line() is 1-based, 0 when not tied to a line.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        message_(what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
};

}  // namespace fgd
