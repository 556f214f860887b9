#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rm2mp {

// Diagnostic for malformed input text. line is 1-based; 0 means the error
// concerns the input as a whole (e.g. an empty program).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line),
        message_(message) {}

  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

}  // namespace rm2mp
