#pragma once

#include <stdexcept>
#include <string>

namespace bienforce {

// Every thrown error carries a stable machine-readable code (e.g.
// "UnboundVariable", "StateBoundExceeded") next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string message)
      : std::runtime_error(code + ": " + message),
        code_(std::move(code)),
        message_(std::move(message)) {}

  const std::string& code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  std::string code_;
  std::string message_;
};

class ParseError : public Error {
 public:
  ParseError(std::string code, const std::string& message, int line, int column)
      : Error(std::move(code),
              message + " (line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// Exploration or checking ran past a configured bound.
class BoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace bienforce
