#pragma once

#include <stdexcept>
#include <string>

namespace opmax {

struct Span {
  int line = 0;     // 1-based, 0 = unknown
  int column = 0;   // 1-based
  int length = 0;

  std::string str() const {
    if (line == 0) return "";
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

// Failure classes map to distinct CLI exit codes.
enum class ErrorClass { Parse = 2, Ground = 3, Encode = 4, Solve = 5, Decode = 6, Usage = 7 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string kind, const std::string& msg, Span span = {})
      : std::runtime_error(span.line ? msg + " (at " + span.str() + ")" : msg),
        cls_(cls), kind_(std::move(kind)), span_(span) {}

  ErrorClass error_class() const { return cls_; }
  const std::string& kind() const { return kind_; }
  Span span() const { return span_; }

 private:
  ErrorClass cls_;
  std::string kind_;
  Span span_;
};

inline Error parse_error(const std::string& kind, const std::string& msg, Span s = {}) {
  return Error(ErrorClass::Parse, kind, msg, s);
}
inline Error ground_error(const std::string& kind, const std::string& msg, Span s = {}) {
  return Error(ErrorClass::Ground, kind, msg, s);
}
inline Error encode_error(const std::string& kind, const std::string& msg) {
  return Error(ErrorClass::Encode, kind, msg);
}
inline Error solve_error(const std::string& kind, const std::string& msg) {
  return Error(ErrorClass::Solve, kind, msg);
}
inline Error decode_error(const std::string& kind, const std::string& msg) {
  return Error(ErrorClass::Decode, kind, msg);
}

}  // namespace opmax
