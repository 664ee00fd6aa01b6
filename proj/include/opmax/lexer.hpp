#pragma once

#include <string>
#include <vector>

#include "opmax/diagnostics.hpp"

namespace opmax {

enum class TokenKind {
  Command,     // backslash terminals: \sum, \le, \mathbb{R}, \{, \\, ...
  Letter,      // single ASCII letter
  DigitRun,    // "3", "12", "0.5"
  Punct,       // _ ^ = < > + - / , . | & && ... *
  Grouping,    // { } ( )
  End,
};

struct Token {
  TokenKind kind;
  std::string text;
  Span span;

  bool is(TokenKind k, const std::string& t) const { return kind == k && text == t; }
  bool is_cmd(const std::string& t) const { return kind == TokenKind::Command && text == t; }
  bool is_punct(const std::string& t) const { return kind == TokenKind::Punct && text == t; }
};

// Lexes a model or instance-data source. Whitespace, spacing commands and
// %-comments are skipped; everything else becomes a token. Throws
// Error("UnknownCommand") for a backslash word outside the terminal set and
// Error("StrayCharacter") for anything unrecognized.
// With newline_tokens set, line breaks come through as Punct "\n" so that
// line-oriented inputs (instance data) can be split.
std::vector<Token> tokenize(const std::string& source, bool newline_tokens = false);

bool is_known_command(const std::string& cmd);

}  // namespace opmax
