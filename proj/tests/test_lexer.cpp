#include <doctest.h>

#include "opmax/lexer.hpp"

using namespace opmax;

TEST_CASE("basic token stream") {
  auto toks = tokenize("x_1 \\le 3");
  REQUIRE(toks.size() == 6);  // incl. End
  CHECK(toks[0].is(TokenKind::Letter, "x"));
  CHECK(toks[1].is_punct("_"));
  CHECK(toks[2].is(TokenKind::DigitRun, "1"));
  CHECK(toks[3].is_cmd("\\le"));
  CHECK(toks[4].is(TokenKind::DigitRun, "3"));
}

TEST_CASE("sum model line starts with the sum command") {
  auto toks = tokenize("\\sum_{i=1}^n v_i x_i");
  CHECK(toks[0].is_cmd("\\sum"));
  CHECK(toks[1].is_punct("_"));
  CHECK(toks[2].is(TokenKind::Grouping, "{"));
}

TEST_CASE("unknown command is reported with its position") {
  try {
    tokenize("\\foo");
    FAIL("expected UnknownCommand");
  } catch (const Error& e) {
    CHECK(e.kind() == "UnknownCommand");
    CHECK(e.span().column == 1);
  }
}

TEST_CASE("merged terminals") {
  auto toks = tokenize("\\begin{align} \\mathbb{R} \\mathbb{I} \\end{align} \\\\ \\{ \\}");
  CHECK(toks[0].is_cmd("\\begin{align}"));
  CHECK(toks[1].is_cmd("\\mathbb{R}"));
  CHECK(toks[2].is_cmd("\\mathbb{I}"));
  CHECK(toks[3].is_cmd("\\end{align}"));
  CHECK(toks[4].is_cmd("\\\\"));
  CHECK(toks[5].is_cmd("\\{"));
  CHECK(toks[6].is_cmd("\\}"));
}

TEST_CASE("comments, alignment and ellipses") {
  auto toks = tokenize("a && b % trailing comment\n... , 0.25");
  CHECK(toks[0].is(TokenKind::Letter, "a"));
  CHECK(toks[1].is_punct("&&"));
  CHECK(toks[2].is(TokenKind::Letter, "b"));
  CHECK(toks[3].is_punct("..."));
  CHECK(toks[4].is_punct(","));
  CHECK(toks[5].is(TokenKind::DigitRun, "0.25"));
}

TEST_CASE("lexemes reconstruct the source modulo whitespace") {
  std::string src = "\\min && \\sum_{i=1}^n v_i x_i \\le W_j";
  auto toks = tokenize(src);
  std::string glued;
  for (const auto& t : toks) glued += t.text;
  std::string stripped;
  for (char c : src)
    if (!isspace((unsigned char)c)) stripped += c;
  CHECK(glued == stripped);
}

TEST_CASE("stray characters are rejected") {
  CHECK_THROWS_AS(tokenize("x @ y"), Error);
}
