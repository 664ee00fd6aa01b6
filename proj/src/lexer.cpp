#include "opmax/lexer.hpp"

#include <cctype>
#include <unordered_set>

namespace opmax {

namespace {

const std::unordered_set<std::string>& command_set() {
  static const std::unordered_set<std::string> cmds = {
      "\\begin{align}", "\\end{align}", "\\\\",
      "\\max", "\\min", "\\sum", "\\prod", "\\frac",
      "\\forall", "\\in", "\\notin", "\\not",
      "\\le", "\\leq", "\\ge", "\\geq", "\\neq", "\\ne",
      "\\subset", "\\subseteq", "\\subsetneq",
      "\\cup", "\\cap", "\\setminus", "\\backslash", "\\bigcup", "\\bigcap",
      "\\cdot", "\\times", "\\cdots", "\\dots", "\\ldots", "\\vert",
      "\\lfloor", "\\rfloor", "\\lceil", "\\rceil",
      "\\set", "\\emptyset",
      "\\mathbb{R}", "\\mathbb{Z}", "\\mathbb{N}", "\\mathbb{I}",
      "\\mathcal", "\\mathbf", "\\boldsymbol",
      "\\{", "\\}",
      // greek terminals
      "\\Alpha", "\\Beta", "\\Gamma", "\\Delta", "\\Epsilon", "\\Zeta",
      "\\Eta", "\\Theta", "\\Iota", "\\Kappa", "\\Lambda", "\\Mu", "\\Nu",
      "\\Xi", "\\Omicron", "\\Pi", "\\Rho", "\\Sigma", "\\Tau", "\\Upsilon",
      "\\Phi", "\\Chi", "\\Psi", "\\Omega",
      "\\alpha", "\\beta", "\\gamma", "\\delta", "\\epsilon", "\\zeta",
      "\\eta", "\\theta", "\\iota", "\\kappa", "\\lambda", "\\mu", "\\nu",
      "\\xi", "\\omicron", "\\pi", "\\rho", "\\sigma", "\\tau", "\\upsilon",
      "\\phi", "\\chi", "\\psi", "\\omega",
      "\\varepsilon", "\\vartheta", "\\varkappa", "\\varpi", "\\varrho",
      "\\varsigma", "\\varphi",
  };
  return cmds;
}

const std::unordered_set<std::string>& spacing_commands() {
  static const std::unordered_set<std::string> cmds = {
      "\\space", "\\quad", "\\qquad", "\\,", "\\;", "\\:", "\\!", "\\ ",
  };
  return cmds;
}

struct Cursor {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  bool done() const { return pos >= src.size(); }
  char peek(size_t off = 0) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }
  char advance() {
    char c = src[pos++];
    if (c == '\n') { ++line; col = 1; } else { ++col; }
    return c;
  }
  Span here() const { return Span{line, col, 1}; }
};

}  // namespace

bool is_known_command(const std::string& cmd) { return command_set().count(cmd) > 0; }

std::vector<Token> tokenize(const std::string& source, bool newline_tokens) {
  std::vector<Token> out;
  Cursor cur{source};

  auto push = [&](TokenKind k, std::string text, Span sp) {
    sp.length = (int)text.size();
    out.push_back(Token{k, std::move(text), sp});
  };

  while (!cur.done()) {
    char c = cur.peek();
    Span sp = cur.here();

    if (c == '\n' && newline_tokens) {
      cur.advance();
      push(TokenKind::Punct, "\n", sp);
      continue;
    }
    if (std::isspace((unsigned char)c)) {
      cur.advance();
      continue;
    }
    if (c == '%') {  // comment to end of line
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }
    if (c == '$') {  // math-mode dollars are decoration only
      cur.advance();
      continue;
    }

    if (c == '\\') {
      cur.advance();
      char n = cur.peek();
      if (n == '\\') {
        cur.advance();
        push(TokenKind::Command, "\\\\", sp);
        continue;
      }
      if (n == '{' || n == '}') {
        cur.advance();
        push(TokenKind::Command, std::string("\\") + n, sp);
        continue;
      }
      if (n == ',' || n == ';' || n == ':' || n == '!' || n == ' ') {
        cur.advance();
        continue;  // spacing command
      }
      std::string word = "\\";
      while (std::isalpha((unsigned char)cur.peek())) word += cur.advance();
      // \begin{align}, \end{align}, \mathbb{R} lex as single terminals
      if (word == "\\begin" || word == "\\end" || word == "\\mathbb") {
        std::string full = word;
        size_t save = cur.pos;
        int sl = cur.line, sc = cur.col;
        if (cur.peek() == '{') {
          full += cur.advance();
          while (!cur.done() && cur.peek() != '}') full += cur.advance();
          if (cur.peek() == '}') full += cur.advance();
        }
        if (is_known_command(full)) {
          push(TokenKind::Command, full, sp);
          continue;
        }
        cur.pos = save; cur.line = sl; cur.col = sc;
        throw parse_error("UnknownCommand", "unknown command '" + full + "'", sp);
      }
      if (spacing_commands().count(word)) continue;
      if (!is_known_command(word))
        throw parse_error("UnknownCommand", "unknown command '" + word + "'", sp);
      push(TokenKind::Command, word, sp);
      continue;
    }

    if (std::isalpha((unsigned char)c)) {
      cur.advance();
      push(TokenKind::Letter, std::string(1, c), sp);
      continue;
    }

    if (std::isdigit((unsigned char)c)) {
      std::string num;
      while (std::isdigit((unsigned char)cur.peek())) num += cur.advance();
      // a '.' is part of the numeric only when not the start of "..."
      if (cur.peek() == '.' && cur.peek(1) != '.') {
        num += cur.advance();
        while (std::isdigit((unsigned char)cur.peek())) num += cur.advance();
      }
      push(TokenKind::DigitRun, num, sp);
      continue;
    }

    switch (c) {
      case '{': case '}': case '(': case ')':
        cur.advance();
        push(TokenKind::Grouping, std::string(1, c), sp);
        continue;
      case '&':
        cur.advance();
        if (cur.peek() == '&') {
          cur.advance();
          push(TokenKind::Punct, "&&", sp);
        } else {
          push(TokenKind::Punct, "&", sp);
        }
        continue;
      case '.':
        if (cur.peek(1) == '.' && cur.peek(2) == '.') {
          cur.advance(); cur.advance(); cur.advance();
          push(TokenKind::Punct, "...", sp);
        } else {
          cur.advance();
          push(TokenKind::Punct, ".", sp);
        }
        continue;
      case '_': case '^': case '=': case '<': case '>': case '+': case '-':
      case '/': case ',': case '|': case '*':
        cur.advance();
        push(TokenKind::Punct, std::string(1, c), sp);
        continue;
      default:
        throw parse_error("StrayCharacter",
                          std::string("stray character '") + c + "'", sp);
    }
  }

  out.push_back(Token{TokenKind::End, "", cur.here()});
  return out;
}

}  // namespace opmax
