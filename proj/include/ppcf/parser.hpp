#pragma once

// Concrete syntax:
//
//   term := "\" ident ":" type "." term
//         | "fix" term
//         | "if" term "then" term "else" "[" ident "]" term
//         | "let" ident "=" term "in" term
//         | app
//   app  := atom+
//   atom := nat | ident | "succ" atom | "coin" "(" rational ")" | "(" term ")"
//   type := "nat" | type "->" type        (right associative, parentheses allowed)
//
// `#` starts a comment running to the end of the line. `λ` may replace `\`.

#include "ppcf/error.hpp"
#include "ppcf/term.hpp"

#include <cctype>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace ppcf {

namespace detail {

enum class Tok { End, Number, Ident, Lambda, Colon, Dot, LParen, RParen, LBracket, RBracket, Arrow, Equals, Slash };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline bool is_keyword(std::string_view s) {
  return s == "fix" || s == "if" || s == "then" || s == "else" || s == "let" || s == "in" || s == "succ" ||
         s == "coin" || s == "nat";
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    std::size_t l = line, cl = col;
    auto single = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(src.substr(i, len)), l, cl});
      advance(len);
    };
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      single(Tok::Number, j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      single(Tok::Ident, j - i);
    } else if (c == '\\') {
      single(Tok::Lambda, 1);
    } else if (src.substr(i, 2) == "\xCE\xBB") {  // λ
      single(Tok::Lambda, 2);
    } else if (src.substr(i, 2) == "->") {
      single(Tok::Arrow, 2);
    } else {
      switch (c) {
        case ':': single(Tok::Colon, 1); break;
        case '.': single(Tok::Dot, 1); break;
        case '(': single(Tok::LParen, 1); break;
        case ')': single(Tok::RParen, 1); break;
        case '[': single(Tok::LBracket, 1); break;
        case ']': single(Tok::RBracket, 1); break;
        case '=': single(Tok::Equals, 1); break;
        case '/': single(Tok::Slash, 1); break;
        default:
          throw ParseError("unexpected character '" + std::string(1, c) + "'", l, cl);
      }
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Term parse_program() {
    if (peek().kind == Tok::End) fail("empty input");
    Term t = term();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after end of term");
    return t;
  }

  Type parse_type_only() {
    Type t = type();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after end of type");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }

  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what + ", found '" + peek().text + "'");
    return toks_[pos_++];
  }

  void expect_keyword(std::string_view kw) {
    if (!keyword(kw)) fail("expected '" + std::string(kw) + "', found '" + peek().text + "'");
    ++pos_;
  }

  std::string ident() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text))
      fail("expected identifier, found '" + peek().text + "'");
    return toks_[pos_++].text;
  }

  Term term() {
    if (peek().kind == Tok::Lambda) {
      ++pos_;
      std::string x = ident();
      expect(Tok::Colon, "':'");
      Type t = type();
      expect(Tok::Dot, "'.'");
      return lam(x, t, term());
    }
    if (keyword("fix")) {
      ++pos_;
      return Term::fix(term());
    }
    if (keyword("if")) {
      ++pos_;
      Term s = term();
      expect_keyword("then");
      Term p = term();
      expect_keyword("else");
      expect(Tok::LBracket, "'['");
      std::string z = ident();
      expect(Tok::RBracket, "']'");
      Term r = term();
      return ifz(s, p, z, r);
    }
    if (keyword("let")) {
      ++pos_;
      std::string x = ident();
      expect(Tok::Equals, "'='");
      Term m = term();
      expect_keyword("in");
      Term n = term();
      return let_in(x, m, n);
    }
    return application();
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::Number || t.kind == Tok::LParen) return true;
    if (t.kind == Tok::Ident) return t.text == "succ" || t.text == "coin" || !is_keyword(t.text);
    return false;
  }

  Term application() {
    if (!starts_atom()) fail("expected a term, found '" + peek().text + "'");
    Term f = atom();
    while (starts_atom()) f = Term::app(f, atom());
    return f;
  }

  Term atom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ++pos_;
      try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(t.text, &used);
        return Term::num(v);
      } catch (const std::exception&) {
        throw ParseError("numeral out of range '" + t.text + "'", t.line, t.column);
      }
    }
    if (t.kind == Tok::LParen) {
      ++pos_;
      Term inner = term();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (keyword("succ")) {
      ++pos_;
      if (!starts_atom()) fail("expected an argument for succ");
      return Term::succ(atom());
    }
    if (keyword("coin")) {
      ++pos_;
      expect(Tok::LParen, "'('");
      return Term::coin(probability());
    }
    return Term::var(ident());
  }

  Rational probability() {
    const Token start = peek();
    std::string text;
    if (peek().kind != Tok::Number) fail("malformed rational: expected digits, found '" + peek().text + "'");
    text = toks_[pos_++].text;
    if (peek().kind == Tok::Slash) {
      ++pos_;
      if (peek().kind != Tok::Number) fail("malformed rational: expected denominator, found '" + peek().text + "'");
      text += "/" + toks_[pos_++].text;
    }
    expect(Tok::RParen, "')'");
    Rational p;
    try {
      p = parse_rational(text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("malformed rational: ") + e.what(), start.line, start.column);
    }
    if (p > 1) throw ParseError("probability " + text + " outside [0,1]", start.line, start.column);
    return p;
  }

  Type type() {
    Type dom = type_atom();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return Type::arrow(dom, type());
    }
    return dom;
  }

  Type type_atom() {
    if (keyword("nat")) {
      ++pos_;
      return Type::nat();
    }
    if (peek().kind == Tok::LParen) {
      ++pos_;
      Type t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("expected a type, found '" + peek().text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Term parse(std::string_view text) { return detail::Parser(text).parse_program(); }

inline Type parse_type(std::string_view text) { return detail::Parser(text).parse_type_only(); }

}  // namespace ppcf
