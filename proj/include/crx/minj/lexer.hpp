#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "crx/error.hpp"
#include "crx/minj/ast.hpp"

namespace crx::minj {

enum class Tok {
  Ident,
  Int,
  Str,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semi,
  Comma,
  Dot,
  Plus,
  Star,
  Colon,
  Assign,
  EqEq,
  Bang,
  AndAnd,
  OrOr,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long int_value = 0;
  SourcePos pos;
};

// One lexer serves .mj programs and the expression bodies embedded in .asp
// files; keywords are recognized by the parsers, not here.
class Lexer {
 public:
  explicit Lexer(std::string_view src, std::string file = "")
      : src_(src), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      bool end = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (end) break;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorKind::SyntaxError,
                (file_.empty() ? std::string() : file_ + ":") + std::to_string(line_) + ":" +
                    std::to_string(col_) + ": " + msg);
  }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char peek2() const { return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0'; }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek2() == '/') {
        while (peek() != '\n' && peek() != '\0') advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    skip_trivia();
    Token t;
    t.pos = {line_, col_};
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = advance();
    switch (c) {
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case ';': t.kind = Tok::Semi; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '.': t.kind = Tok::Dot; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '*': t.kind = Tok::Star; return t;
      case ':': t.kind = Tok::Colon; return t;
      case '!': t.kind = Tok::Bang; return t;
      case '=':
        if (peek() == '=') {
          advance();
          t.kind = Tok::EqEq;
        } else {
          t.kind = Tok::Assign;
        }
        return t;
      case '&':
        if (peek() == '&') {
          advance();
          t.kind = Tok::AndAnd;
          return t;
        }
        fail("stray '&'");
      case '|':
        if (peek() == '|') {
          advance();
          t.kind = Tok::OrOr;
          return t;
        }
        fail("stray '|'");
      case '"': {
        t.kind = Tok::Str;
        std::string s;
        for (;;) {
          if (pos_ >= src_.size()) fail("unterminated string literal");
          char d = advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= src_.size()) fail("unterminated escape");
            char e = advance();
            switch (e) {
              case 'n': s += '\n'; break;
              case 't': s += '\t'; break;
              case '"': s += '"'; break;
              case '\\': s += '\\'; break;
              default: fail(std::string("unknown escape '\\") + e + "'");
            }
          } else {
            s += d;
          }
        }
        t.text = std::move(s);
        return t;
      }
      default:
        if (std::isdigit(static_cast<unsigned char>(c))) {
          std::string digits(1, c);
          while (std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
          t.kind = Tok::Int;
          t.text = digits;
          t.int_value = std::stoll(digits);
          return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
          std::string id(1, c);
          while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
            id += advance();
          t.kind = Tok::Ident;
          t.text = std::move(id);
          return t;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  std::string_view src_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace crx::minj
