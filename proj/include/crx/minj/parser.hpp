#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crx/error.hpp"
#include "crx/minj/ast.hpp"
#include "crx/minj/lexer.hpp"

namespace crx::minj {

// Shared token cursor; the aspect-file parser drives the same machinery and
// borrows parse_expr for embedded bodies.
class Cursor {
 public:
  Cursor(std::vector<Token> toks, std::string file)
      : toks_(std::move(toks)), file_(std::move(file)) {}

  const Token& peek(int ahead = 0) const {
    size_t i = pos_ + static_cast<size_t>(ahead);
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool at(Tok k) const { return peek().kind == k; }

  bool at_ident(std::string_view word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }

  bool accept_ident(std::string_view word) {
    if (!at_ident(word)) return false;
    take();
    return true;
  }

  const Token& expect(Tok k, std::string_view what) {
    if (!at(k)) fail(std::string("expected ") + std::string(what));
    return take();
  }

  std::string expect_ident(std::string_view what) {
    if (!at(Tok::Ident)) fail(std::string("expected ") + std::string(what));
    return take().text;
  }

  void expect_word(std::string_view word) {
    if (!accept_ident(word)) fail(std::string("expected '") + std::string(word) + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw Error(ErrorKind::SyntaxError,
                (file_.empty() ? std::string() : file_ + ":") + std::to_string(t.pos.line) + ":" +
                    std::to_string(t.pos.col) + ": " + msg);
  }

  const std::string& file() const { return file_; }

 private:
  std::vector<Token> toks_;
  std::string file_;
  size_t pos_ = 0;
};

inline const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> kw = {
      "class", "extends", "module", "new",  "this", "print",
      "proceed", "true", "false", "null", "if",   "else",
  };
  return kw;
}

class Parser {
 public:
  explicit Parser(Cursor& cur) : cur_(cur) {}

  // expr := seq
  ExprPtr parse_expr() {
    SourcePos pos = cur_.peek().pos;
    ExprPtr first = parse_simple();
    if (!cur_.at(Tok::Semi)) return first;
    Seq seq;
    seq.items.push_back(std::move(first));
    while (cur_.accept(Tok::Semi)) seq.items.push_back(parse_simple());
    return make_expr(std::move(seq), pos);
  }

  Program parse_program() {
    Program prog;
    if (cur_.accept_ident("module")) {
      prog.module = parse_dotted_name();
      cur_.expect(Tok::Semi, "';' after module header");
    }
    while (!cur_.at(Tok::End)) {
      cur_.expect_word("class");
      prog.classes.push_back(parse_class_body());
    }
    for (size_t i = 0; i < prog.classes.size(); ++i)
      for (size_t j = i + 1; j < prog.classes.size(); ++j)
        if (prog.classes[i].name == prog.classes[j].name)
          throw Error(ErrorKind::DuplicateClassError,
                      "class '" + prog.classes[i].name + "' declared more than once" +
                          (cur_.file().empty() ? "" : " in " + cur_.file()));
    return prog;
  }

  // Caller has already consumed the 'class' keyword.
  ClassDecl parse_class_body() {
    ClassDecl cls;
    cls.name = cur_.expect_ident("class name");
    if (cur_.accept_ident("extends")) cls.super_name = cur_.expect_ident("superclass name");
    cur_.expect(Tok::LBrace, "'{'");
    while (!cur_.accept(Tok::RBrace)) {
      std::string first = cur_.expect_ident("member declaration");
      if (cur_.at(Tok::Ident)) {
        // fielddecl := TypeName name ';'
        FieldDecl f;
        f.type_name = first;
        f.name = cur_.take().text;
        cur_.expect(Tok::Semi, "';' after field declaration");
        cls.fields.push_back(std::move(f));
      } else if (cur_.at(Tok::LParen)) {
        cls.methods.push_back(parse_method_rest(first));
      } else {
        cur_.fail("expected field or method declaration");
      }
    }
    return cls;
  }

  // Caller consumed the method name; parses "(params) { body }".
  MethodDecl parse_method_rest(std::string name) {
    MethodDecl m;
    m.name = std::move(name);
    cur_.expect(Tok::LParen, "'('");
    if (!cur_.at(Tok::RParen)) {
      for (;;) {
        m.params.push_back(cur_.expect_ident("parameter name"));
        if (!cur_.accept(Tok::Comma)) break;
      }
    }
    cur_.expect(Tok::RParen, "')'");
    for (size_t i = 0; i < m.params.size(); ++i)
      for (size_t j = i + 1; j < m.params.size(); ++j)
        if (m.params[i] == m.params[j])
          cur_.fail("duplicate parameter '" + m.params[i] + "'");
    cur_.expect(Tok::LBrace, "'{'");
    m.body = parse_expr();
    cur_.expect(Tok::RBrace, "'}'");
    return m;
  }

  std::string parse_dotted_name() {
    std::string name = cur_.expect_ident("name");
    while (cur_.accept(Tok::Dot)) name += "." + cur_.expect_ident("name segment");
    return name;
  }

 private:
  // simple := equality, with field assignment folded into the postfix chain
  ExprPtr parse_simple() { return parse_equality(); }

  ExprPtr parse_equality() {
    ExprPtr lhs = parse_additive();
    while (cur_.at(Tok::EqEq)) {
      SourcePos pos = cur_.take().pos;
      ExprPtr rhs = parse_additive();
      lhs = make_expr(BinOp{BinKind::Eq, std::move(lhs), std::move(rhs)}, pos);
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_postfix();
    while (cur_.at(Tok::Plus)) {
      SourcePos pos = cur_.take().pos;
      ExprPtr rhs = parse_postfix();
      lhs = make_expr(BinOp{BinKind::Add, std::move(lhs), std::move(rhs)}, pos);
    }
    return lhs;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (cur_.at(Tok::Dot)) {
      SourcePos pos = cur_.take().pos;
      std::string name = cur_.expect_ident("member name");
      if (cur_.at(Tok::LParen)) {
        Call call;
        call.target = std::move(e);
        call.method = std::move(name);
        call.args = parse_args();
        e = make_expr(std::move(call), pos);
      } else if (cur_.at(Tok::Assign)) {
        cur_.take();
        FieldSet set;
        set.target = std::move(e);
        set.field = std::move(name);
        set.value = parse_simple();
        return make_expr(std::move(set), pos);
      } else {
        e = make_expr(FieldGet{std::move(e), std::move(name)}, pos);
      }
    }
    return e;
  }

  std::vector<ExprPtr> parse_args() {
    cur_.expect(Tok::LParen, "'('");
    std::vector<ExprPtr> args;
    if (!cur_.at(Tok::RParen)) {
      for (;;) {
        args.push_back(parse_simple());
        if (!cur_.accept(Tok::Comma)) break;
      }
    }
    cur_.expect(Tok::RParen, "')'");
    return args;
  }

  ExprPtr parse_primary() {
    const Token& t = cur_.peek();
    SourcePos pos = t.pos;
    switch (t.kind) {
      case Tok::Int: {
        long long v = cur_.take().int_value;
        return make_expr(IntLit{v}, pos);
      }
      case Tok::Str: {
        std::string s = cur_.take().text;
        return make_expr(StrLit{std::move(s)}, pos);
      }
      case Tok::LParen: {
        cur_.take();
        ExprPtr e = parse_expr();
        cur_.expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        if (cur_.accept_ident("true")) return make_expr(BoolLit{true}, pos);
        if (cur_.accept_ident("false")) return make_expr(BoolLit{false}, pos);
        if (cur_.accept_ident("null")) return make_expr(NullLit{}, pos);
        if (cur_.accept_ident("this")) return make_expr(This{}, pos);
        if (cur_.accept_ident("print")) {
          cur_.expect(Tok::LParen, "'('");
          ExprPtr arg = parse_expr();
          cur_.expect(Tok::RParen, "')'");
          return make_expr(Print{std::move(arg)}, pos);
        }
        if (cur_.accept_ident("proceed")) return make_expr(Proceed{parse_args()}, pos);
        if (cur_.accept_ident("new")) {
          std::string cls = cur_.expect_ident("class name");
          return make_expr(New{std::move(cls), parse_args()}, pos);
        }
        if (cur_.accept_ident("if")) {
          cur_.expect(Tok::LParen, "'('");
          ExprPtr cond = parse_expr();
          cur_.expect(Tok::RParen, "')'");
          cur_.expect(Tok::LBrace, "'{'");
          ExprPtr then_branch = parse_expr();
          cur_.expect(Tok::RBrace, "'}'");
          ExprPtr else_branch;
          if (cur_.accept_ident("else")) {
            cur_.expect(Tok::LBrace, "'{'");
            else_branch = parse_expr();
            cur_.expect(Tok::RBrace, "'}'");
          }
          return make_expr(If{std::move(cond), std::move(then_branch), std::move(else_branch)},
                           pos);
        }
        std::string name = cur_.take().text;
        if (keywords().count(name)) cur_.fail("keyword '" + name + "' cannot be used here");
        return make_expr(Var{std::move(name)}, pos);
      }
      default:
        cur_.fail("expected expression");
    }
  }

  Cursor& cur_;
};

inline Program parse_program(std::string_view src, const std::string& file = "") {
  Cursor cur(Lexer(src, file).run(), file);
  Parser parser(cur);
  return parser.parse_program();
}

inline ExprPtr parse_expr(std::string_view src, const std::string& file = "") {
  Cursor cur(Lexer(src, file).run(), file);
  Parser parser(cur);
  ExprPtr e = parser.parse_expr();
  cur.expect(Tok::End, "end of expression");
  return e;
}

// "C.m" -> new C().m()
inline ExprPtr parse_entry(const std::string& entry) {
  Lexer lex(entry, "<entry>");
  Cursor cur(lex.run(), "<entry>");
  std::string cls = cur.expect_ident("class name");
  cur.expect(Tok::Dot, "'.' in entry point");
  std::string method = cur.expect_ident("method name");
  cur.expect(Tok::End, "end of entry point");
  Call call;
  call.target = make_expr(New{cls, {}});
  call.method = method;
  return make_expr(std::move(call));
}

}  // namespace crx::minj
