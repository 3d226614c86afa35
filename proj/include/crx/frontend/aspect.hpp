#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crx/minj/computation.hpp"
#include "crx/minj/parser.hpp"
#include "crx/oc/effect.hpp"
#include "crx/pa/pointcut.hpp"

namespace crx::frontend {

struct PointcutDecl {
  std::string name;
  pa::PcPtr pc;
};

struct AdviceDecl {
  std::string aspect;
  std::string id;
  minj::AdviceKind kind = minj::AdviceKind::Before;
  minj::ExprPtr body;
  pa::PcPtr inline_pc;  // null when the placement comes from a rules file
};

struct AspectDecl {
  std::string name;
  std::vector<PointcutDecl> pointcuts;
  std::vector<AdviceDecl> advice;
  std::vector<oc::Effect> effects;  // declaration order
};

inline bool mentions_proceed(const minj::ExprPtr& e);

inline bool mentions_proceed(const minj::Expr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, minj::Proceed>) {
          return true;
        } else if constexpr (std::is_same_v<T, minj::FieldGet>) {
          return mentions_proceed(n.target);
        } else if constexpr (std::is_same_v<T, minj::FieldSet>) {
          return mentions_proceed(n.target) || mentions_proceed(n.value);
        } else if constexpr (std::is_same_v<T, minj::Call>) {
          if (mentions_proceed(n.target)) return true;
          for (const minj::ExprPtr& a : n.args)
            if (mentions_proceed(a)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, minj::New>) {
          for (const minj::ExprPtr& a : n.args)
            if (mentions_proceed(a)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, minj::Seq>) {
          for (const minj::ExprPtr& item : n.items)
            if (mentions_proceed(item)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, minj::If>) {
          return mentions_proceed(n.cond) || mentions_proceed(n.then_branch) ||
                 mentions_proceed(n.else_branch);
        } else if constexpr (std::is_same_v<T, minj::Print>) {
          return mentions_proceed(n.arg);
        } else if constexpr (std::is_same_v<T, minj::BinOp>) {
          return mentions_proceed(n.lhs) || mentions_proceed(n.rhs);
        } else {
          return false;
        }
      },
      e.node);
}

inline bool mentions_proceed(const minj::ExprPtr& e) { return e && mentions_proceed(*e); }

// Pointcut expressions: `||` over `&&` over `!`, with call/execution
// designators over signature patterns, adviceexecution(), parentheses, and
// references to named pointcuts (bare inside the declaring aspect,
// Aspect.name from anywhere). References are resolved on the spot, so a
// plan never depends on where its pointcuts were written down.
class PointcutParser {
 public:
  PointcutParser(minj::Cursor& cur, const std::map<std::string, pa::PcPtr>& env)
      : cur_(cur), env_(env) {}

  pa::PcPtr parse() { return parse_or(); }

 private:
  pa::PcPtr parse_or() {
    pa::PcPtr lhs = parse_and();
    while (cur_.accept(minj::Tok::OrOr)) {
      pa::PcPtr rhs = parse_and();
      lhs = pa::make_pc(pa::OrPc{std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  pa::PcPtr parse_and() {
    pa::PcPtr lhs = parse_unary();
    while (cur_.accept(minj::Tok::AndAnd)) {
      pa::PcPtr rhs = parse_unary();
      lhs = pa::make_pc(pa::AndPc{std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  pa::PcPtr parse_unary() {
    if (cur_.accept(minj::Tok::Bang)) return pa::make_pc(pa::NotPc{parse_unary()});
    return parse_primary();
  }

  std::string parse_pattern() {
    std::string pat;
    while (cur_.at(minj::Tok::Ident) || cur_.at(minj::Tok::Star)) {
      const minj::Token& t = cur_.take();
      pat += t.kind == minj::Tok::Star ? "*" : t.text;
    }
    if (pat.empty()) cur_.fail("expected signature pattern");
    return pat;
  }

  pa::PcPtr parse_primary() {
    bool call = cur_.at_ident("call");
    bool execution = cur_.at_ident("execution");
    if ((call || execution) && cur_.peek(1).kind == minj::Tok::LParen) {
      cur_.take();
      cur_.expect(minj::Tok::LParen, "'('");
      pa::SigPattern pat;
      pat.type_pat = parse_pattern();
      cur_.expect(minj::Tok::Comma, "',' between patterns");
      pat.name_pat = parse_pattern();
      cur_.expect(minj::Tok::RParen, "')'");
      if (call) return pa::make_pc(pa::CallPc{std::move(pat)});
      return pa::make_pc(pa::ExecutionPc{std::move(pat)});
    }
    if (cur_.at_ident("adviceexecution") && cur_.peek(1).kind == minj::Tok::LParen) {
      cur_.take();
      cur_.expect(minj::Tok::LParen, "'('");
      cur_.expect(minj::Tok::RParen, "')'");
      return pa::make_pc(pa::AdviceExecutionPc{});
    }
    if (cur_.accept(minj::Tok::LParen)) {
      pa::PcPtr inner = parse_or();
      cur_.expect(minj::Tok::RParen, "')'");
      return inner;
    }
    if (cur_.at(minj::Tok::Ident)) {
      std::string name = cur_.take().text;
      if (cur_.accept(minj::Tok::Dot)) name += "." + cur_.expect_ident("pointcut name");
      auto it = env_.find(name);
      if (it == env_.end()) cur_.fail("unknown pointcut '" + name + "'");
      return it->second;
    }
    cur_.fail("expected pointcut expression");
  }

  minj::Cursor& cur_;
  const std::map<std::string, pa::PcPtr>& env_;
};

// Parses one aspect file. `pc_env` accumulates qualified pointcut names
// (Aspect.name) across files so rules files and later aspects can refer to
// them; bare names are visible only inside their own aspect, after their
// declaration.
inline std::vector<AspectDecl> parse_aspect_file(std::string_view src, const std::string& file,
                                                 std::map<std::string, pa::PcPtr>& pc_env) {
  minj::Cursor cur(minj::Lexer(src, file).run(), file);
  minj::Parser expr_parser(cur);
  std::vector<AspectDecl> aspects;

  while (!cur.at(minj::Tok::End)) {
    cur.expect_word("aspect");
    AspectDecl decl;
    decl.name = cur.expect_ident("aspect name");
    cur.expect(minj::Tok::LBrace, "'{'");

    std::map<std::string, pa::PcPtr> local = pc_env;
    while (!cur.accept(minj::Tok::RBrace)) {
      if (cur.accept_ident("pointcut")) {
        std::string name = cur.expect_ident("pointcut name");
        for (const PointcutDecl& p : decl.pointcuts)
          if (p.name == name) cur.fail("pointcut '" + name + "' declared twice");
        cur.expect(minj::Tok::Colon, "':'");
        pa::PcPtr pc = PointcutParser(cur, local).parse();
        cur.expect(minj::Tok::Semi, "';'");
        local[name] = pc;
        local[decl.name + "." + name] = pc;
        pc_env[decl.name + "." + name] = pc;
        decl.pointcuts.push_back(PointcutDecl{std::move(name), std::move(pc)});
      } else if (cur.at_ident("before") || cur.at_ident("after") || cur.at_ident("around")) {
        std::string kw = cur.take().text;
        AdviceDecl adv;
        adv.aspect = decl.name;
        adv.kind = kw == "before" ? minj::AdviceKind::Before
                   : kw == "after" ? minj::AdviceKind::After
                                   : minj::AdviceKind::Around;
        adv.id = cur.expect_ident("advice id");
        for (const AdviceDecl& a : decl.advice)
          if (a.id == adv.id) cur.fail("advice '" + adv.id + "' declared twice");
        if (cur.accept(minj::Tok::Colon)) adv.inline_pc = PointcutParser(cur, local).parse();
        cur.expect(minj::Tok::LBrace, "'{'");
        adv.body = expr_parser.parse_expr();
        cur.expect(minj::Tok::RBrace, "'}'");
        if (adv.kind != minj::AdviceKind::Around && mentions_proceed(adv.body))
          throw Error(ErrorKind::ProceedOutsideAround,
                      "proceed in " + kw + " advice '" + decl.name + "." + adv.id + "'");
        decl.advice.push_back(std::move(adv));
      } else if (cur.accept_ident("introduce")) {
        std::string target = cur.expect_ident("target type");
        cur.expect(minj::Tok::Dot, "'.'");
        std::string member = cur.expect_ident("member name");
        if (cur.accept(minj::Tok::Colon)) {
          std::string type = cur.expect_ident("field type");
          cur.expect(minj::Tok::Semi, "';' after field introduction");
          decl.effects.push_back(oc::FieldIntro{std::move(target),
                                                minj::FieldDecl{std::move(type), std::move(member)}});
        } else if (cur.at(minj::Tok::LParen)) {
          minj::MethodDecl m = expr_parser.parse_method_rest(std::move(member));
          decl.effects.push_back(oc::MethodIntro{std::move(target), std::move(m)});
        } else {
          cur.fail("expected ':' or '(' after introduced member name");
        }
      } else if (cur.accept_ident("declare")) {
        cur.expect_word("parents");
        cur.expect(minj::Tok::Colon, "':'");
        std::string target = cur.expect_ident("target type");
        cur.expect_word("extends");
        std::string super = cur.expect_ident("superclass name");
        cur.expect(minj::Tok::Semi, "';' after parents declaration");
        decl.effects.push_back(oc::SuperTypeDecl{std::move(target), std::move(super)});
      } else {
        cur.fail("expected pointcut, advice, introduce, or declare");
      }
    }
    aspects.push_back(std::move(decl));
  }
  return aspects;
}

struct RuleBinding {
  std::string advice_ref;  // "Aspect.advice"
  pa::PcPtr pc;
};

// Rules files carry placements only: `Aspect.advice : <pcexpr>;` per line.
// The expressions may reference qualified pointcut names from any parsed
// aspect.
inline std::vector<RuleBinding> parse_rules_file(std::string_view src, const std::string& file,
                                                 const std::map<std::string, pa::PcPtr>& pc_env) {
  minj::Cursor cur(minj::Lexer(src, file).run(), file);
  std::vector<RuleBinding> out;
  while (!cur.at(minj::Tok::End)) {
    std::string aspect = cur.expect_ident("aspect name");
    cur.expect(minj::Tok::Dot, "'.'");
    std::string id = cur.expect_ident("advice id");
    cur.expect(minj::Tok::Colon, "':'");
    pa::PcPtr pc = PointcutParser(cur, pc_env).parse();
    cur.expect(minj::Tok::Semi, "';' after placement");
    out.push_back(RuleBinding{aspect + "." + id, std::move(pc)});
  }
  return out;
}

}  // namespace crx::frontend
