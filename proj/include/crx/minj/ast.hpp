#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace crx::minj {

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  long long value = 0;
};
struct StrLit {
  std::string value;
};
struct BoolLit {
  bool value = false;
};
struct NullLit {};
struct Var {
  std::string name;
};
struct This {};
struct FieldGet {
  ExprPtr target;
  std::string field;
};
struct FieldSet {
  ExprPtr target;
  std::string field;
  ExprPtr value;
};
struct Call {
  ExprPtr target;
  std::string method;
  std::vector<ExprPtr> args;
};
struct New {
  std::string class_name;
  std::vector<ExprPtr> args;
};
struct Seq {
  std::vector<ExprPtr> items;  // >= 2 items; value is the last one
};
struct If {
  ExprPtr cond;
  ExprPtr then_branch;
  ExprPtr else_branch;  // null when absent; missing else yields null
};
struct Print {
  ExprPtr arg;
};
enum class BinKind { Add, Eq };
struct BinOp {
  BinKind op = BinKind::Add;
  ExprPtr lhs;
  ExprPtr rhs;
};
// Only meaningful inside around-advice bodies; zero args means "current args".
struct Proceed {
  std::vector<ExprPtr> args;
};

using ExprNode = std::variant<IntLit, StrLit, BoolLit, NullLit, Var, This, FieldGet, FieldSet,
                              Call, New, Seq, If, Print, BinOp, Proceed>;

struct Expr {
  ExprNode node;
  SourcePos pos;
};

inline ExprPtr make_expr(ExprNode node, SourcePos pos = {}) {
  return std::make_shared<Expr>(Expr{std::move(node), pos});
}

struct FieldDecl {
  std::string type_name;  // carried as a name only, never checked
  std::string name;
};

struct MethodDecl {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
};

struct ClassDecl {
  std::string name;
  std::optional<std::string> super_name;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
};

struct Program {
  std::string module;  // "" when the file has no module header
  std::vector<ClassDecl> classes;
};

// ---- structural equality (positions ignored) ----

bool equal(const Expr& a, const Expr& b);

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

inline bool equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

inline bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, StrLit>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, BoolLit>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, NullLit>) return true;
        else if constexpr (std::is_same_v<T, Var>) return x.name == y.name;
        else if constexpr (std::is_same_v<T, This>) return true;
        else if constexpr (std::is_same_v<T, FieldGet>)
          return x.field == y.field && equal(x.target, y.target);
        else if constexpr (std::is_same_v<T, FieldSet>)
          return x.field == y.field && equal(x.target, y.target) && equal(x.value, y.value);
        else if constexpr (std::is_same_v<T, Call>)
          return x.method == y.method && equal(x.target, y.target) && equal(x.args, y.args);
        else if constexpr (std::is_same_v<T, New>)
          return x.class_name == y.class_name && equal(x.args, y.args);
        else if constexpr (std::is_same_v<T, Seq>) return equal(x.items, y.items);
        else if constexpr (std::is_same_v<T, If>)
          return equal(x.cond, y.cond) && equal(x.then_branch, y.then_branch) &&
                 equal(x.else_branch, y.else_branch);
        else if constexpr (std::is_same_v<T, Print>) return equal(x.arg, y.arg);
        else if constexpr (std::is_same_v<T, BinOp>)
          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        else if constexpr (std::is_same_v<T, Proceed>) return equal(x.args, y.args);
      },
      a.node);
}

inline bool equal(const FieldDecl& a, const FieldDecl& b) {
  return a.type_name == b.type_name && a.name == b.name;
}

inline bool equal(const MethodDecl& a, const MethodDecl& b) {
  return a.name == b.name && a.params == b.params && equal(a.body, b.body);
}

inline bool equal(const ClassDecl& a, const ClassDecl& b) {
  if (a.name != b.name || a.super_name != b.super_name) return false;
  if (a.fields.size() != b.fields.size() || a.methods.size() != b.methods.size()) return false;
  for (size_t i = 0; i < a.fields.size(); ++i)
    if (!equal(a.fields[i], b.fields[i])) return false;
  for (size_t i = 0; i < a.methods.size(); ++i)
    if (!equal(a.methods[i], b.methods[i])) return false;
  return true;
}

inline bool equal(const std::vector<ClassDecl>& a, const std::vector<ClassDecl>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

}  // namespace crx::minj
