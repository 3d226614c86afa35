#pragma once

#include <string>
#include <variant>

#include "crx/minj/ast.hpp"

namespace crx::oc {

// introduce <Target>.<name> : <TypeName>;
struct FieldIntro {
  std::string target;
  minj::FieldDecl field;
};

// introduce <Target>.<name>(params) { body }
struct MethodIntro {
  std::string target;
  minj::MethodDecl method;
};

// declare parents: <Target> extends <Super>;
struct SuperTypeDecl {
  std::string target;
  std::string super;
};

using Effect = std::variant<FieldIntro, MethodIntro, SuperTypeDecl>;

inline const std::string& target_of(const Effect& e) {
  return std::visit([](const auto& x) -> const std::string& { return x.target; }, e);
}

inline bool equal(const Effect& a, const Effect& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, FieldIntro>)
          return x.target == y.target && minj::equal(x.field, y.field);
        else if constexpr (std::is_same_v<T, MethodIntro>)
          return x.target == y.target && minj::equal(x.method, y.method);
        else
          return x.target == y.target && x.super == y.super;
      },
      a);
}

inline std::string render(const Effect& e) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FieldIntro>)
          return "introduce " + x.target + "." + x.field.name + " : " + x.field.type_name + ";";
        else if constexpr (std::is_same_v<T, MethodIntro>)
          return "introduce " + x.target + "." + x.method.name + "(...)";
        else
          return "declare parents: " + x.target + " extends " + x.super + ";";
      },
      e);
}

}  // namespace crx::oc
