#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>

namespace crx::minj {

struct Object;
using ObjectPtr = std::shared_ptr<Object>;

struct IntV {
  long long value = 0;
};
struct StrV {
  std::string value;
};
struct BoolV {
  bool value = false;
};
struct NullV {};
struct ObjRef {
  ObjectPtr object;
};

using Value = std::variant<IntV, StrV, BoolV, NullV, ObjRef>;

struct Object {
  std::string class_name;
  int id = 0;  // per-run allocation counter, for deterministic rendering
  std::map<std::string, Value> fields;
};

inline std::string render(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntV>) return std::to_string(x.value);
        else if constexpr (std::is_same_v<T, StrV>) return x.value;
        else if constexpr (std::is_same_v<T, BoolV>) return x.value ? "true" : "false";
        else if constexpr (std::is_same_v<T, NullV>) return "null";
        else return x.object->class_name + "#" + std::to_string(x.object->id);
      },
      v);
}

inline bool value_eq(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, IntV>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, StrV>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, BoolV>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, NullV>) return true;
        else return x.object == y.object;  // reference identity
      },
      a);
}

}  // namespace crx::minj
