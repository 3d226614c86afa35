#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "crx/error.hpp"
#include "crx/minj/ast.hpp"
#include "crx/oc/effect.hpp"

namespace crx {

// Concern elements: the common decomposition every mechanism starts from.
// A class splits into its type structure and one element per method body;
// aspect files contribute advice bodies and open-class effects.

struct TypeElem {
  std::string name;
  std::optional<std::string> super;
  std::vector<minj::FieldDecl> fields;
};

struct MethodElem {
  std::string class_name;
  minj::MethodDecl method;
};

struct AdviceBodyElem {
  std::string aspect;
  std::string id;
  minj::ExprPtr body;
};

struct EffectElem {
  std::string id;  // "<Aspect>.e<k>"
  oc::Effect effect;
};

using ConcernPayload = std::variant<TypeElem, MethodElem, AdviceBodyElem, EffectElem>;

struct ConcernElement {
  std::string id;      // unique within the program
  std::string module;  // partition block this element belongs to
  ConcernPayload payload;
};

inline bool equal(const ConcernElement& a, const ConcernElement& b) {
  if (a.id != b.id || a.module != b.module || a.payload.index() != b.payload.index())
    return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.payload);
        if constexpr (std::is_same_v<T, TypeElem>) {
          if (x.name != y.name || x.super != y.super || x.fields.size() != y.fields.size())
            return false;
          for (size_t i = 0; i < x.fields.size(); ++i)
            if (!minj::equal(x.fields[i], y.fields[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, MethodElem>) {
          return x.class_name == y.class_name && minj::equal(x.method, y.method);
        } else if constexpr (std::is_same_v<T, AdviceBodyElem>) {
          return x.aspect == y.aspect && x.id == y.id && minj::equal(x.body, y.body);
        } else {
          return x.id == y.id && oc::equal(x.effect, y.effect);
        }
      },
      a.payload);
}

// A partitioned set of concern elements. Partition blocks are keyed by
// module name, derived from the per-element tags; blocks are disjoint and
// cover the element set by construction, and ids must be unique.
struct ConcernProgram {
  std::vector<ConcernElement> elements;

  std::map<std::string, std::vector<const ConcernElement*>> partition() const {
    std::map<std::string, std::vector<const ConcernElement*>> blocks;
    for (const ConcernElement& e : elements) blocks[e.module].push_back(&e);
    return blocks;
  }

  void validate() const {
    std::set<std::string> ids;
    for (const ConcernElement& e : elements)
      if (!ids.insert(e.id).second)
        throw Error(ErrorKind::MechanismError, "duplicate concern element id '" + e.id + "'");
  }
};

// Split classes of one module into type + method elements.
inline void decompose_classes(const std::string& module, const std::vector<minj::ClassDecl>& classes,
                              ConcernProgram& out) {
  for (const minj::ClassDecl& c : classes) {
    out.elements.push_back(ConcernElement{
        module + "/type/" + c.name, module, TypeElem{c.name, c.super_name, c.fields}});
    for (const minj::MethodDecl& m : c.methods)
      out.elements.push_back(ConcernElement{
          module + "/method/" + c.name + "." + m.name + "/" + std::to_string(m.params.size()),
          module, MethodElem{c.name, m}});
  }
}

// Rebuild class declarations from type/method elements, preserving element
// order for members.
inline std::vector<minj::ClassDecl> assemble_classes(
    const std::vector<const ConcernElement*>& elements) {
  std::vector<minj::ClassDecl> classes;
  std::map<std::string, size_t> index;
  for (const ConcernElement* e : elements) {
    if (const auto* t = std::get_if<TypeElem>(&e->payload)) {
      index[t->name] = classes.size();
      classes.push_back(minj::ClassDecl{t->name, t->super, t->fields, {}});
    }
  }
  for (const ConcernElement* e : elements) {
    if (const auto* m = std::get_if<MethodElem>(&e->payload)) {
      auto it = index.find(m->class_name);
      if (it == index.end())
        throw Error(ErrorKind::MechanismError,
                    "method element for undeclared class '" + m->class_name + "'");
      classes[it->second].methods.push_back(m->method);
    }
  }
  return classes;
}

}  // namespace crx
