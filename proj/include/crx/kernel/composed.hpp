#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crx/cmp/clause.hpp"
#include "crx/kernel/concern.hpp"
#include "crx/minj/computation.hpp"

namespace crx {

// ---- composed payloads ----

// Compositor output: hypermodule units at clause granularity.
struct CmpClassUnit {
  std::string name;
  std::optional<std::string> super;
};
struct CmpFieldUnit {
  std::string class_name;
  minj::FieldDecl field;
};
struct CmpOperationUnit {
  std::string name;
  size_t arity = 0;
};
struct CmpMethodUnit {
  std::string class_name;
  minj::MethodDecl method;
};

// Open-classes nonreactive output: one transformed type per element.
struct OcTypeUnit {
  minj::ClassDecl decl;
};

// Open-classes reactive output: the program AST committed node by node.
enum class OcNodeKind { Root, TypeName, TypeDecl, TypeMember };

struct OcNode {
  OcNodeKind kind = OcNodeKind::Root;
  std::string path;       // "", "Point", "Point.decl", "Point.observers", "Point.moveBy/2"
  std::string type_name;  // owner type (empty for the root)
  std::optional<std::string> super;        // TypeDecl
  std::optional<minj::FieldDecl> field;    // TypeMember
  std::optional<minj::MethodDecl> method;  // TypeMember
};

// Pointcut-and-advice output: the trace of composed computations. Dynamic
// join point computations are recorded by id, not deep-copied.
struct PaComputationRecord {
  long long comp_id = 0;
  minj::CompKind kind = minj::CompKind::NullComputation;
  std::string signature;
  long long jp_desc_id = 0;
  std::vector<std::string> advice_refs;
};

using ComposedPayload = std::variant<CmpClassUnit, CmpFieldUnit, CmpOperationUnit, CmpMethodUnit,
                                     OcTypeUnit, OcNode, PaComputationRecord>;

// ---- provenance ----

// Identity embedding of a base element (reactive open-classes base nodes).
struct OcBaseRule {};

// Ordered application of effects to one target type.
struct OcApplication {
  std::string target;
  std::vector<std::string> effect_refs;
};

// Advice applied to one join point computation.
struct PaApplication {
  long long jp_comp_id = 0;
  std::vector<std::string> advice_refs;
};

using ProvenanceRule = std::variant<cmp::CompositionClause, OcApplication, OcBaseRule,
                                    PaApplication>;

// Every composed element records which rule produced it and which concern
// elements it consumed; re-applying the rule's constructor to `matched`
// must reproduce the payload.
struct Provenance {
  ProvenanceRule rule;
  std::vector<ConcernElement> matched;
};

struct ComposedElement {
  std::string id;
  ComposedPayload payload;
  Provenance provenance;
};

// ---- payload equality (for provenance checks and duality) ----

inline bool equal(const ComposedPayload& a, const ComposedPayload& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, CmpClassUnit>) {
          return x.name == y.name && x.super == y.super;
        } else if constexpr (std::is_same_v<T, CmpFieldUnit>) {
          return x.class_name == y.class_name && minj::equal(x.field, y.field);
        } else if constexpr (std::is_same_v<T, CmpOperationUnit>) {
          return x.name == y.name && x.arity == y.arity;
        } else if constexpr (std::is_same_v<T, CmpMethodUnit>) {
          return x.class_name == y.class_name && minj::equal(x.method, y.method);
        } else if constexpr (std::is_same_v<T, OcTypeUnit>) {
          return minj::equal(x.decl, y.decl);
        } else if constexpr (std::is_same_v<T, OcNode>) {
          if (x.kind != y.kind || x.path != y.path || x.type_name != y.type_name ||
              x.super != y.super)
            return false;
          if (x.field.has_value() != y.field.has_value() ||
              x.method.has_value() != y.method.has_value())
            return false;
          if (x.field && !minj::equal(*x.field, *y.field)) return false;
          if (x.method && !minj::equal(*x.method, *y.method)) return false;
          return true;
        } else {
          return x.comp_id == y.comp_id && x.kind == y.kind && x.signature == y.signature &&
                 x.jp_desc_id == y.jp_desc_id && x.advice_refs == y.advice_refs;
        }
      },
      a);
}

}  // namespace crx
