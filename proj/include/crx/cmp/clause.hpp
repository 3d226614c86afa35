#pragma once

#include <string>
#include <vector>

namespace crx::cmp {

enum class ClauseKind { Operation, Class, Field, Mapping };
enum class Combinator { Identity, Equivalent };
enum class CallActionKind { None, Simple, Sequence };

// One fully expanded merge instruction. Operation/Class/Field clauses carry
// a combinator; Mapping clauses carry a CallAction binding an operation to
// the realizations that implement it for one class.
struct CompositionClause {
  ClauseKind kind = ClauseKind::Operation;
  std::string name;   // operation, class, or field name
  size_t arity = 0;   // Operation and Mapping clauses
  std::string owner;  // owning class (Field), bound class (Mapping)
  Combinator combinator = Combinator::Identity;
  CallActionKind call = CallActionKind::None;
  std::vector<std::string> sources;  // hyperspace unit paths in slice order
};

inline bool operator==(const CompositionClause& a, const CompositionClause& b) {
  return a.kind == b.kind && a.name == b.name && a.arity == b.arity && a.owner == b.owner &&
         a.combinator == b.combinator && a.call == b.call && a.sources == b.sources;
}

inline std::string combinator_name(Combinator c) {
  return c == Combinator::Equivalent ? "equivalent" : "identity";
}

inline std::string sources_text(const std::vector<std::string>& sources) {
  std::string out = "(<";
  for (size_t i = 0; i < sources.size(); ++i) {
    if (i) out += ", ";
    out += sources[i];
  }
  return out + ">)";
}

}  // namespace crx::cmp
