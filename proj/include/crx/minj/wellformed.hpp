#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "crx/error.hpp"
#include "crx/minj/ast.hpp"

namespace crx::minj {

class ClassIndex {
 public:
  explicit ClassIndex(const std::vector<ClassDecl>& classes) {
    for (const ClassDecl& c : classes) {
      if (!by_name_.emplace(c.name, &c).second)
        throw Error(ErrorKind::DuplicateClassError, "class '" + c.name + "' declared more than once");
    }
  }

  const ClassDecl* find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
  }

  // Superclass chain starting at `name` (inclusive). Throws on unknown
  // supers and on cycles.
  std::vector<const ClassDecl*> chain(const std::string& name) const {
    std::vector<const ClassDecl*> out;
    std::set<std::string> seen;
    const ClassDecl* cur = find(name);
    while (cur) {
      if (!seen.insert(cur->name).second)
        throw Error(ErrorKind::InheritanceCycleError,
                    "inheritance cycle through class '" + cur->name + "'");
      out.push_back(cur);
      if (!cur->super_name) break;
      const ClassDecl* next = find(*cur->super_name);
      if (!next)
        throw Error(ErrorKind::UnknownSuperError,
                    "class '" + cur->name + "' extends undeclared class '" + *cur->super_name + "'");
      cur = next;
    }
    return out;
  }

  // Field names over the whole chain; a redeclared name shadows the
  // inherited one (single storage slot either way).
  std::vector<FieldDecl> transitive_fields(const std::string& name) const {
    std::vector<FieldDecl> out;
    std::set<std::string> seen;
    for (const ClassDecl* c : chain(name))
      for (const FieldDecl& f : c->fields)
        if (seen.insert(f.name).second) out.push_back(f);
    return out;
  }

  // Nearest declaration of (method, arity) at or above `cls`; returns the
  // declaring class through `declaring`.
  const MethodDecl* dispatch(const std::string& cls, const std::string& method, size_t arity,
                             const ClassDecl** declaring = nullptr) const {
    for (const ClassDecl* c : chain(cls)) {
      for (const MethodDecl& m : c->methods) {
        if (m.name == method && m.params.size() == arity) {
          if (declaring) *declaring = c;
          return &m;
        }
      }
    }
    return nullptr;
  }

 private:
  std::map<std::string, const ClassDecl*> by_name_;
};

// Structural invariants: unique class names, unique field names and method
// signatures per class, declared supers resolvable, inheritance acyclic.
inline void validate_program(const std::vector<ClassDecl>& classes) {
  ClassIndex index(classes);
  for (const ClassDecl& c : classes) {
    std::set<std::string> fields;
    for (const FieldDecl& f : c.fields)
      if (!fields.insert(f.name).second)
        throw Error(ErrorKind::DuplicateMemberError,
                    "field '" + f.name + "' declared twice in class '" + c.name + "'");
    std::set<std::pair<std::string, size_t>> sigs;
    for (const MethodDecl& m : c.methods)
      if (!sigs.insert({m.name, m.params.size()}).second)
        throw Error(ErrorKind::DuplicateMemberError,
                    "method '" + m.name + "/" + std::to_string(m.params.size()) +
                        "' declared twice in class '" + c.name + "'");
    index.chain(c.name);  // resolves supers, rejects cycles
  }
}

// Canonical member order: classes by name, fields by name, methods by
// (name, arity). Composition results are compared and printed in this form.
inline std::vector<ClassDecl> canonicalize(std::vector<ClassDecl> classes) {
  std::sort(classes.begin(), classes.end(),
            [](const ClassDecl& a, const ClassDecl& b) { return a.name < b.name; });
  for (ClassDecl& c : classes) {
    std::sort(c.fields.begin(), c.fields.end(),
              [](const FieldDecl& a, const FieldDecl& b) { return a.name < b.name; });
    std::sort(c.methods.begin(), c.methods.end(), [](const MethodDecl& a, const MethodDecl& b) {
      return a.name != b.name ? a.name < b.name : a.params.size() < b.params.size();
    });
  }
  return classes;
}

}  // namespace crx::minj
