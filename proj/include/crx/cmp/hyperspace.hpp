#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "crx/cmp/specs.hpp"
#include "crx/error.hpp"
#include "crx/minj/ast.hpp"

namespace crx::cmp {

// Unit tree per hyperslice: the slice root holds type units (declaration,
// fields, per-class realizations) and slice-level operation units (the
// distinct method signatures the slice provides).

struct OperationUnit {
  std::string name;
  size_t arity = 0;
};

struct SliceType {
  std::string name;
  std::optional<std::string> super;
  std::vector<minj::FieldDecl> fields;
  std::vector<minj::MethodDecl> realizations;
};

struct Hyperslice {
  std::string name;
  std::vector<SliceType> types;
  std::vector<OperationUnit> operations;
};

struct Hyperspace {
  std::string name;
  std::vector<Hyperslice> slices;
};

inline bool module_in_slice(const std::string& module, const std::string& prefix) {
  if (module == prefix) return true;
  return module.size() > prefix.size() + 1 && module.compare(0, prefix.size(), prefix) == 0 &&
         module[prefix.size()] == '.';
}

// Partition classes into hyperslices by their module tags. Every class must
// fall under exactly one declared slice prefix and no declared slice may
// end up empty.
inline Hyperspace build_hyperspace(const std::vector<std::pair<std::string, minj::ClassDecl>>& classes,
                                   const HyperspaceSpec& spec) {
  for (size_t i = 0; i < spec.slices.size(); ++i) {
    for (size_t j = i + 1; j < spec.slices.size(); ++j) {
      const std::string& a = spec.slices[i].prefix;
      const std::string& b = spec.slices[j].prefix;
      if (module_in_slice(a, b) || module_in_slice(b, a))
        throw Error(ErrorKind::MechanismError,
                    "slice prefixes '" + a + "' and '" + b + "' overlap");
      if (spec.slices[i].slice == spec.slices[j].slice)
        throw Error(ErrorKind::MechanismError,
                    "hyperslice '" + spec.slices[i].slice + "' declared twice");
    }
  }

  Hyperspace space;
  space.name = spec.name;
  for (const SliceMapping& m : spec.slices) space.slices.push_back(Hyperslice{m.slice, {}, {}});

  for (const auto& [module, cls] : classes) {
    Hyperslice* slice = nullptr;
    for (size_t i = 0; i < spec.slices.size(); ++i) {
      if (module_in_slice(module, spec.slices[i].prefix)) {
        slice = &space.slices[i];
        break;
      }
    }
    if (!slice)
      throw Error(ErrorKind::UnmappedClassError,
                  "class '" + cls.name + "' in module '" + module +
                      "' matches no hyperslice prefix");
    for (const SliceType& t : slice->types)
      if (t.name == cls.name)
        throw Error(ErrorKind::DuplicateClassError,
                    "class '" + cls.name + "' appears twice in hyperslice '" + slice->name + "'");
    slice->types.push_back(SliceType{cls.name, cls.super_name, cls.fields, cls.methods});
    for (const minj::MethodDecl& m : cls.methods) {
      bool known = false;
      for (const OperationUnit& op : slice->operations)
        if (op.name == m.name && op.arity == m.params.size()) known = true;
      if (!known) slice->operations.push_back(OperationUnit{m.name, m.params.size()});
    }
  }

  for (const Hyperslice& s : space.slices)
    if (s.types.empty())
      throw Error(ErrorKind::EmptySliceError, "hyperslice '" + s.name + "' has no units");
  return space;
}

}  // namespace crx::cmp
