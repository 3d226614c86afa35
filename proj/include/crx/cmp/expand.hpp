#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crx/cmp/clause.hpp"
#include "crx/cmp/hyperspace.hpp"
#include "crx/error.hpp"

namespace crx::cmp {

// mergeByName expansion: units with the same name (and kind) across the
// listed hyperslices collapse into one equivalent clause; units present in
// a single slice become identity clauses. The clause list is canonical:
// operations, then classes with their fields, then mappings, each sorted.
inline std::vector<CompositionClause> expand(const Hyperspace& space,
                                             const HypermoduleSpec& spec) {
  if (spec.relationship != "mergeByName")
    throw Error(ErrorKind::MechanismError,
                "unsupported relationship '" + spec.relationship + "'");

  std::vector<const Hyperslice*> slices;
  for (const std::string& name : spec.hyperslices) {
    const Hyperslice* found = nullptr;
    for (const Hyperslice& s : space.slices)
      if (s.name == name) found = &s;
    if (!found)
      throw Error(ErrorKind::UnresolvedUnitError,
                  "hyperslice '" + name + "' not found in hyperspace '" + space.name + "'");
    slices.push_back(found);
  }

  // operation units keyed by signature; "__" is reserved for the hidden
  // realization methods the weave synthesizes
  std::map<std::pair<std::string, size_t>, std::vector<std::string>> operations;
  for (const Hyperslice* s : slices) {
    for (const OperationUnit& op : s->operations) {
      if (op.name.find("__") != std::string::npos)
        throw Error(ErrorKind::MechanismError,
                    "operation name '" + op.name + "' uses the reserved marker '__'");
      operations[{op.name, op.arity}].push_back(s->name + "." + op.name);
    }
  }

  // class units keyed by name
  std::map<std::string, std::vector<std::pair<const Hyperslice*, const SliceType*>>> classes;
  for (const Hyperslice* s : slices)
    for (const SliceType& t : s->types) classes[t.name].push_back({s, &t});

  std::vector<CompositionClause> out;

  for (const auto& [sig, sources] : operations) {
    CompositionClause c;
    c.kind = ClauseKind::Operation;
    c.name = sig.first;
    c.arity = sig.second;
    c.combinator = sources.size() > 1 ? Combinator::Equivalent : Combinator::Identity;
    c.sources = sources;
    out.push_back(std::move(c));
  }

  for (const auto& [name, parts] : classes) {
    // kind coherence across the merged member set: a name may not be a
    // field in one source and a method in another
    std::set<std::string> field_names, method_names;
    for (const auto& [slice, type] : parts) {
      for (const minj::FieldDecl& f : type->fields) field_names.insert(f.name);
      for (const minj::MethodDecl& m : type->realizations) method_names.insert(m.name);
    }
    for (const std::string& f : field_names)
      if (method_names.count(f))
        throw Error(ErrorKind::KindConflictError,
                    "'" + name + "." + f + "' is a field in one hyperslice and a method in another");

    CompositionClause cls;
    cls.kind = ClauseKind::Class;
    cls.name = name;
    cls.combinator = parts.size() > 1 ? Combinator::Equivalent : Combinator::Identity;
    for (const auto& [slice, type] : parts) cls.sources.push_back(slice->name + "." + name);
    out.push_back(std::move(cls));

    // field units keyed by name within the merged class
    std::map<std::string, std::vector<std::pair<std::string, const minj::FieldDecl*>>> fields;
    for (const auto& [slice, type] : parts)
      for (const minj::FieldDecl& f : type->fields)
        fields[f.name].push_back({slice->name, &f});
    for (const auto& [fname, decls] : fields) {
      for (size_t i = 1; i < decls.size(); ++i)
        if (decls[i].second->type_name != decls[0].second->type_name)
          throw Error(ErrorKind::FieldTypeConflictError,
                      "field '" + name + "." + fname + "' declared as '" +
                          decls[0].second->type_name + "' and '" + decls[i].second->type_name +
                          "'");
      CompositionClause fc;
      fc.kind = ClauseKind::Field;
      fc.name = fname;
      fc.owner = name;
      fc.combinator = decls.size() > 1 ? Combinator::Equivalent : Combinator::Identity;
      for (const auto& [slice, decl] : decls) fc.sources.push_back(slice + "." + name + "." + fname);
      out.push_back(std::move(fc));
    }
  }

  // mapping: operation x class -> realizations in slice order
  for (const auto& [sig, op_sources] : operations) {
    std::map<std::string, std::vector<std::string>> per_class;
    for (const Hyperslice* s : slices)
      for (const SliceType& t : s->types)
        for (const minj::MethodDecl& m : t.realizations)
          if (m.name == sig.first && m.params.size() == sig.second)
            per_class[t.name].push_back(s->name + "." + sig.first + "." + t.name);
    for (const auto& [cls, sources] : per_class) {
      CompositionClause mc;
      mc.kind = ClauseKind::Mapping;
      mc.name = sig.first;
      mc.arity = sig.second;
      mc.owner = cls;
      mc.call = sources.size() > 1 ? CallActionKind::Sequence : CallActionKind::Simple;
      mc.sources = sources;
      out.push_back(std::move(mc));
    }
  }

  return out;
}

// Canonical clause text, one hypermodule block.
inline std::string render_clauses(const std::string& hypermodule,
                                  const std::vector<CompositionClause>& clauses) {
  std::ostringstream out;
  out << "hypermodule " << hypermodule << "\n";
  out << "operations\n";
  for (const CompositionClause& c : clauses)
    if (c.kind == ClauseKind::Operation)
      out << "    " << c.name << ": " << combinator_name(c.combinator) << " (signatures "
          << sources_text(c.sources) << ")\n";
  out << "classes\n";
  for (const CompositionClause& c : clauses) {
    if (c.kind == ClauseKind::Class) {
      out << "    class " << c.name << ": " << combinator_name(c.combinator) << " (types "
          << sources_text(c.sources) << ")\n";
      bool header = false;
      for (const CompositionClause& f : clauses) {
        if (f.kind != ClauseKind::Field || f.owner != c.name) continue;
        if (!header) {
          out << "        instance variables:\n";
          header = true;
        }
        out << "            " << f.name << ": " << combinator_name(f.combinator) << " (types "
            << sources_text(f.sources) << ")\n";
      }
    }
  }
  out << "mapping\n";
  for (const CompositionClause& c : clauses) {
    if (c.kind != ClauseKind::Mapping) continue;
    out << "    " << c.name << ": class " << c.owner << "\n";
    if (c.call == CallActionKind::Sequence) {
      out << "        CallAction: Sequence\n";
      for (const std::string& s : c.sources) out << "            " << s << "\n";
    } else {
      out << "        CallAction: Simple " << c.sources.front() << "\n";
    }
  }
  out << "end hypermodule\n";
  return out.str();
}

}  // namespace crx::cmp
