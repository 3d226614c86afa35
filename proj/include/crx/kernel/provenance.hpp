#pragma once

#include <string>
#include <variant>
#include <vector>

#include "crx/cmp/weave.hpp"
#include "crx/kernel/composed.hpp"
#include "crx/oc/weave.hpp"

namespace crx {

struct ProvenanceReport {
  size_t checked = 0;
  size_t skipped = 0;  // dynamic computation records, ephemeral by design
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Every payload the provenance record can legitimately produce. A committed
// element passes the check when its payload is among them.
inline std::vector<ComposedPayload> recompute_payloads(const Provenance& prov) {
  std::vector<ComposedPayload> out;

  if (const auto* clause = std::get_if<cmp::CompositionClause>(&prov.rule))
    return cmp::apply_clause(*clause, prov.matched);

  if (std::holds_alternative<OcBaseRule>(prov.rule)) {
    if (prov.matched.empty()) {
      out.push_back(OcNode{OcNodeKind::Root, "", "", {}, {}, {}});
      return out;
    }
    for (const ConcernElement& e : prov.matched) {
      if (const auto* t = std::get_if<TypeElem>(&e.payload)) {
        out.push_back(OcNode{OcNodeKind::TypeName, t->name, t->name, {}, {}, {}});
        out.push_back(OcNode{OcNodeKind::TypeDecl, t->name + ".decl", t->name, t->super, {}, {}});
        for (const minj::FieldDecl& f : t->fields)
          out.push_back(OcNode{OcNodeKind::TypeMember, t->name + "." + f.name, t->name, {}, f, {}});
      } else if (const auto* m = std::get_if<MethodElem>(&e.payload)) {
        out.push_back(OcNode{OcNodeKind::TypeMember,
                             m->class_name + "." + m->method.name + "/" +
                                 std::to_string(m->method.params.size()),
                             m->class_name, {}, {}, m->method});
      }
    }
    return out;
  }

  if (const auto* app = std::get_if<OcApplication>(&prov.rule)) {
    const TypeElem* type = nullptr;
    std::vector<const MethodElem*> methods;
    std::vector<const EffectElem*> effects;
    for (const ConcernElement& e : prov.matched) {
      if (const auto* t = std::get_if<TypeElem>(&e.payload)) {
        if (!type) type = t;
      } else if (const auto* m = std::get_if<MethodElem>(&e.payload)) {
        methods.push_back(m);
      } else if (const auto* f = std::get_if<EffectElem>(&e.payload)) {
        effects.push_back(f);
      }
    }

    // the effects the rule names, in rule order; absent ones void the
    // whole-type candidate but not the per-member ones
    std::vector<oc::Effect> ordered;
    bool complete = true;
    for (const std::string& ref : app->effect_refs) {
      const EffectElem* found = nullptr;
      for (const EffectElem* f : effects)
        if (f->id == ref) found = f;
      if (!found)
        complete = false;
      else
        ordered.push_back(found->effect);
    }

    if (type && complete) {
      minj::ClassDecl base{type->name, type->super, type->fields, {}};
      for (const MethodElem* m : methods) base.methods.push_back(m->method);
      out.push_back(OcTypeUnit{oc::apply_effects(std::move(base), ordered)});
    }
    if (type) {
      std::optional<std::string> super = type->super;
      for (const oc::Effect& e : ordered)
        if (const auto* s = std::get_if<oc::SuperTypeDecl>(&e)) super = s->super;
      out.push_back(
          OcNode{OcNodeKind::TypeDecl, app->target + ".decl", app->target, super, {}, {}});
    }
    for (const EffectElem* f : effects) {
      if (const auto* fi = std::get_if<oc::FieldIntro>(&f->effect)) {
        out.push_back(OcNode{OcNodeKind::TypeMember, app->target + "." + fi->field.name,
                             app->target, {}, fi->field, {}});
      } else if (const auto* mi = std::get_if<oc::MethodIntro>(&f->effect)) {
        out.push_back(OcNode{OcNodeKind::TypeMember,
                             app->target + "." + mi->method.name + "/" +
                                 std::to_string(mi->method.params.size()),
                             app->target, {}, {}, mi->method});
      }
    }
    return out;
  }

  return out;  // dynamic records are not recomputable
}

// Re-derive every element from its own provenance and compare. Dynamic
// computation records are identified by their rule kind and skipped; they
// reference computations by id, which exist only during the run.
inline ProvenanceReport check_provenance(const std::vector<ComposedElement>& elements) {
  ProvenanceReport rep;
  for (const ComposedElement& e : elements) {
    if (std::holds_alternative<PaApplication>(e.provenance.rule)) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    std::vector<ComposedPayload> candidates;
    try {
      candidates = recompute_payloads(e.provenance);
    } catch (const Error&) {
      candidates.clear();
    }
    bool found = false;
    for (const ComposedPayload& c : candidates)
      if (equal(c, e.payload)) found = true;
    if (!found) rep.mismatches.push_back(e.id);
  }
  return rep;
}

}  // namespace crx
