#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crx/cmp/expand.hpp"
#include "crx/cmp/hyperspace.hpp"
#include "crx/kernel/composed.hpp"
#include "crx/kernel/concern.hpp"
#include "crx/kernel/plan.hpp"
#include "crx/kernel/process.hpp"
#include "crx/minj/wellformed.hpp"

namespace crx::cmp {

inline std::string source_slice(const std::string& path) {
  return path.substr(0, path.find('.'));
}

// Applies one composition clause to the concern elements it matched and
// yields the composed payloads. Pure: the same clause and the same matched
// elements always produce the same payloads, which is what makes composed
// elements re-checkable from their provenance records alone.
inline std::vector<ComposedPayload> apply_clause(
    const CompositionClause& clause, const std::vector<ConcernElement>& matched) {

  switch (clause.kind) {
    case ClauseKind::Operation:
      return {CmpOperationUnit{clause.name, clause.arity}};

    case ClauseKind::Class: {
      std::set<std::string> supers;
      for (const ConcernElement& e : matched) {
        const auto* t = std::get_if<TypeElem>(&e.payload);
        if (!t || t->name != clause.name)
          throw Error(ErrorKind::UnresolvedUnitError,
                      "class clause '" + clause.name + "' matched a non-type element");
        if (t->super) supers.insert(*t->super);
      }
      if (supers.size() > 1) {
        std::string list;
        for (const std::string& s : supers) list += (list.empty() ? "" : ", ") + s;
        throw Error(ErrorKind::MechanismError,
                    "class '" + clause.name + "' has conflicting superclasses: " + list);
      }
      std::optional<std::string> super;
      if (!supers.empty()) super = *supers.begin();
      return {CmpClassUnit{clause.name, super}};
    }

    case ClauseKind::Field: {
      for (const ConcernElement& e : matched) {
        const auto* t = std::get_if<TypeElem>(&e.payload);
        if (!t) continue;
        for (const minj::FieldDecl& f : t->fields)
          if (f.name == clause.name)
            return {CmpFieldUnit{clause.owner, f}};
      }
      throw Error(ErrorKind::UnresolvedUnitError,
                  "field clause '" + clause.owner + "." + clause.name + "' has no declaration");
    }

    case ClauseKind::Mapping: {
      std::vector<const minj::MethodDecl*> bodies;
      for (const ConcernElement& e : matched) {
        const auto* m = std::get_if<MethodElem>(&e.payload);
        if (!m || m->class_name != clause.owner || m->method.name != clause.name ||
            m->method.params.size() != clause.arity)
          throw Error(ErrorKind::UnresolvedUnitError,
                      "mapping clause '" + clause.owner + "." + clause.name +
                          "' matched a foreign element");
        bodies.push_back(&m->method);
      }
      if (bodies.empty())
        throw Error(ErrorKind::UnresolvedUnitError,
                    "mapping clause '" + clause.owner + "." + clause.name + "' matched nothing");

      if (clause.call != CallActionKind::Sequence)
        return {CmpMethodUnit{clause.owner, *bodies.front()}};

      // Sequence: each realization lands as a hidden method named after its
      // hyperslice, and a fresh dispatcher runs them in clause order. The
      // dispatcher's value is the last realization's value.
      std::vector<ComposedPayload> out;
      std::vector<std::string> hidden;
      for (size_t i = 0; i < clause.sources.size(); ++i) {
        std::string name = clause.name + "__" + source_slice(clause.sources[i]);
        hidden.push_back(name);
        minj::MethodDecl real{name, bodies[i]->params, bodies[i]->body};
        out.push_back(CmpMethodUnit{clause.owner, std::move(real)});
      }

      std::vector<std::string> params;
      for (size_t i = 0; i < clause.arity; ++i) params.push_back("p" + std::to_string(i));
      std::vector<minj::ExprPtr> steps;
      for (const std::string& name : hidden) {
        std::vector<minj::ExprPtr> args;
        for (const std::string& p : params) args.push_back(minj::make_expr(minj::Var{p}));
        steps.push_back(minj::make_expr(minj::Call{minj::make_expr(minj::This{}), name, args}));
      }
      minj::ExprPtr body =
          steps.size() == 1 ? steps.front() : minj::make_expr(minj::Seq{std::move(steps)});
      out.push_back(CmpMethodUnit{clause.owner, minj::MethodDecl{clause.name, params, body}});
      return out;
    }
  }
  throw Error(ErrorKind::MechanismError, "unknown clause kind");
}

inline std::string payload_id(const ComposedPayload& p) {
  if (const auto* c = std::get_if<CmpClassUnit>(&p)) return "x/class/" + c->name;
  if (const auto* f = std::get_if<CmpFieldUnit>(&p))
    return "x/field/" + f->class_name + "." + f->field.name;
  if (const auto* o = std::get_if<CmpOperationUnit>(&p))
    return "x/op/" + o->name + "/" + std::to_string(o->arity);
  if (const auto* m = std::get_if<CmpMethodUnit>(&p))
    return "x/method/" + m->class_name + "." + m->method.name + "/" +
           std::to_string(m->method.params.size());
  throw Error(ErrorKind::MechanismError, "unexpected payload in hypermodule");
}

// Nonreactive merge-by-name weaving. One pass over C partitions the concern
// elements into hyperslices, the plan's hypermodule rule picks which slices
// take part, and every expanded clause is applied and committed with the
// elements it consumed. Never looks at X.
class CmpProcess final : public NonreactiveProcess {
 public:
  explicit CmpProcess(HyperspaceSpec hs) : hs_(std::move(hs)) {}

  std::string_view name() const override { return "compositor"; }

  const std::vector<CompositionClause>& clauses() const { return clauses_; }
  const std::string& hypermodule_name() const { return hm_name_; }

  void weave(ConcernView& concerns, PlanView& plan, ComposedSink& out,
             StepBudget& budget) override {
    std::vector<ConcernElement> elems;
    for (size_t i = 0; i < concerns.size(); ++i) elems.push_back(concerns.at(i));

    std::optional<HypermoduleSpec> hm;
    for (size_t i = 0; i < plan.size(); ++i) {
      const IntegrationRule rule = plan.at(i);
      if (const auto* merge = std::get_if<MergeRule>(&rule)) {
        if (hm)
          throw Error(ErrorKind::MechanismError, "plan declares more than one hypermodule");
        hm = merge->spec;
      }
    }
    if (!hm) throw Error(ErrorKind::MechanismError, "plan declares no hypermodule");
    hm_name_ = hm->name;

    // group by module in first-appearance order, then rebuild the classes
    std::vector<std::string> modules;
    std::map<std::string, std::vector<const ConcernElement*>> by_module;
    for (const ConcernElement& e : elems) {
      if (!by_module.count(e.module)) modules.push_back(e.module);
      by_module[e.module].push_back(&e);
    }

    std::vector<std::pair<std::string, minj::ClassDecl>> classes;
    for (const std::string& m : modules)
      for (minj::ClassDecl& c : assemble_classes(by_module[m]))
        classes.push_back({m, std::move(c)});

    Hyperspace space = build_hyperspace(classes, hs_);

    std::map<std::string, std::vector<ConcernElement>> by_slice;
    for (const ConcernElement& e : elems) {
      for (const SliceMapping& sm : hs_.slices) {
        if (module_in_slice(e.module, sm.prefix)) {
          by_slice[sm.slice].push_back(e);
          break;
        }
      }
    }

    clauses_ = expand(space, *hm);

    for (const CompositionClause& clause : clauses_) {
      budget.tick();
      std::vector<ConcernElement> matched = match_clause(clause, by_slice);
      for (ComposedPayload& payload : apply_clause(clause, matched)) {
        ComposedElement elem;
        elem.id = payload_id(payload);
        elem.payload = std::move(payload);
        elem.provenance = Provenance{clause, matched};
        out.commit(std::move(elem));
      }
    }
  }

 private:
  static std::vector<ConcernElement> match_clause(
      const CompositionClause& clause,
      const std::map<std::string, std::vector<ConcernElement>>& by_slice) {
    std::vector<ConcernElement> matched;
    for (const std::string& path : clause.sources) {
      std::string slice = source_slice(path);
      auto it = by_slice.find(slice);
      if (it == by_slice.end())
        throw Error(ErrorKind::UnresolvedUnitError, "no elements in hyperslice '" + slice + "'");
      bool found = false;
      for (const ConcernElement& e : it->second) {
        if (clause.kind == ClauseKind::Class || clause.kind == ClauseKind::Field) {
          const auto* t = std::get_if<TypeElem>(&e.payload);
          std::string want = clause.kind == ClauseKind::Class ? clause.name : clause.owner;
          if (!t || t->name != want) continue;
          if (clause.kind == ClauseKind::Field) {
            bool has = false;
            for (const minj::FieldDecl& f : t->fields) has = has || f.name == clause.name;
            if (!has) continue;
          }
          matched.push_back(e);
          found = true;
        } else if (clause.kind == ClauseKind::Mapping) {
          const auto* m = std::get_if<MethodElem>(&e.payload);
          if (!m || m->class_name != clause.owner || m->method.name != clause.name ||
              m->method.params.size() != clause.arity)
            continue;
          matched.push_back(e);
          found = true;
        } else {
          const auto* m = std::get_if<MethodElem>(&e.payload);
          if (!m || m->method.name != clause.name || m->method.params.size() != clause.arity)
            continue;
          matched.push_back(e);
          found = true;
        }
      }
      if (!found)
        throw Error(ErrorKind::UnresolvedUnitError,
                    "source '" + path + "' resolved to no concern element");
    }
    return matched;
  }

  HyperspaceSpec hs_;
  std::vector<CompositionClause> clauses_;
  std::string hm_name_;
};

// Rebuilds a plain program from the committed hypermodule units.
inline std::vector<minj::ClassDecl> assemble_hypermodule(
    const std::vector<ComposedElement>& elements) {
  std::vector<minj::ClassDecl> classes;
  auto find = [&](const std::string& name) -> minj::ClassDecl* {
    for (minj::ClassDecl& c : classes)
      if (c.name == name) return &c;
    return nullptr;
  };
  for (const ComposedElement& e : elements) {
    if (const auto* c = std::get_if<CmpClassUnit>(&e.payload)) {
      if (find(c->name))
        throw Error(ErrorKind::DuplicateClassError, "class '" + c->name + "' committed twice");
      minj::ClassDecl decl;
      decl.name = c->name;
      decl.super_name = c->super;
      classes.push_back(std::move(decl));
    } else if (const auto* f = std::get_if<CmpFieldUnit>(&e.payload)) {
      minj::ClassDecl* owner = find(f->class_name);
      if (!owner)
        throw Error(ErrorKind::UnresolvedUnitError,
                    "field unit '" + f->class_name + "." + f->field.name + "' has no class unit");
      owner->fields.push_back(f->field);
    } else if (const auto* m = std::get_if<CmpMethodUnit>(&e.payload)) {
      minj::ClassDecl* owner = find(m->class_name);
      if (!owner)
        throw Error(ErrorKind::UnresolvedUnitError,
                    "method unit '" + m->class_name + "." + m->method.name + "' has no class unit");
      owner->methods.push_back(m->method);
    }
  }
  return classes;
}

struct CmpResult {
  std::vector<minj::ClassDecl> classes;
  std::vector<CompositionClause> clauses;
  std::string hypermodule;
  WeaveOutput output;
};

inline CmpResult weave_cmp(const ConcernProgram& program, const WeavingPlan& plan,
                           const HyperspaceSpec& hs, StepBudget& budget) {
  CmpProcess proc(hs);
  WeaveOutput out = run_weaving(proc, program, plan, budget);
  CmpResult result;
  result.classes = assemble_hypermodule(out.elements);
  result.clauses = proc.clauses();
  result.hypermodule = proc.hypermodule_name();
  result.output = std::move(out);
  minj::validate_program(result.classes);
  return result;
}

}  // namespace crx::cmp
