#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "crx/kernel/process.hpp"
#include "crx/minj/wellformed.hpp"
#include "crx/oc/effect.hpp"

namespace crx::oc {

// Applies effects to one class: super declarations first (several identical
// ones are idempotent, distinct ones are ambiguous), then member intros in
// rule order. Introductions collide only with local members of their own
// kind; overriding an inherited member is ordinary. Pure, so composed types
// can be re-derived from their provenance.
inline minj::ClassDecl apply_effects(minj::ClassDecl base, const std::vector<Effect>& effects) {
  std::set<std::string> parents;
  for (const Effect& e : effects)
    if (const auto* s = std::get_if<SuperTypeDecl>(&e)) parents.insert(s->super);
  if (parents.size() > 1) {
    std::string list;
    for (const std::string& p : parents) list += (list.empty() ? "" : ", ") + p;
    throw Error(ErrorKind::AmbiguousParentError,
                "type '" + base.name + "' is declared to extend " + list);
  }
  if (!parents.empty()) base.super_name = *parents.begin();

  for (const Effect& e : effects) {
    if (const auto* f = std::get_if<FieldIntro>(&e)) {
      for (const minj::FieldDecl& existing : base.fields)
        if (existing.name == f->field.name)
          throw Error(ErrorKind::MemberCollisionError,
                      "field '" + base.name + "." + f->field.name + "' already declared");
      base.fields.push_back(f->field);
    } else if (const auto* m = std::get_if<MethodIntro>(&e)) {
      for (const minj::MethodDecl& existing : base.methods)
        if (existing.name == m->method.name &&
            existing.params.size() == m->method.params.size())
          throw Error(ErrorKind::MemberCollisionError,
                      "method '" + base.name + "." + m->method.name + "/" +
                          std::to_string(m->method.params.size()) + "' already declared");
      base.methods.push_back(m->method);
    }
  }
  return base;
}

struct BoundEffect {
  ConcernElement elem;  // the effect's concern element, kept for provenance
  Effect effect;
  std::string ref;
};

struct TypeRecord {
  ConcernElement type_elem;
  std::vector<ConcernElement> method_elems;  // aligned with base.methods
  minj::ClassDecl base;
  std::vector<BoundEffect> effects;  // binding-rule order
};

struct OcInputs {
  std::vector<TypeRecord> types;  // concern-program order
};

// One counted pass over C and R, shared by both variants: collect the types
// with their methods, pool the effects, then resolve each binding rule.
inline OcInputs read_oc_inputs(ConcernView& concerns, PlanView& plan) {
  OcInputs in;
  std::map<std::string, size_t> type_index;
  std::map<std::string, BoundEffect> pool;

  for (size_t i = 0; i < concerns.size(); ++i) {
    const ConcernElement e = concerns.at(i);
    if (const auto* t = std::get_if<TypeElem>(&e.payload)) {
      TypeRecord rec;
      rec.type_elem = e;
      rec.base = minj::ClassDecl{t->name, t->super, t->fields, {}};
      type_index[t->name] = in.types.size();
      in.types.push_back(std::move(rec));
    } else if (const auto* m = std::get_if<MethodElem>(&e.payload)) {
      auto it = type_index.find(m->class_name);
      if (it == type_index.end())
        throw Error(ErrorKind::MechanismError,
                    "method element for undeclared class '" + m->class_name + "'");
      in.types[it->second].method_elems.push_back(e);
      in.types[it->second].base.methods.push_back(m->method);
    } else if (const auto* f = std::get_if<EffectElem>(&e.payload)) {
      pool[f->id] = BoundEffect{e, f->effect, f->id};
    }
    // advice bodies are irrelevant to open classes and pass through unused
  }

  for (size_t i = 0; i < plan.size(); ++i) {
    const IntegrationRule rule = plan.at(i);
    const auto* binding = std::get_if<EffectBindingRule>(&rule);
    if (!binding)
      throw Error(ErrorKind::MechanismError, "plan rule not applicable to open-class weaving");
    auto target = type_index.find(binding->target);
    if (target == type_index.end())
      throw Error(ErrorKind::UnknownTargetError,
                  "effect target '" + binding->target + "' is not a declared type");
    auto effect = pool.find(binding->effect_ref);
    if (effect == pool.end())
      throw Error(ErrorKind::UnknownTargetError,
                  "effect '" + binding->effect_ref + "' is not declared");
    in.types[target->second].effects.push_back(effect->second);
  }
  return in;
}

// The full transformation as a pure computation, in concern-program order.
// Both variants run it first, so an invalid input fails with the same error
// kind no matter which construction strategy would have hit it first.
inline std::vector<minj::ClassDecl> woven_types(const OcInputs& in) {
  std::vector<minj::ClassDecl> out;
  for (const TypeRecord& t : in.types) {
    std::vector<Effect> effects;
    for (const BoundEffect& b : t.effects) effects.push_back(b.effect);
    out.push_back(apply_effects(t.base, effects));
  }
  minj::validate_program(out);
  return out;
}

// Variant 1: iterate the types of P, transform each, commit the finished
// type. Writes X, never reads it.
class OcNonreactiveProcess final : public NonreactiveProcess {
 public:
  std::string_view name() const override { return "open-classes-nonreactive"; }

  void weave(ConcernView& concerns, PlanView& plan, ComposedSink& out,
             StepBudget& budget) override {
    OcInputs in = read_oc_inputs(concerns, plan);
    std::vector<minj::ClassDecl> woven = woven_types(in);
    for (size_t i = 0; i < in.types.size(); ++i) {
      budget.tick();
      const TypeRecord& t = in.types[i];
      ComposedElement e;
      e.id = "x/type/" + t.base.name;
      e.payload = OcTypeUnit{woven[i]};
      OcApplication app;
      app.target = t.base.name;
      for (const BoundEffect& b : t.effects) app.effect_refs.push_back(b.ref);
      e.provenance.rule = std::move(app);
      e.provenance.matched.push_back(t.type_elem);
      for (const ConcernElement& m : t.method_elems) e.provenance.matched.push_back(m);
      for (const BoundEffect& b : t.effects) e.provenance.matched.push_back(b.elem);
      out.commit(std::move(e));
    }
  }
};

// Variant 2: grow the composed AST node by node. The worklist holds open
// nodes; expanding one means reading it back from X, merging its base
// children from P with the children the effects contribute, and committing
// them. Type members are born closed, everything else closes once its
// children are in.
class OcReactiveProcess final : public ReactiveProcess {
 public:
  std::string_view name() const override { return "open-classes-reactive"; }

  const std::vector<std::string>& lifecycle() const { return lifecycle_; }

  void weave(ConcernView& concerns, PlanView& plan, ComposedStore& out,
             StepBudget& budget) override {
    OcInputs in = read_oc_inputs(concerns, plan);
    woven_types(in);  // error surface shared with the nonreactive variant

    std::map<std::string, const TypeRecord*> by_name;
    for (const TypeRecord& t : in.types) by_name[t.base.name] = &t;

    size_t committed = 0;
    std::deque<size_t> open;
    auto commit_node = [&](OcNode node, Provenance prov, bool opened) {
      std::string label = node.path.empty() ? "root" : node.path;
      ComposedElement e;
      e.id = "x/node/" + label;
      e.payload = std::move(node);
      e.provenance = std::move(prov);
      out.commit(std::move(e));
      size_t idx = committed++;
      if (opened) {
        open.push_back(idx);
        lifecycle_.push_back("open " + label);
      } else {
        lifecycle_.push_back("closed " + label);
      }
    };

    {
      Provenance prov;
      prov.rule = OcBaseRule{};
      commit_node(OcNode{OcNodeKind::Root, "", "", {}, {}, {}}, std::move(prov), true);
    }

    while (!open.empty()) {
      size_t idx = open.front();
      open.pop_front();
      budget.tick();
      const OcNode parent = std::get<OcNode>(out.at(idx).payload);

      if (parent.kind == OcNodeKind::Root) {
        for (const auto& [name, t] : by_name) {
          Provenance prov;
          prov.rule = OcBaseRule{};
          prov.matched = {t->type_elem};
          commit_node(OcNode{OcNodeKind::TypeName, name, name, {}, {}, {}}, std::move(prov), true);
        }
      } else if (parent.kind == OcNodeKind::TypeName) {
        const TypeRecord& t = *by_name.at(parent.type_name);
        std::optional<std::string> super = t.base.super_name;
        std::vector<std::string> super_refs;
        std::vector<ConcernElement> super_elems;
        for (const BoundEffect& b : t.effects) {
          if (const auto* s = std::get_if<SuperTypeDecl>(&b.effect)) {
            super = s->super;
            super_refs.push_back(b.ref);
            super_elems.push_back(b.elem);
          }
        }
        Provenance prov;
        if (super_refs.empty()) {
          prov.rule = OcBaseRule{};
          prov.matched = {t.type_elem};
        } else {
          prov.rule = OcApplication{parent.type_name, super_refs};
          prov.matched.push_back(t.type_elem);
          for (ConcernElement& e : super_elems) prov.matched.push_back(std::move(e));
        }
        commit_node(
            OcNode{OcNodeKind::TypeDecl, parent.type_name + ".decl", parent.type_name, super, {}, {}},
            std::move(prov), true);
      } else if (parent.kind == OcNodeKind::TypeDecl) {
        const TypeRecord& t = *by_name.at(parent.type_name);
        const std::string& type = parent.type_name;
        for (const minj::FieldDecl& f : t.base.fields) {
          Provenance prov;
          prov.rule = OcBaseRule{};
          prov.matched = {t.type_elem};
          commit_node(OcNode{OcNodeKind::TypeMember, type + "." + f.name, type, {}, f, {}},
                      std::move(prov), false);
        }
        for (size_t mi = 0; mi < t.base.methods.size(); ++mi) {
          const minj::MethodDecl& m = t.base.methods[mi];
          Provenance prov;
          prov.rule = OcBaseRule{};
          prov.matched = {t.method_elems[mi]};
          commit_node(
              OcNode{OcNodeKind::TypeMember,
                     type + "." + m.name + "/" + std::to_string(m.params.size()), type, {}, {}, m},
              std::move(prov), false);
        }
        for (const BoundEffect& b : t.effects) {
          Provenance prov;
          prov.rule = OcApplication{type, {b.ref}};
          prov.matched = {b.elem};
          if (const auto* f = std::get_if<FieldIntro>(&b.effect)) {
            commit_node(
                OcNode{OcNodeKind::TypeMember, type + "." + f->field.name, type, {}, f->field, {}},
                std::move(prov), false);
          } else if (const auto* m = std::get_if<MethodIntro>(&b.effect)) {
            commit_node(OcNode{OcNodeKind::TypeMember,
                               type + "." + m->method.name + "/" +
                                   std::to_string(m->method.params.size()),
                               type, {}, {}, m->method},
                        std::move(prov), false);
          }
          // super declarations were consumed at the type-declaration node
        }
      }
      lifecycle_.push_back("close " + (parent.path.empty() ? std::string("root") : parent.path));
    }
  }

 private:
  std::vector<std::string> lifecycle_;
};

// Rebuild class declarations from committed AST nodes.
inline std::vector<minj::ClassDecl> assemble_open_nodes(
    const std::vector<ComposedElement>& elements) {
  std::vector<minj::ClassDecl> classes;
  std::map<std::string, size_t> index;
  for (const ComposedElement& e : elements) {
    const auto* n = std::get_if<OcNode>(&e.payload);
    if (n && n->kind == OcNodeKind::TypeDecl) {
      index[n->type_name] = classes.size();
      classes.push_back(minj::ClassDecl{n->type_name, n->super, {}, {}});
    }
  }
  for (const ComposedElement& e : elements) {
    const auto* n = std::get_if<OcNode>(&e.payload);
    if (!n || n->kind != OcNodeKind::TypeMember) continue;
    auto it = index.find(n->type_name);
    if (it == index.end())
      throw Error(ErrorKind::MechanismError,
                  "member node for unknown type '" + n->type_name + "'");
    if (n->field) classes[it->second].fields.push_back(*n->field);
    if (n->method) classes[it->second].methods.push_back(*n->method);
  }
  return classes;
}

enum class OcVariant { Nonreactive, Reactive };

struct OcResult {
  std::vector<minj::ClassDecl> classes;
  WeaveOutput output;
  std::vector<std::string> lifecycle;  // reactive runs only
};

inline OcResult weave_oc(const ConcernProgram& program, const WeavingPlan& plan,
                         OcVariant variant, StepBudget& budget) {
  if (variant == OcVariant::Nonreactive) {
    OcNonreactiveProcess proc;
    WeaveOutput out = run_weaving(proc, program, plan, budget);
    OcResult result;
    for (const ComposedElement& e : out.elements)
      if (const auto* t = std::get_if<OcTypeUnit>(&e.payload)) result.classes.push_back(t->decl);
    result.output = std::move(out);
    return result;
  }
  OcReactiveProcess proc;
  WeaveOutput out = run_weaving(proc, program, plan, budget);
  OcResult result;
  result.classes = assemble_open_nodes(out.elements);
  result.lifecycle = proc.lifecycle();
  result.output = std::move(out);
  return result;
}

struct DualityReport {
  bool equal = false;
  std::string nonreactive_error;  // error kind name, empty on success
  std::string reactive_error;
  std::string detail;  // first divergence when not equal
};

// Runs both variants on the same input. Success on both sides compares the
// canonicalized programs; failure must be mirrored with the same error kind.
inline DualityReport check_duality(const ConcernProgram& program, const WeavingPlan& plan,
                                   long long step_budget = kDefaultStepBudget) {
  DualityReport rep;
  std::optional<std::vector<minj::ClassDecl>> nonreactive, reactive;
  try {
    StepBudget budget(step_budget);
    nonreactive = weave_oc(program, plan, OcVariant::Nonreactive, budget).classes;
  } catch (const Error& e) {
    rep.nonreactive_error = kind_name(e.kind());
  }
  try {
    StepBudget budget(step_budget);
    reactive = weave_oc(program, plan, OcVariant::Reactive, budget).classes;
  } catch (const Error& e) {
    rep.reactive_error = kind_name(e.kind());
  }

  if (!nonreactive || !reactive) {
    rep.equal = !nonreactive && !reactive && rep.nonreactive_error == rep.reactive_error;
    if (!rep.equal)
      rep.detail = "variants disagree: one failed (" + rep.nonreactive_error + " vs " +
                   rep.reactive_error + ")";
    return rep;
  }

  std::vector<minj::ClassDecl> a = minj::canonicalize(*nonreactive);
  std::vector<minj::ClassDecl> b = minj::canonicalize(*reactive);
  rep.equal = minj::equal(a, b);
  if (!rep.equal) {
    if (a.size() != b.size()) {
      rep.detail = "class counts differ: " + std::to_string(a.size()) + " vs " +
                   std::to_string(b.size());
    } else {
      for (size_t i = 0; i < a.size(); ++i) {
        if (!minj::equal(a[i], b[i])) {
          rep.detail = "first divergence at class '" + a[i].name + "'";
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace crx::oc
