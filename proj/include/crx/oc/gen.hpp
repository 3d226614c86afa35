#pragma once

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crx/kernel/concern.hpp"
#include "crx/kernel/plan.hpp"
#include "crx/minj/ast.hpp"
#include "crx/oc/effect.hpp"

namespace crx::oc {

struct GenCase {
  ConcernProgram program;
  WeavingPlan plan;
};

// Random but always-valid open-class input: up to 5 classes of up to 4
// members, one aspect, up to 3 effects. Superclass edges (base and
// introduced) only ever point at earlier classes, so the hierarchy stays
// acyclic; introduced member names are globally fresh, so nothing collides.
inline GenCase gen_duality_case(std::mt19937& rng) {
  auto pick = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  static const std::vector<std::string> pool = {"A", "B", "C", "D", "E"};
  const int nclasses = pick(1, 5);

  std::vector<minj::ClassDecl> classes;
  for (int i = 0; i < nclasses; ++i) {
    minj::ClassDecl cls;
    cls.name = pool[static_cast<size_t>(i)];
    if (i > 0 && pick(0, 1) == 1) cls.super_name = pool[static_cast<size_t>(pick(0, i - 1))];
    const int nfields = pick(0, 2);
    for (int f = 0; f < nfields; ++f)
      cls.fields.push_back(minj::FieldDecl{"Val", "f" + std::to_string(f)});
    const int nmethods = pick(0, 4 - nfields);
    for (int m = 0; m < nmethods; ++m) {
      minj::MethodDecl decl;
      decl.name = "m" + std::to_string(m);
      const int nparams = pick(0, 2);
      for (int p = 0; p < nparams; ++p) decl.params.push_back(std::string(1, char('a' + p)));
      if (nfields > 0 && pick(0, 1) == 1)
        decl.body = minj::make_expr(minj::FieldGet{
            minj::make_expr(minj::This{}), "f" + std::to_string(pick(0, nfields - 1))});
      else
        decl.body = minj::make_expr(minj::IntLit{pick(0, 9)});
      cls.methods.push_back(std::move(decl));
    }
    classes.push_back(std::move(cls));
  }

  GenCase out;
  decompose_classes("base", classes, out.program);
  minj::ClassDecl aspect_class;
  aspect_class.name = "Gen";
  decompose_classes("Gen", {aspect_class}, out.program);

  // Targets include the aspect's own class, which sits after every base
  // class for superclass purposes.
  std::vector<std::string> targets;
  for (const minj::ClassDecl& c : classes) targets.push_back(c.name);
  targets.push_back("Gen");

  std::set<std::string> reparented;
  int fresh = 0;
  const int neffects = pick(0, 3);
  for (int k = 0; k < neffects; ++k) {
    const int ti = pick(0, static_cast<int>(targets.size()) - 1);
    const std::string& target = targets[static_cast<size_t>(ti)];
    Effect effect;
    switch (pick(0, 2)) {
      case 0:
        effect = FieldIntro{target, minj::FieldDecl{"Val", "gf" + std::to_string(fresh++)}};
        break;
      case 1: {
        minj::MethodDecl m;
        m.name = "gm" + std::to_string(fresh++);
        const int nparams = pick(0, 2);
        for (int p = 0; p < nparams; ++p) m.params.push_back(std::string(1, char('a' + p)));
        m.body = minj::make_expr(minj::IntLit{pick(0, 9)});
        effect = MethodIntro{target, std::move(m)};
        break;
      }
      default: {
        if (ti == 0 || reparented.count(target)) {
          effect = FieldIntro{target, minj::FieldDecl{"Val", "gf" + std::to_string(fresh++)}};
          break;
        }
        reparented.insert(target);
        effect = SuperTypeDecl{target, targets[static_cast<size_t>(pick(0, ti - 1))]};
        break;
      }
    }
    const std::string id = "Gen/effect/" + std::to_string(k);
    out.program.elements.push_back(ConcernElement{id, "Gen", EffectElem{id, effect}});
    out.plan.rules.push_back(EffectBindingRule{target_of(effect), id});
  }
  return out;
}

}  // namespace crx::oc
