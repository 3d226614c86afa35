#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crx/cmp/specs.hpp"
#include "crx/frontend/aspect.hpp"
#include "crx/kernel/concern.hpp"
#include "crx/kernel/plan.hpp"
#include "crx/minj/parser.hpp"

namespace crx::frontend {

enum class Mechanism { Cmp, Pa, Oc };

struct SourceFile {
  std::string path;
  std::string text;
};

// The CLI slurps files and sorts them by extension; everything below works
// on text so tests can feed sources directly.
struct Inputs {
  std::vector<SourceFile> programs;        // .mj
  std::vector<SourceFile> aspects;         // .asp
  std::vector<SourceFile> rules;           // .rules
  std::optional<SourceFile> hyperspace;    // .hs
  std::optional<SourceFile> hypermodule;   // .hm
};

// hyperspace <ID>
// slice <module-prefix> : <SliceName>   (one per line, to end of file)
inline cmp::HyperspaceSpec parse_hyperspace_file(std::string_view src, const std::string& file) {
  minj::Cursor cur(minj::Lexer(src, file).run(), file);
  minj::Parser parser(cur);
  cmp::HyperspaceSpec spec;
  cur.expect_word("hyperspace");
  spec.name = cur.expect_ident("hyperspace name");
  while (!cur.at(minj::Tok::End)) {
    cur.expect_word("slice");
    cmp::SliceMapping m;
    m.prefix = parser.parse_dotted_name();
    cur.expect(minj::Tok::Colon, "':'");
    m.slice = cur.expect_ident("slice name");
    spec.slices.push_back(std::move(m));
  }
  return spec;
}

// hypermodule <ID>
// hyperslices: A, B;
// relationships: mergeByName;
inline cmp::HypermoduleSpec parse_hypermodule_file(std::string_view src, const std::string& file) {
  minj::Cursor cur(minj::Lexer(src, file).run(), file);
  cmp::HypermoduleSpec spec;
  cur.expect_word("hypermodule");
  spec.name = cur.expect_ident("hypermodule name");
  cur.expect_word("hyperslices");
  cur.expect(minj::Tok::Colon, "':'");
  spec.hyperslices.push_back(cur.expect_ident("slice name"));
  while (cur.accept(minj::Tok::Comma)) spec.hyperslices.push_back(cur.expect_ident("slice name"));
  cur.expect(minj::Tok::Semi, "';' after hyperslices");
  cur.expect_word("relationships");
  cur.expect(minj::Tok::Colon, "':'");
  spec.relationship = cur.expect_ident("relationship name");
  cur.expect(minj::Tok::Semi, "';' after relationships");
  cur.expect(minj::Tok::End, "end of hypermodule file");
  return spec;
}

struct ReadResult {
  ConcernProgram program;
  WeavingPlan plan;
  std::optional<cmp::HyperspaceSpec> hyperspace;
};

namespace detail {

// Classes grouped per module, modules in first-appearance order. A file
// without a module header lands in "main".
inline std::vector<std::pair<std::string, std::vector<minj::ClassDecl>>> group_modules(
    const std::vector<SourceFile>& files) {
  std::vector<std::pair<std::string, std::vector<minj::ClassDecl>>> modules;
  for (const SourceFile& f : files) {
    minj::Program prog = minj::parse_program(f.text, f.path);
    const std::string module = prog.module.empty() ? "main" : prog.module;
    auto it = std::find_if(modules.begin(), modules.end(),
                           [&](const auto& m) { return m.first == module; });
    if (it == modules.end()) {
      modules.emplace_back(module, std::move(prog.classes));
      continue;
    }
    for (minj::ClassDecl& c : prog.classes) {
      for (const minj::ClassDecl& existing : it->second)
        if (existing.name == c.name)
          throw Error(ErrorKind::DuplicateClassError,
                      "class '" + c.name + "' declared more than once in module '" + module + "'");
      it->second.push_back(std::move(c));
    }
  }
  return modules;
}

inline std::vector<AspectDecl> parse_aspects(const std::vector<SourceFile>& files,
                                             std::map<std::string, pa::PcPtr>& pc_env) {
  std::vector<AspectDecl> aspects;
  for (const SourceFile& f : files)
    for (AspectDecl& a : parse_aspect_file(f.text, f.path, pc_env)) {
      for (const AspectDecl& existing : aspects)
        if (existing.name == a.name)
          throw Error(ErrorKind::DuplicateClassError,
                      "aspect '" + a.name + "' declared more than once");
      aspects.push_back(std::move(a));
    }
  return aspects;
}

}  // namespace detail

// Normalizes any accepted packaging of one mechanism's inputs into the same
// (concern program, plan) pair, so downstream weaving never sees syntax.
inline ReadResult read_inputs(const Inputs& in, Mechanism mech) {
  if (in.programs.empty() && in.aspects.empty() && !in.hyperspace && !in.hypermodule)
    throw Error(ErrorKind::MissingInputError, "no input files");

  ReadResult out;
  const auto modules = detail::group_modules(in.programs);

  if (mech == Mechanism::Cmp) {
    if (!in.aspects.empty() || !in.rules.empty())
      throw Error(ErrorKind::MechanismError, "compositor inputs cannot include aspect or rules files");
    if (!in.hyperspace) throw Error(ErrorKind::MissingInputError, "compositor needs a hyperspace file");
    if (!in.hypermodule) throw Error(ErrorKind::MissingInputError, "compositor needs a hypermodule file");
    for (const auto& [module, classes] : modules)
      decompose_classes(module, classes, out.program);
    out.plan.rules.push_back(
        MergeRule{parse_hypermodule_file(in.hypermodule->text, in.hypermodule->path)});
    out.hyperspace = parse_hyperspace_file(in.hyperspace->text, in.hyperspace->path);
    return out;
  }

  if (in.hyperspace || in.hypermodule)
    throw Error(ErrorKind::MechanismError, "hyperspace and hypermodule files are compositor inputs");

  std::map<std::string, pa::PcPtr> pc_env;
  const std::vector<AspectDecl> aspects = detail::parse_aspects(in.aspects, pc_env);

  for (const auto& [module, classes] : modules)
    decompose_classes(module, classes, out.program);

  if (mech == Mechanism::Pa) {
    // Advice bodies join the concern program; placements and kinds join the
    // plan. Plan order is canonical (kinds first, then placements by advice
    // declaration order), so an inline binding and the equivalent rules-file
    // line produce structurally identical plans.
    struct Placement {
      std::string ref;
      pa::PcPtr pc;
      int decl_order;
    };
    std::map<std::string, std::pair<int, minj::AdviceKind>> declared;
    std::vector<Placement> placements;
    int order = 0;
    for (const AspectDecl& a : aspects)
      for (const AdviceDecl& adv : a.advice) {
        const std::string ref = adv.aspect + "." + adv.id;
        out.program.elements.push_back(ConcernElement{
            adv.aspect + "/advice/" + adv.id, adv.aspect,
            AdviceBodyElem{adv.aspect, adv.id, adv.body}});
        declared[ref] = {order, adv.kind};
        if (adv.inline_pc) placements.push_back(Placement{ref, adv.inline_pc, order});
        ++order;
      }
    for (const SourceFile& f : in.rules)
      for (RuleBinding& b : parse_rules_file(f.text, f.path, pc_env)) {
        auto it = declared.find(b.advice_ref);
        if (it == declared.end())
          throw Error(ErrorKind::UnresolvedAdviceError,
                      "placement names unknown advice '" + b.advice_ref + "'");
        placements.push_back(Placement{b.advice_ref, std::move(b.pc), it->second.first});
      }
    std::stable_sort(placements.begin(), placements.end(),
                     [](const Placement& a, const Placement& b) { return a.decl_order < b.decl_order; });
    for (const auto& [ref, entry] : declared)
      out.plan.rules.push_back(AdviceTypeRule{ref, entry.second});
    for (const Placement& p : placements)
      out.plan.rules.push_back(PointcutRule{p.ref, p.pc, p.decl_order});
    return out;
  }

  // Open classes: aspects contribute their own (empty) type, so effects may
  // target aspect classes, plus one effect element per declaration; the plan
  // binds each effect to its target in declaration order.
  if (in.aspects.empty())
    throw Error(ErrorKind::MissingInputError, "open classes needs at least one aspect file");
  if (!in.rules.empty())
    throw Error(ErrorKind::MechanismError, "rules files bind advice, not open-class effects");
  for (const AspectDecl& a : aspects) {
    minj::ClassDecl aspect_class;
    aspect_class.name = a.name;
    decompose_classes(a.name, {aspect_class}, out.program);
    int k = 0;
    for (const oc::Effect& e : a.effects) {
      const std::string id = a.name + "/effect/" + std::to_string(k++);
      out.program.elements.push_back(ConcernElement{id, a.name, EffectElem{id, e}});
      out.plan.rules.push_back(EffectBindingRule{oc::target_of(e), id});
    }
  }
  return out;
}

}  // namespace crx::frontend
