#include <gtest/gtest.h>

#include "support.hpp"

using namespace crx;
using namespace crx::cmp;
using testsupport::Bundle;
using testsupport::classes_of;
using testsupport::demo_path;
using testsupport::golden;
using testsupport::slurp;

namespace {

std::vector<std::pair<std::string, minj::ClassDecl>> tagged(const std::string& module,
                                                            const std::string& src) {
  std::vector<std::pair<std::string, minj::ClassDecl>> out;
  for (minj::ClassDecl& c : classes_of(src)) out.emplace_back(module, std::move(c));
  return out;
}

HyperspaceSpec two_slice_space() {
  return HyperspaceSpec{"S", {{"core", "Core"}, {"ext", "Ext"}}};
}

Hyperspace build_two_slices(const std::string& core_src, const std::string& ext_src) {
  auto units = tagged("core", core_src);
  for (auto& u : tagged("ext", ext_src)) units.push_back(std::move(u));
  return build_hyperspace(units, two_slice_space());
}

Bundle person_bundle() {
  Bundle b;
  b.mj(slurp(demo_path("person/personal.mj")));
  b.mj(slurp(demo_path("person/tax.mj")));
  b.hs(slurp(demo_path("person/person.hs")));
  b.hm(slurp(demo_path("person/person.hm")));
  return b;
}

CmpResult weave_person() {
  auto rr = person_bundle().read(frontend::Mechanism::Cmp);
  StepBudget budget;
  return weave_cmp(rr.program, rr.plan, *rr.hyperspace, budget);
}

}  // namespace

// Merge-by-name worked out by hand over two overlapping slices. The
// expected list is the full canonical clause vector: name-equivalence
// classes across slices, singletons as identity, in sorted emission order.
TEST(Expand, MatchesTheHandMergeOracle) {
  Hyperspace hs = build_two_slices(
      "class P { Int a; m() { 1 } n(x) { x } } class Q { k() { 2 } }",
      "class P { Int a; Str b; m() { 3 } } class R { k() { 4 } }");
  auto clauses = expand(hs, HypermoduleSpec{"HM", {"Core", "Ext"}, "mergeByName"});

  std::vector<CompositionClause> expected = {
      {ClauseKind::Operation, "k", 0, "", Combinator::Equivalent, CallActionKind::None,
       {"Core.k", "Ext.k"}},
      {ClauseKind::Operation, "m", 0, "", Combinator::Equivalent, CallActionKind::None,
       {"Core.m", "Ext.m"}},
      {ClauseKind::Operation, "n", 1, "", Combinator::Identity, CallActionKind::None, {"Core.n"}},
      {ClauseKind::Class, "P", 0, "", Combinator::Equivalent, CallActionKind::None,
       {"Core.P", "Ext.P"}},
      {ClauseKind::Field, "a", 0, "P", Combinator::Equivalent, CallActionKind::None,
       {"Core.P.a", "Ext.P.a"}},
      {ClauseKind::Field, "b", 0, "P", Combinator::Identity, CallActionKind::None, {"Ext.P.b"}},
      {ClauseKind::Class, "Q", 0, "", Combinator::Identity, CallActionKind::None, {"Core.Q"}},
      {ClauseKind::Class, "R", 0, "", Combinator::Identity, CallActionKind::None, {"Ext.R"}},
      {ClauseKind::Mapping, "k", 0, "Q", Combinator::Identity, CallActionKind::Simple,
       {"Core.k.Q"}},
      {ClauseKind::Mapping, "k", 0, "R", Combinator::Identity, CallActionKind::Simple,
       {"Ext.k.R"}},
      {ClauseKind::Mapping, "m", 0, "P", Combinator::Identity, CallActionKind::Sequence,
       {"Core.m.P", "Ext.m.P"}},
      {ClauseKind::Mapping, "n", 1, "P", Combinator::Identity, CallActionKind::Simple,
       {"Core.n.P"}},
  };
  ASSERT_EQ(clauses.size(), expected.size());
  for (size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(clauses[i], expected[i]) << "clause " << i;
}

TEST(Expand, ClauseInvariantsHoldOnEveryInput) {
  Hyperspace hs = build_two_slices(
      "class A { Int x; f() { 1 } g() { 2 } } class B { f() { 3 } }",
      "class A { Int x; f() { 4 } } class C { h(a, b) { a } }");
  auto clauses = expand(hs, HypermoduleSpec{"HM", {"Core", "Ext"}, "mergeByName"});
  for (const CompositionClause& c : clauses) {
    EXPECT_FALSE(c.sources.empty());
    if (c.kind != ClauseKind::Mapping) {
      EXPECT_EQ(c.combinator == Combinator::Equivalent, c.sources.size() > 1);
      EXPECT_EQ(c.call, CallActionKind::None);
    } else {
      EXPECT_EQ(c.call == CallActionKind::Sequence, c.sources.size() > 1);
    }
  }
  // every mapping names an operation clause and a class clause
  for (const CompositionClause& c : clauses) {
    if (c.kind != ClauseKind::Mapping) continue;
    bool has_op = false, has_cls = false;
    for (const CompositionClause& o : clauses) {
      if (o.kind == ClauseKind::Operation && o.name == c.name && o.arity == c.arity) has_op = true;
      if (o.kind == ClauseKind::Class && o.name == c.owner) has_cls = true;
    }
    EXPECT_TRUE(has_op && has_cls) << c.name << "." << c.owner;
  }
}

TEST(Expand, PersonClausesMatchTheGolden) {
  CmpResult r = weave_person();
  EXPECT_EQ(render_clauses(r.hypermodule, r.clauses), golden("person_clauses.txt"));
}

TEST(Expand, ErrorTable) {
  // field in one slice, method in another, same class and name
  try {
    expand(build_two_slices("class P { Int v; }", "class P { v() { 1 } }"),
           HypermoduleSpec{"HM", {"Core", "Ext"}, "mergeByName"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::KindConflictError);
  }

  try {
    expand(build_two_slices("class P { Int v; }", "class P { Str v; }"),
           HypermoduleSpec{"HM", {"Core", "Ext"}, "mergeByName"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FieldTypeConflictError);
  }

  try {
    expand(build_two_slices("class P { }", "class Q { }"),
           HypermoduleSpec{"HM", {"Core", "Ghost"}, "mergeByName"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnresolvedUnitError);
  }

  try {
    expand(build_two_slices("class P { }", "class Q { }"),
           HypermoduleSpec{"HM", {"Core", "Ext"}, "overrideByName"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MechanismError);
  }

  // "__" is reserved for synthesized realization names
  try {
    expand(build_two_slices("class P { m__x() { 1 } }", "class Q { }"),
           HypermoduleSpec{"HM", {"Core", "Ext"}, "mergeByName"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MechanismError);
  }
}

TEST(Hyperspace, InputShapeErrors) {
  // class in a module no slice claims
  try {
    (void)build_hyperspace(tagged("elsewhere", "class P { }"), two_slice_space());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnmappedClassError);
  }

  // slice with no types at all
  try {
    (void)build_hyperspace(tagged("core", "class P { }"), two_slice_space());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySliceError);
  }

  // same class twice within one slice (two modules mapping to it)
  try {
    auto units = tagged("core", "class P { }");
    for (auto& u : tagged("core.more", "class P { } class Q { }")) units.push_back(std::move(u));
    for (auto& u : tagged("ext", "class R { }")) units.push_back(std::move(u));
    (void)build_hyperspace(units, two_slice_space());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateClassError);
  }

  // module prefix matching: "core.more" joins Core, "corex" does not
  auto units = tagged("core.more", "class P { m() { 1 } }");
  for (auto& u : tagged("ext", "class Q { }")) units.push_back(std::move(u));
  Hyperspace hs = build_hyperspace(units, two_slice_space());
  EXPECT_EQ(hs.slices[0].types[0].name, "P");
  try {
    auto bad = tagged("corex", "class P { }");
    for (auto& u : tagged("ext", "class Q { }")) bad.push_back(std::move(u));
    (void)build_hyperspace(bad, two_slice_space());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnmappedClassError);
  }
}

TEST(Weave, PersonProgramMatchesTheGolden) {
  CmpResult r = weave_person();
  EXPECT_EQ(minj::pretty_print(minj::canonicalize(r.classes)), golden("person_woven.txt"));
  EXPECT_EQ(golden("person_audit.txt"), r.output.audit.to_text());
}

TEST(Weave, DispatcherRunsEveryRealizationAndYieldsTheLast) {
  // distinct bodies pin the sequence order and the value of the last one
  auto rr = Bundle{}
                .mj("module core;\nclass R { pick() { \"first\" } }")
                .mj("module ext;\nclass R { pick() { \"second\" } }")
                .hs("hyperspace S\nslice core : Core\nslice ext : Ext")
                .hm("hypermodule HM\nhyperslices: Core, Ext;\nrelationships: mergeByName;")
                .read(frontend::Mechanism::Cmp);
  StepBudget budget;
  CmpResult r = weave_cmp(rr.program, rr.plan, *rr.hyperspace, budget);

  auto run = minj::evaluate(r.classes, minj::parse_entry("R.pick"));
  EXPECT_EQ(render(run.value), "second");

  int realizations = 0;
  for (const auto& e : run.trace)
    if (e.kind == minj::EventKind::MethodExecution && e.detail.find("pick__") != std::string::npos)
      ++realizations;
  EXPECT_EQ(realizations, 2);
}

TEST(Weave, MergedStateIsSharedAcrossRealizations) {
  // Both slices' setName write the same merged field, so a set through one
  // view is seen by the other's getter.
  CmpResult r = weave_person();
  auto classes = r.classes;
  for (minj::ClassDecl& c : classes_of(
           "class Main { go() { this.use(new Person()) } "
           "use(p) { p.setName(\"Bob\"); p.getName() } }"))
    classes.push_back(std::move(c));
  auto run = minj::evaluate(classes, minj::parse_entry("Main.go"));
  EXPECT_EQ(render(run.value), "Bob");

  int get_realizations = 0;
  for (const auto& e : run.trace)
    if (e.kind == minj::EventKind::MethodExecution &&
        e.detail.find("getName__") != std::string::npos)
      ++get_realizations;
  EXPECT_EQ(get_realizations, 2);
}

TEST(Weave, SuperMergeKeepsAgreementRejectsConflict) {
  auto weave_two = [](const std::string& core, const std::string& ext) {
    auto rr = Bundle{}
                  .mj("module core;\n" + core)
                  .mj("module ext;\n" + ext)
                  .hs("hyperspace S\nslice core : Core\nslice ext : Ext")
                  .hm("hypermodule HM\nhyperslices: Core, Ext;\nrelationships: mergeByName;")
                  .read(frontend::Mechanism::Cmp);
    StepBudget budget;
    return weave_cmp(rr.program, rr.plan, *rr.hyperspace, budget);
  };

  // agreement: both slices say C extends S
  CmpResult ok = weave_two("class S { } class C extends S { m() { 1 } }",
                           "class S { } class C extends S { }");
  bool found = false;
  for (const auto& c : ok.classes)
    if (c.name == "C") {
      found = true;
      ASSERT_TRUE(c.super_name.has_value());
      EXPECT_EQ(*c.super_name, "S");
    }
  EXPECT_TRUE(found);

  // one-sided super survives the merge
  CmpResult one = weave_two("class S { } class C extends S { m() { 1 } }", "class C { }");
  for (const auto& c : one.classes)
    if (c.name == "C") EXPECT_EQ(c.super_name.value_or("-"), "S");

  // disagreement is an error
  try {
    weave_two("class S1 { } class C extends S1 { m() { 1 } }",
              "class S2 { } class C extends S2 { }");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MechanismError);
  }
}

TEST(Weave, CompositorNeverReadsTheComposedRegister) {
  CmpResult person = weave_person();
  EXPECT_EQ(person.output.audit.x_reads, 0);
  EXPECT_GT(person.output.audit.x_writes, 0);

  auto rr = Bundle{}
                .mj("module core;\nclass A { m() { 1 } }")
                .mj("module ext;\nclass B { n() { 2 } }")
                .hs("hyperspace S\nslice core : Core\nslice ext : Ext")
                .hm("hypermodule HM\nhyperslices: Core, Ext;\nrelationships: mergeByName;")
                .read(frontend::Mechanism::Cmp);
  StepBudget budget;
  CmpResult r = weave_cmp(rr.program, rr.plan, *rr.hyperspace, budget);
  EXPECT_EQ(r.output.audit.x_reads, 0);
}

TEST(Weave, PlanShapeErrors) {
  auto rr = person_bundle().read(frontend::Mechanism::Cmp);
  StepBudget budget;

  WeavingPlan empty;
  try {
    weave_cmp(rr.program, empty, *rr.hyperspace, budget);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MechanismError);
  }

  WeavingPlan twice = rr.plan;
  twice.rules.push_back(rr.plan.rules[0]);
  try {
    weave_cmp(rr.program, twice, *rr.hyperspace, budget);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MechanismError);
  }
}

TEST(Provenance, EveryComposedElementReplaysFromItsRule) {
  CmpResult r = weave_person();
  ProvenanceReport rep = check_provenance(r.output.elements);
  EXPECT_TRUE(rep.ok()) << (rep.mismatches.empty() ? "" : rep.mismatches[0]);
  EXPECT_EQ(rep.checked, r.output.elements.size());
  EXPECT_EQ(rep.skipped, 0u);
}

TEST(Provenance, TamperingIsDetected) {
  CmpResult r = weave_person();
  auto elements = r.output.elements;
  bool tampered = false;
  for (ComposedElement& e : elements) {
    if (auto* f = std::get_if<CmpFieldUnit>(&e.payload)) {
      f->field.name += "_hacked";
      tampered = true;
      break;
    }
  }
  ASSERT_TRUE(tampered);
  ProvenanceReport rep = check_provenance(elements);
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.mismatches.size(), 1u);
}

TEST(Weave, WovenProgramIsWellFormedAndRunnable) {
  CmpResult r = weave_person();
  EXPECT_NO_THROW(minj::validate_program(r.classes));
  // and the pretty-printed form parses back to the same program
  auto back = classes_of(minj::pretty_print(minj::canonicalize(r.classes)));
  EXPECT_TRUE(minj::equal(minj::canonicalize(r.classes), back));
}
