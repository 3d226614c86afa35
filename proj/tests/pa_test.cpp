#include <gtest/gtest.h>

#include <regex>

#include "support.hpp"

using namespace crx;
using namespace crx::pa;
using testsupport::Bundle;
using testsupport::demo_path;
using testsupport::golden;
using testsupport::prints_of;
using testsupport::run_pa_sources;
using testsupport::run_plain;
using testsupport::shape_of;
using testsupport::slurp;

namespace {

minj::JoinPointDescription desc_of(minj::CompKind kind, const std::string& type,
                                   const std::string& name, size_t arity = 0) {
  minj::JoinPointDescription d;
  d.kind = kind;
  d.signature = {type, name, arity};
  return d;
}

PcPtr call_pc(const std::string& t, const std::string& n) { return make_pc(CallPc{{t, n}}); }
PcPtr exec_pc(const std::string& t, const std::string& n) { return make_pc(ExecutionPc{{t, n}}); }

PaRunResult run_greeter() {
  Bundle b;
  b.mj(slurp(demo_path("greeter/main.mj")));
  b.asp(slurp(demo_path("greeter/log.asp")));
  auto rr = b.read(frontend::Mechanism::Pa);
  StepBudget budget;
  return run_pa(rr.program, rr.plan, minj::parse_entry("Main.go"), budget);
}

// base programs used for the identity checks, each with its entry point
const std::vector<std::pair<std::string, std::string>> kIdentityPrograms = {
    {"class A { m() { 1 } }", "A.m"},
    {"class A { m() { 1 } } class B extends A { m() { 2 } } class C { go() { new B().m() } }",
     "C.go"},
    {"class P { Int x; set(v) { this.x = v } get() { this.x } use() { this.set(5); this.get() } }",
     "P.use"},
    {"class S { go() { print(\"hi\"); \"done\" } }", "S.go"},
    {"class I { go() { if (1 == 1) { 10 } else { 20 } } }", "I.go"},
    {"class Q { go() { 1; 2; 3 } }", "Q.go"},
    {"class A { } class B { go() { new A(); new A() } }", "B.go"},
    {"class A { Int v; } class B extends A { go() { this.v = 3; this.v } }", "B.go"},
    {"class F { add(a, b) { a + b } go() { this.add(2, 3) } }", "F.go"},
    {"class N { go() { null } }", "N.go"},
    {"class G { f(x) { x + 1 } go() { this.f(this.f(this.f(0))) } }", "G.go"},
    {"class W { go() { 1 == 2 } }", "W.go"},
};

}  // namespace

TEST(Glob, AgreesWithARegexTranslation) {
  auto to_regex = [](std::string_view pat) {
    std::string rx;
    for (char c : pat) {
      if (c == '*')
        rx += ".*";
      else if (std::isalnum(static_cast<unsigned char>(c)))
        rx += c;
      else {
        rx += '\\';
        rx += c;
      }
    }
    return std::regex(rx);
  };
  const std::vector<std::string> pats = {"",     "*",      "get*", "*Name", "g*t",  "Greeter",
                                         "Gre*ter", "*e*e*", "a*",   "*a",    "**",   "set.Name"};
  const std::vector<std::string> texts = {"",        "getName", "Greeter", "greet", "setName",
                                          "name",    "a",       "aa",      "set.Name", "gt",
                                          "geteName"};
  for (const std::string& p : pats)
    for (const std::string& t : texts)
      EXPECT_EQ(glob_match(p, t), std::regex_match(t, to_regex(p))) << p << " vs " << t;
}

TEST(Pointcut, TruthTableOverEveryDescriptionKind) {
  using minj::CompKind;
  auto call_d = desc_of(CompKind::MethodCall, "Greeter", "greet", 1);
  auto exec_d = desc_of(CompKind::MethodExecution, "Greeter", "greet", 1);
  auto ctor_d = desc_of(CompKind::ConstructorExecution, "Greeter", "new");
  auto adv_d = desc_of(CompKind::AdviceExecution, "Log", "note");

  struct Row {
    PcPtr pc;
    bool call, exec, ctor, adv;
  };
  const std::vector<Row> table = {
      {call_pc("Greeter", "greet"), true, false, false, false},
      {exec_pc("Greeter", "greet"), false, true, false, false},
      // execution(..) covers constructor executions through the name glob
      {exec_pc("Greeter", "*"), false, true, true, false},
      {make_pc(AdviceExecutionPc{}), false, false, false, true},
      {make_pc(OrPc{call_pc("*", "*"), exec_pc("*", "*")}), true, true, true, false},
      {make_pc(NotPc{call_pc("*", "*")}), false, true, true, true},
      {make_pc(AndPc{call_pc("Greeter", "greet"), make_pc(NotPc{call_pc("*", "set*")})}),
       true, false, false, false},
      {exec_pc("G*", "gr*"), false, true, false, false},
      {call_pc("*", "greet"), true, false, false, false},
      {call_pc("Log", "*"), false, false, false, false},
  };
  for (size_t i = 0; i < table.size(); ++i) {
    EXPECT_EQ(matches(*table[i].pc, call_d), table[i].call) << "row " << i;
    EXPECT_EQ(matches(*table[i].pc, exec_d), table[i].exec) << "row " << i;
    EXPECT_EQ(matches(*table[i].pc, ctor_d), table[i].ctor) << "row " << i;
    EXPECT_EQ(matches(*table[i].pc, adv_d), table[i].adv) << "row " << i;
  }
}

TEST(Match, OrdersByDeclarationAndExcludesSelf) {
  minj::ExprPtr body = minj::parse_expr("1");
  auto bound = [&](const std::string& aspect, const std::string& id, int order, PcPtr pc) {
    minj::AdviceBinding b;
    b.aspect = aspect;
    b.id = id;
    b.decl_order = order;
    b.body = body;
    return BoundAdvice{std::move(b), std::move(pc)};
  };
  // handed over out of declaration order on purpose
  std::vector<BoundAdvice> all = {
      bound("L", "second", 1, call_pc("*", "*")),
      bound("L", "first", 0, call_pc("*", "*")),
      bound("L", "never", 2, call_pc("Nobody", "*")),
  };
  auto d = desc_of(minj::CompKind::MethodCall, "Greeter", "greet", 1);
  auto sel = match_advice(d, all);
  ASSERT_EQ(sel.size(), 2u);
  EXPECT_EQ(sel[0].binding.id, "first");
  EXPECT_EQ(sel[1].binding.id, "second");

  // same inputs, same answer
  auto again = match_advice(d, all);
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again[0].binding.id, "first");

  // an advice never matches its own execution, everyone else's is fair game
  std::vector<BoundAdvice> meta = {bound("Meta", "note", 0, make_pc(AdviceExecutionPc{}))};
  auto own = desc_of(minj::CompKind::AdviceExecution, "Meta", "note");
  auto other = desc_of(minj::CompKind::AdviceExecution, "Trap", "base");
  EXPECT_TRUE(match_advice(own, meta).empty());
  EXPECT_EQ(match_advice(other, meta).size(), 1u);
}

namespace {

struct MixRig {
  std::vector<std::string> log;

  AdviceComputation tagged(minj::AdviceKind kind, int order, const std::string& tag) {
    return AdviceComputation{kind, order, tag,
                             [this, tag](const std::vector<minj::Value>&, const minj::ProceedFn&) {
                               log.push_back(tag);
                               return minj::Value(minj::NullV{});
                             }};
  }

  AdviceComputation wrapping(int order, const std::string& tag) {
    return AdviceComputation{minj::AdviceKind::Around, order, tag,
                             [this, tag](const std::vector<minj::Value>& args,
                                         const minj::ProceedFn& proceed) {
                               log.push_back(tag + ">");
                               minj::Value v = proceed(args);
                               log.push_back("<" + tag);
                               return v;
                             }};
  }

  minj::Computation core() {
    minj::Computation c;
    c.kind = minj::CompKind::MethodExecution;
    c.signature = {"T", "m", 0};
    c.id = 42;
    c.run = [this](const std::vector<minj::Value>&) {
      log.push_back("core");
      return minj::Value(minj::StrV{"core-value"});
    };
    return c;
  }
};

}  // namespace

TEST(Mix, BeforesRunForwardAftersRunBackward) {
  MixRig rig;
  auto composed = mix({rig.tagged(minj::AdviceKind::Before, 0, "b1"),
                       rig.tagged(minj::AdviceKind::Before, 1, "b2"),
                       rig.tagged(minj::AdviceKind::After, 2, "a1"),
                       rig.tagged(minj::AdviceKind::After, 3, "a2")},
                      rig.core());
  minj::Value v = composed.run({});
  EXPECT_EQ(rig.log, (std::vector<std::string>{"b1", "b2", "core", "a2", "a1"}));
  EXPECT_EQ(render(v), "core-value");
  // the composed computation keeps the replaced one's identity
  EXPECT_EQ(composed.id, 42);
  EXPECT_EQ(composed.kind, minj::CompKind::MethodExecution);
}

TEST(Mix, EarliestAroundIsOutermostAndWrapsBeforesAndAfters) {
  MixRig rig;
  auto composed = mix({rig.wrapping(0, "o1"), rig.tagged(minj::AdviceKind::Before, 2, "b"),
                       rig.tagged(minj::AdviceKind::After, 3, "a"), rig.wrapping(5, "o2")},
                      rig.core());
  composed.run({});
  EXPECT_EQ(rig.log,
            (std::vector<std::string>{"o1>", "o2>", "b", "core", "a", "<o2", "<o1"}));
}

TEST(Mix, DeclarationOrderBeatsHandOverOrder) {
  MixRig rig;
  // vector order scrambled; decl_order must decide
  auto composed = mix({rig.tagged(minj::AdviceKind::After, 3, "a"),
                       rig.wrapping(1, "o"),
                       rig.tagged(minj::AdviceKind::Before, 0, "b")},
                      rig.core());
  composed.run({});
  EXPECT_EQ(rig.log, (std::vector<std::string>{"o>", "b", "core", "a", "<o"}));
}

TEST(Mix, AroundThatNeverProceedsSkipsEverythingInsideIt) {
  MixRig rig;
  AdviceComputation silent{minj::AdviceKind::Around, 0, "silent",
                           [&rig](const std::vector<minj::Value>&, const minj::ProceedFn&) {
                             rig.log.push_back("silent");
                             return minj::Value(minj::IntV{99});
                           }};
  auto composed = mix({silent, rig.tagged(minj::AdviceKind::Before, 1, "b")}, rig.core());
  minj::Value v = composed.run({});
  EXPECT_EQ(rig.log, std::vector<std::string>{"silent"});
  EXPECT_EQ(render(v), "99");
}

TEST(Mix, ProceedArgumentsFlowInward) {
  MixRig rig;
  AdviceComputation replacing{
      minj::AdviceKind::Around, 0, "r",
      [](const std::vector<minj::Value>&, const minj::ProceedFn& proceed) {
        return proceed({minj::Value(minj::IntV{7})});
      }};
  AdviceComputation peek{minj::AdviceKind::Before, 1, "peek",
                         [&rig](const std::vector<minj::Value>& args, const minj::ProceedFn&) {
                           rig.log.push_back(render(args.at(0)));
                           return minj::Value(minj::NullV{});
                         }};
  minj::Computation core;
  core.kind = minj::CompKind::MethodExecution;
  core.run = [&rig](const std::vector<minj::Value>& args) {
    rig.log.push_back("core:" + render(args.at(0)));
    return args.at(0);
  };
  minj::Value v = mix({replacing, peek}, core).run({minj::Value(minj::IntV{5})});
  EXPECT_EQ(rig.log, (std::vector<std::string>{"7", "core:7"}));
  EXPECT_EQ(render(v), "7");
}

TEST(Weaving, EmptyPlanIsBitIdenticalToPlainEvaluation) {
  for (const auto& [src, entry] : kIdentityPrograms) {
    minj::EvalResult plain = run_plain(src, entry);
    PaRunResult woven = run_pa_sources({src}, {}, entry);
    EXPECT_TRUE(woven.trace == plain.trace) << entry;
    EXPECT_EQ(minj::render(woven.value), minj::render(plain.value)) << entry;
    EXPECT_EQ(woven.desc_records.size(), plain.desc_records.size()) << entry;
  }
}

TEST(Weaving, UnmatchedAdviceLeavesTheRunUntouched) {
  const std::string ghost =
      "aspect Ghost { before g : call(Nowhere, nothing) { print(\"X\") } }";
  for (const auto& [src, entry] : kIdentityPrograms) {
    minj::EvalResult plain = run_plain(src, entry);
    PaRunResult woven = run_pa_sources({src}, {ghost}, entry);
    EXPECT_TRUE(woven.trace == plain.trace) << entry;
    EXPECT_EQ(minj::render(woven.value), minj::render(plain.value)) << entry;
  }
}

TEST(Weaving, PassThroughAroundPreservesBehaviorBeyondItsOwnEvents) {
  const std::string pass = "aspect Pass { around p : execution(*, *) { proceed() } }";
  for (const auto& [src, entry] : kIdentityPrograms) {
    minj::EvalResult plain = run_plain(src, entry);
    PaRunResult woven = run_pa_sources({src}, {pass}, entry);
    EXPECT_EQ(prints_of(woven.trace), prints_of(plain.trace)) << entry;
    EXPECT_EQ(minj::render(woven.value), minj::render(plain.value)) << entry;
    EXPECT_EQ(shape_of(woven.trace, false), shape_of(plain.trace, false)) << entry;
  }
}

TEST(Weaving, CallAndExecutionAreDistinctJoinPoints) {
  const std::string base =
      "class A { m() { 1 } } class B extends A { } class Main { go() { new B().m() } }";
  // a call is described with the receiver's class, an execution with the
  // declaring class
  PaRunResult on_call_a = run_pa_sources(
      {base}, {"aspect L { before x : call(A, m) { print(\"hit\") } }"}, "Main.go");
  EXPECT_TRUE(prints_of(on_call_a.trace).empty());

  PaRunResult on_call_b = run_pa_sources(
      {base}, {"aspect L { before x : call(B, m) { print(\"hit\") } }"}, "Main.go");
  EXPECT_EQ(prints_of(on_call_b.trace), std::vector<std::string>{"hit"});

  PaRunResult on_exec = run_pa_sources(
      {base}, {"aspect L { before x : execution(A, m) { print(\"hit\") } }"}, "Main.go");
  EXPECT_EQ(prints_of(on_exec.trace), std::vector<std::string>{"hit"});
}

TEST(Weaving, AdviceCountMatchesTheMatchingDescriptionCount) {
  const std::string base =
      "class Counter { bump() { 1 } } "
      "class Main { go() { this.use(new Counter()) } "
      "use(c) { c.bump(); c.bump(); c.bump() } }";
  PaRunResult r = run_pa_sources(
      {base}, {"aspect L { before x : call(Counter, bump) { print(\"LOG\") } }"}, "Main.go");
  EXPECT_EQ(prints_of(r.trace), (std::vector<std::string>{"LOG", "LOG", "LOG"}));

  int advice_events = 0;
  for (const auto& e : r.trace)
    if (e.kind == minj::EventKind::AdviceExecution) ++advice_events;
  EXPECT_EQ(advice_events, 3);

  int matching_descs = 0;
  for (const auto& rec : r.desc_records)
    if (!rec.advice_refs.empty()) ++matching_descs;
  EXPECT_EQ(matching_descs, 3);
}

TEST(Weaving, ReservedVariablesDescribeTheJoinPoint) {
  const std::string base =
      "class W { m(a, b) { a } } class Main { go() { new W().m(\"x\", \"y\") } }";
  PaRunResult r = run_pa_sources(
      {base},
      {"aspect L { before x : call(W, m) { print(jpArgs); print(jpArg0); print(jpArg1); "
       "print(jpTarget) } }"},
      "Main.go");
  auto prints = prints_of(r.trace);
  ASSERT_EQ(prints.size(), 4u);
  EXPECT_EQ(prints[0], "[x, y]");
  EXPECT_EQ(prints[1], "x");
  EXPECT_EQ(prints[2], "y");
  EXPECT_TRUE(prints[3].rfind("W#", 0) == 0) << prints[3];
}

TEST(Weaving, ProceedReplacesArgumentsAtTheAdvisedExecution) {
  const std::string base = "class T { m(x) { x } go() { this.m(5) } }";
  PaRunResult r = run_pa_sources(
      {base}, {"aspect L { around x : execution(T, m) { proceed(jpArg0 + 1) } }"}, "T.go");
  EXPECT_EQ(render(r.value), "6");
}

TEST(Weaving, ProceedMayRunTheJoinPointSeveralTimes) {
  const std::string base = "class T { m() { 3 } go() { this.m() } }";
  PaRunResult r = run_pa_sources(
      {base}, {"aspect L { around x : execution(T, m) { proceed() + proceed() } }"}, "T.go");
  EXPECT_EQ(render(r.value), "6");
  int execs = 0;
  for (const auto& e : r.trace)
    if (e.kind == minj::EventKind::MethodExecution && e.detail == "T.m/0") ++execs;
  EXPECT_EQ(execs, 2);
}

TEST(Weaving, AroundWithoutProceedReplacesTheJoinPointEntirely) {
  const std::string base = "class T { m() { 3 } go() { this.m() } }";
  PaRunResult r = run_pa_sources(
      {base}, {"aspect L { around x : execution(T, m) { 99 } }"}, "T.go");
  EXPECT_EQ(render(r.value), "99");
  for (const auto& e : r.trace)
    EXPECT_FALSE(e.kind == minj::EventKind::MethodExecution && e.detail == "T.m/0");
  // the call itself still happened and was described
  bool called = false;
  for (const auto& e : r.trace)
    called = called || (e.kind == minj::EventKind::MethodCall && e.detail == "T.m/0");
  EXPECT_TRUE(called);
}

TEST(Weaving, GreeterFixtureMatchesItsFrozenTraceAndAudit) {
  PaRunResult r = run_greeter();
  std::string expected = golden("greeter_trace.txt");
  std::string got = minj::format_trace(r.trace) + "=> " + render(r.value) + "\n";
  EXPECT_EQ(got, expected);
  EXPECT_EQ(r.audit.to_text(), golden("greeter_audit.txt"));
}

TEST(Weaving, RegisterTrafficFollowsTheRunShape) {
  // C is read once per element, R is scanned once up front and once per
  // description, X takes one commit and one read-back per description.
  auto check = [](const std::vector<std::string>& mj, const std::vector<std::string>& asp,
                  const std::string& entry) {
    Bundle b;
    for (const std::string& s : mj) b.mj(s);
    for (const std::string& s : asp) b.asp(s);
    auto rr = b.read(frontend::Mechanism::Pa);
    StepBudget budget;
    PaRunResult r = run_pa(rr.program, rr.plan, minj::parse_entry(entry), budget);

    long long jps = static_cast<long long>(r.desc_records.size());
    EXPECT_EQ(r.audit.c_reads, static_cast<long long>(rr.program.elements.size()));
    EXPECT_EQ(r.audit.r_reads, static_cast<long long>(rr.plan.rules.size()) * (1 + jps));
    EXPECT_EQ(r.audit.x_writes, jps);
    EXPECT_EQ(r.audit.x_reads, jps);
    EXPECT_EQ(static_cast<long long>(r.elements.size()), jps);
  };
  check({"class T { m(x) { x } go() { this.m(5) } }"},
        {"aspect L { around x : execution(T, m) { proceed(jpArg0 + 1) } }"}, "T.go");
  check({kIdentityPrograms[1].first}, {}, kIdentityPrograms[1].second);
  check({kIdentityPrograms[2].first},
        {"aspect L { before a : call(*, set) { print(\"s\") } after b : execution(P, get) "
         "{ print(\"g\") } }"},
        kIdentityPrograms[2].second);
}

TEST(Weaving, MetaAdviceInterceptsOtherAdvice) {
  Bundle b;
  b.mj(slurp(demo_path("greeter/main.mj")));
  b.asp(slurp(demo_path("meta/meta.asp")));
  auto rr = b.read(frontend::Mechanism::Pa);
  StepBudget budget;
  PaRunResult r = run_pa(rr.program, rr.plan, minj::parse_entry("Main.go"), budget);

  EXPECT_EQ(prints_of(r.trace), (std::vector<std::string>{"META", "BASE", "world"}));
  std::vector<std::string> advice_events;
  for (const auto& e : r.trace)
    if (e.kind == minj::EventKind::AdviceExecution) advice_events.push_back(e.detail);
  EXPECT_EQ(advice_events, (std::vector<std::string>{"Meta.note", "Trap.base"}));
}

TEST(Weaving, MutuallyMetaAdviceExhaustsTheBudget) {
  Bundle b;
  b.mj(slurp(demo_path("greeter/main.mj")));
  b.asp(slurp(demo_path("meta/mutual.asp")));
  auto rr = b.read(frontend::Mechanism::Pa);
  StepBudget budget;
  try {
    run_pa(rr.program, rr.plan, minj::parse_entry("Main.go"), budget);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepBudgetExceeded);
  }
}

TEST(Weaving, DescriptionsAlwaysPrecedeTheirComposedComputations) {
  auto check = [](const PaRunResult& r) {
    ASSERT_FALSE(r.desc_records.empty());
    for (const auto& rec : r.desc_records) {
      if (!rec.first_composed_event_time) continue;
      EXPECT_LT(rec.desc.timestamp, *rec.first_composed_event_time);
    }
  };
  check(run_greeter());
  check(run_pa_sources({"class T { m(x) { x } go() { this.m(5) } }"},
                       {"aspect L { around x : execution(T, m) { proceed(jpArg0 + 1) } }"},
                       "T.go"));
  check(run_pa_sources({kIdentityPrograms[1].first}, {}, kIdentityPrograms[1].second));
}

TEST(Weaving, PlanSanityIsCheckedBeforeAnyExecution) {
  ConcernProgram program;
  decompose_classes("main", testsupport::classes_of("class A { m() { print(\"ran\") } }"),
                    program);

  // a placement that names advice nobody declared
  WeavingPlan dangling;
  dangling.rules.push_back(PointcutRule{"Ghost.x", call_pc("*", "*"), 0});
  StepBudget b1;
  try {
    run_pa(program, dangling, minj::parse_entry("A.m"), b1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnresolvedAdviceError);
  }

  // a foreign rule kind in the plan
  WeavingPlan foreign;
  foreign.rules.push_back(MergeRule{cmp::HypermoduleSpec{"HM", {"A"}, "mergeByName"}});
  StepBudget b2;
  try {
    run_pa(program, foreign, minj::parse_entry("A.m"), b2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MechanismError);
  }

  // advice with a placement but no kind
  ConcernProgram with_advice = program;
  with_advice.elements.push_back(ConcernElement{
      "L/advice/x", "L", AdviceBodyElem{"L", "x", minj::parse_expr("1")}});
  WeavingPlan untyped;
  untyped.rules.push_back(PointcutRule{"L.x", call_pc("*", "*"), 0});
  StepBudget b3;
  try {
    run_pa(with_advice, untyped, minj::parse_entry("A.m"), b3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnresolvedAdviceError);
  }
}

TEST(Weaving, ComposedComputationsAreRecordedWithTheirAdvice) {
  PaRunResult r = run_greeter();
  ASSERT_EQ(r.elements.size(), r.desc_records.size());

  std::set<std::string> ids;
  size_t advised = 0;
  for (const ComposedElement& e : r.elements) {
    EXPECT_TRUE(ids.insert(e.id).second) << "duplicate " << e.id;
    const auto* rec = std::get_if<PaComputationRecord>(&e.payload);
    ASSERT_NE(rec, nullptr);
    EXPECT_EQ(e.id, "x/comp/" + std::to_string(rec->comp_id));
    if (!rec->advice_refs.empty()) ++advised;
  }
  EXPECT_EQ(advised, 2u);  // the greet call and the greet execution

  bool saw_call = false;
  for (const ComposedElement& e : r.elements) {
    const auto& rec = std::get<PaComputationRecord>(e.payload);
    if (rec.signature == "Greeter.greet/1" && rec.kind == minj::CompKind::MethodCall) {
      saw_call = true;
      EXPECT_EQ(rec.advice_refs, std::vector<std::string>{"Log.note"});
    }
  }
  EXPECT_TRUE(saw_call);

  // dynamic records have no recomputable payload; the checker must say so
  ProvenanceReport rep = check_provenance(r.elements);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checked, 0u);
  EXPECT_EQ(rep.skipped, r.elements.size());
}
