#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "crx/kernel/process.hpp"
#include "crx/minj/eval.hpp"
#include "crx/pa/match.hpp"
#include "crx/pa/mix.hpp"

namespace crx::pa {

// Commits every composed computation to the X register and reads the most
// recent one back before it runs; that read is the reactive signature of
// this mechanism. Computations are recorded by id and signature, with the
// advice bodies they consumed as provenance.
class RegisterComputationLog : public minj::ComputationLog {
 public:
  RegisterComputationLog(ComposedStore& store, const std::map<std::string, ConcernElement>& bodies)
      : store_(store), bodies_(bodies) {}

  void commit(const minj::Computation& composed, const minj::JoinPointDescription& desc,
              const std::vector<std::string>& advice_refs) override {
    ComposedElement e;
    e.id = "x/comp/" + std::to_string(composed.id);
    e.payload = PaComputationRecord{composed.id, composed.kind,
                                    minj::signature_text(composed.kind, composed.signature),
                                    desc.id, advice_refs};
    e.provenance.rule = PaApplication{composed.id, advice_refs};
    for (const std::string& ref : advice_refs) {
      auto it = bodies_.find(ref);
      if (it != bodies_.end()) e.provenance.matched.push_back(it->second);
    }
    store_.commit(std::move(e));
  }

  long long most_recent_id() override {
    const ComposedElement& e = store_.most_recent();
    const auto* rec = std::get_if<PaComputationRecord>(&e.payload);
    return rec ? rec->comp_id : 0;
  }

 private:
  ComposedStore& store_;
  const std::map<std::string, ConcernElement>& bodies_;
};

// The interception seam's weaving side. Every description triggers a fresh
// scan of the plan: pointcut rules give placement and order, advice-type
// rules give the kind, the concern program gives the body. Matching itself
// is the pure match_advice above.
class PaAdvisor : public minj::Advisor {
 public:
  PaAdvisor(PlanView& plan, const std::map<std::string, minj::AdviceBinding>& bodies)
      : plan_(plan), bodies_(bodies) {}

  minj::AdviseOutcome advise(minj::EvalHost& host, minj::Computation x_jp,
                             const minj::JoinPointDescription& desc) override {
    std::vector<PointcutRule> pc_rules;
    std::map<std::string, minj::AdviceKind> kinds;
    for (size_t i = 0; i < plan_.size(); ++i) {
      const IntegrationRule& rule = plan_.at(i);
      if (const auto* pc = std::get_if<PointcutRule>(&rule))
        pc_rules.push_back(*pc);
      else if (const auto* at = std::get_if<AdviceTypeRule>(&rule))
        kinds[at->advice_ref] = at->kind;
    }

    std::vector<BoundAdvice> all;
    for (const PointcutRule& pc : pc_rules) {
      auto body = bodies_.find(pc.advice_ref);
      auto kind = kinds.find(pc.advice_ref);
      if (body == bodies_.end() || kind == kinds.end())
        throw Error(ErrorKind::UnresolvedAdviceError,
                    "pointcut rule references unresolvable advice '" + pc.advice_ref + "'");
      minj::AdviceBinding b = body->second;
      b.kind = kind->second;
      b.decl_order = pc.decl_order;
      all.push_back(BoundAdvice{std::move(b), pc.pointcut});
    }

    std::vector<BoundAdvice> selected = match_advice(desc, all);
    if (selected.empty()) return {std::move(x_jp), {}};

    std::vector<std::string> refs;
    std::vector<AdviceComputation> comps;
    for (const BoundAdvice& a : selected) {
      refs.push_back(minj::advice_ref(a.binding));
      comps.push_back(AdviceComputation{
          a.binding.kind, a.binding.decl_order, refs.back(),
          [&host, binding = a.binding, desc](const std::vector<minj::Value>& args,
                                             const minj::ProceedFn& proceed) {
            return host.run_advice_body(binding, desc, args, proceed);
          }});
    }
    return {mix(std::move(comps), std::move(x_jp)), std::move(refs)};
  }

 private:
  PlanView& plan_;
  const std::map<std::string, minj::AdviceBinding>& bodies_;
};

// Reactive weaving by execution: runs the program from the entry expression
// with the advising evaluator, the plan consulted at every join point and
// the composed computations logged to X as they happen.
class PaProcess final : public ReactiveProcess {
 public:
  explicit PaProcess(minj::ExprPtr entry) : entry_(std::move(entry)) {}

  std::string_view name() const override { return "pointcut-and-advice"; }

  void weave(ConcernView& concerns, PlanView& plan, ComposedStore& out,
             StepBudget& budget) override {
    std::vector<ConcernElement> elems;
    for (size_t i = 0; i < concerns.size(); ++i) elems.push_back(concerns.at(i));

    std::vector<const ConcernElement*> program_elems;
    std::map<std::string, minj::AdviceBinding> bodies;
    std::map<std::string, ConcernElement> body_elems;
    for (const ConcernElement& e : elems) {
      if (const auto* a = std::get_if<AdviceBodyElem>(&e.payload)) {
        std::string ref = a->aspect + "." + a->id;
        minj::AdviceBinding b;
        b.aspect = a->aspect;
        b.id = a->id;
        b.body = a->body;
        bodies[ref] = std::move(b);
        body_elems[ref] = e;
      } else {
        program_elems.push_back(&e);
      }
    }
    classes_ = assemble_classes(program_elems);
    minj::validate_program(classes_);

    // plan sanity before any execution: every rule must be a PA rule and
    // must reference an advice body that exists, and every placed advice
    // needs a kind
    std::set<std::string> placed, typed;
    for (size_t i = 0; i < plan.size(); ++i) {
      const IntegrationRule& rule = plan.at(i);
      if (const auto* pc = std::get_if<PointcutRule>(&rule)) {
        if (!bodies.count(pc->advice_ref))
          throw Error(ErrorKind::UnresolvedAdviceError,
                      "pointcut rule references unknown advice '" + pc->advice_ref + "'");
        placed.insert(pc->advice_ref);
      } else if (const auto* at = std::get_if<AdviceTypeRule>(&rule)) {
        if (!bodies.count(at->advice_ref))
          throw Error(ErrorKind::UnresolvedAdviceError,
                      "advice-type rule references unknown advice '" + at->advice_ref + "'");
        typed.insert(at->advice_ref);
      } else {
        throw Error(ErrorKind::MechanismError,
                    "plan rule not applicable to pointcut-and-advice weaving");
      }
    }
    for (const std::string& ref : placed)
      if (!typed.count(ref))
        throw Error(ErrorKind::UnresolvedAdviceError,
                    "advice '" + ref + "' is placed but has no advice-type rule");

    minj::DirectProgramView view(classes_);
    PaAdvisor advisor(plan, bodies);
    RegisterComputationLog log(out, body_elems);
    minj::Evaluator ev(view, advisor, &log, budget);
    minj::EvalResult result = ev.run(entry_);
    value_ = std::move(result.value);
    trace_ = std::move(result.trace);
    desc_records_ = std::move(result.desc_records);
  }

  const minj::Value& value() const { return value_; }
  const minj::Trace& trace() const { return trace_; }
  const std::vector<minj::DescRecord>& desc_records() const { return desc_records_; }

 private:
  minj::ExprPtr entry_;
  std::vector<minj::ClassDecl> classes_;
  minj::Value value_;
  minj::Trace trace_;
  std::vector<minj::DescRecord> desc_records_;
};

struct PaRunResult {
  minj::Value value;
  minj::Trace trace;
  std::vector<minj::DescRecord> desc_records;
  std::vector<ComposedElement> elements;
  RegisterAudit audit;
};

inline PaRunResult run_pa(const ConcernProgram& program, const WeavingPlan& plan,
                          const minj::ExprPtr& entry, StepBudget& budget) {
  PaProcess proc(entry);
  WeaveOutput out = run_weaving(proc, program, plan, budget);
  PaRunResult r;
  r.value = proc.value();
  r.trace = proc.trace();
  r.desc_records = proc.desc_records();
  r.elements = std::move(out.elements);
  r.audit = out.audit;
  return r;
}

}  // namespace crx::pa
