#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "crx/kernel/composed.hpp"
#include "crx/kernel/plan.hpp"
#include "crx/kernel/register.hpp"
#include "crx/stepbudget.hpp"

namespace crx {

enum class ProcessKind { Nonreactive, Reactive };

inline std::string_view process_kind_name(ProcessKind k) {
  return k == ProcessKind::Nonreactive ? "nonreactive" : "reactive";
}

// Counted views the process works through. All store access goes through
// these; the runner owns the registers themselves.

class ConcernView {
 public:
  explicit ConcernView(Register<ConcernElement>& reg) : reg_(reg) {}
  size_t size() const { return reg_.size(); }
  const ConcernElement& at(size_t i) { return reg_.read(i); }

 private:
  Register<ConcernElement>& reg_;
};

class PlanView {
 public:
  explicit PlanView(Register<IntegrationRule>& reg) : reg_(reg) {}
  size_t size() const { return reg_.size(); }
  const IntegrationRule& at(size_t i) { return reg_.read(i); }

 private:
  Register<IntegrationRule>& reg_;
};

// Write-only capability over the composed-program register. Nonreactive
// processes receive exactly this type: reading X back is absent from their
// interface by construction.
class ComposedSink {
 public:
  explicit ComposedSink(Register<ComposedElement>& reg) : reg_(reg) {}
  void commit(ComposedElement e) { reg_.commit(std::move(e)); }
  size_t committed() const { return reg_.size(); }

 protected:
  Register<ComposedElement>& reg_;
};

// Read/write capability; only reactive processes see this.
class ComposedStore : public ComposedSink {
 public:
  using ComposedSink::ComposedSink;
  const ComposedElement& at(size_t i) { return reg_.read(i); }
  const ComposedElement& most_recent() { return reg_.most_recent(); }
};

class WeavingProcess {
 public:
  virtual ~WeavingProcess() = default;
  virtual std::string_view name() const = 0;
  virtual ProcessKind kind() const = 0;
};

class NonreactiveProcess : public WeavingProcess {
 public:
  ProcessKind kind() const final { return ProcessKind::Nonreactive; }
  virtual void weave(ConcernView& concerns, PlanView& plan, ComposedSink& out,
                     StepBudget& budget) = 0;
};

class ReactiveProcess : public WeavingProcess {
 public:
  ProcessKind kind() const final { return ProcessKind::Reactive; }
  virtual void weave(ConcernView& concerns, PlanView& plan, ComposedStore& out,
                     StepBudget& budget) = 0;
};

struct WeaveOutput {
  std::vector<ComposedElement> elements;
  RegisterAudit audit;
};

// Load the concern program into C and the plan into R, hand the process its
// capability-matched views, drive it to completion, then drain X. The audit
// snapshots the final counters; a nonreactive process cannot have read X.
inline WeaveOutput run_weaving(WeavingProcess& process, const ConcernProgram& program,
                               const WeavingPlan& plan, StepBudget& budget) {
  program.validate();
  Register<ConcernElement> c_reg;
  Register<IntegrationRule> r_reg;
  Register<ComposedElement> x_reg;
  for (const ConcernElement& e : program.elements) c_reg.commit(e);
  for (const IntegrationRule& r : plan.rules) r_reg.commit(r);

  ConcernView concerns(c_reg);
  PlanView rules(r_reg);
  if (auto* nonreactive = dynamic_cast<NonreactiveProcess*>(&process)) {
    ComposedSink sink(x_reg);
    nonreactive->weave(concerns, rules, sink, budget);
  } else if (auto* reactive = dynamic_cast<ReactiveProcess*>(&process)) {
    ComposedStore store(x_reg);
    reactive->weave(concerns, rules, store, budget);
  } else {
    throw std::logic_error("weaving process is neither reactive nor nonreactive");
  }

  RegisterAudit audit{c_reg.reads(),  c_reg.writes(), r_reg.reads(),
                      r_reg.writes(), x_reg.reads(),  x_reg.writes()};
  if (process.kind() == ProcessKind::Nonreactive && audit.x_reads != 0)
    throw std::logic_error("nonreactive process read the composed-program register");

  WeaveOutput out;
  out.audit = audit;
  for (ComposedElement& e : std::move(x_reg).drain()) out.elements.push_back(std::move(e));
  return out;
}

}  // namespace crx
