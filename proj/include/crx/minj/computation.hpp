#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crx/minj/ast.hpp"
#include "crx/minj/value.hpp"

namespace crx::minj {

enum class CompKind {
  MethodCall,
  MethodExecution,
  ConstructorExecution,
  AdviceExecution,
  NullComputation,
};

inline std::string_view comp_kind_name(CompKind k) {
  switch (k) {
    case CompKind::MethodCall: return "method-call";
    case CompKind::MethodExecution: return "method-execution";
    case CompKind::ConstructorExecution: return "constructor-execution";
    case CompKind::AdviceExecution: return "advice-execution";
    case CompKind::NullComputation: return "null-computation";
  }
  return "?";
}

struct Signature {
  std::string type_name;    // class, or aspect for advice executions
  std::string member_name;  // method, "new" for constructors, advice id
  size_t arity = 0;
};

inline bool operator==(const Signature& a, const Signature& b) {
  return a.type_name == b.type_name && a.member_name == b.member_name && a.arity == b.arity;
}

inline std::string signature_text(CompKind kind, const Signature& sig) {
  switch (kind) {
    case CompKind::ConstructorExecution: return sig.type_name;
    case CompKind::AdviceExecution: return sig.type_name + "." + sig.member_name;
    default: return sig.type_name + "." + sig.member_name + "/" + std::to_string(sig.arity);
  }
}

// Built strictly before the join point's composed computation runs; the
// timestamp comes from the same logical clock that stamps trace events, so
// the before/after relation is a plain integer comparison.
struct JoinPointDescription {
  long long id = 0;
  long long timestamp = 0;
  CompKind kind = CompKind::NullComputation;
  Signature signature;
  std::optional<Value> target;
  std::vector<Value> args;
  SourcePos static_info;  // source position of the originating expression
  int depth = 0;          // advice nesting depth at creation time
};

// A runnable join point computation. `run` takes the argument vector that
// flows through the composition (around advice may replace it). The result
// slot is filled by the runner when the computation completes.
struct Computation {
  CompKind kind = CompKind::NullComputation;
  Signature signature;
  long long id = 0;
  std::function<Value(const std::vector<Value>&)> run;
  std::shared_ptr<std::optional<Value>> result_slot = std::make_shared<std::optional<Value>>();
};

enum class AdviceKind { Before, After, Around };

inline std::string_view advice_kind_name(AdviceKind k) {
  switch (k) {
    case AdviceKind::Before: return "before";
    case AdviceKind::After: return "after";
    case AdviceKind::Around: return "around";
  }
  return "?";
}

// An advice body with its placement data, in the form the evaluator can run.
struct AdviceBinding {
  std::string aspect;
  std::string id;
  AdviceKind kind = AdviceKind::Before;
  int decl_order = 0;
  ExprPtr body;
};

inline std::string advice_ref(const AdviceBinding& a) { return a.aspect + "." + a.id; }

using ProceedFn = std::function<Value(const std::vector<Value>&)>;

// Callback surface the advising side uses to build composed computations.
// Running an advice body raises an advice-execution join point internally.
class EvalHost {
 public:
  virtual ~EvalHost() = default;
  virtual Value run_advice_body(const AdviceBinding& advice, const JoinPointDescription& at,
                                const std::vector<Value>& current_args,
                                const ProceedFn& proceed) = 0;
};

// What advise() hands back: the computation to run in place of x_jp, plus
// the refs of the advice that matched (empty means the join point is
// unadvised and composed is x_jp itself).
struct AdviseOutcome {
  Computation composed;
  std::vector<std::string> advice_refs;
};

// The single interception seam: the evaluator hands every join point
// computation through advise() and runs whatever comes back. The evaluator
// knows nothing about advice lookup.
class Advisor {
 public:
  virtual ~Advisor() = default;
  virtual AdviseOutcome advise(EvalHost& host, Computation x_jp,
                               const JoinPointDescription& desc) = 0;
};

class IdentityAdvisor : public Advisor {
 public:
  AdviseOutcome advise(EvalHost&, Computation x_jp, const JoinPointDescription&) override {
    return {std::move(x_jp), {}};
  }
};

// Seam to the composed-program register: a weaving run commits every
// composed computation and reads back the most recent one before running
// it. Plain evaluation passes no log.
class ComputationLog {
 public:
  virtual ~ComputationLog() = default;
  virtual void commit(const Computation& composed, const JoinPointDescription& desc,
                      const std::vector<std::string>& advice_refs) = 0;
  virtual long long most_recent_id() = 0;
};

}  // namespace crx::minj
