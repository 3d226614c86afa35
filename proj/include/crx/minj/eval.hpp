#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crx/error.hpp"
#include "crx/minj/ast.hpp"
#include "crx/minj/computation.hpp"
#include "crx/minj/trace.hpp"
#include "crx/minj/value.hpp"
#include "crx/minj/wellformed.hpp"
#include "crx/stepbudget.hpp"

namespace crx::minj {

struct TypeInfo {
  std::string name;
  std::optional<std::string> super;
  std::vector<FieldDecl> fields;
};

// How the evaluator sees the program under execution. A weaving run backs
// this with counted concern-register reads; plain evaluation reads the
// class list directly.
class ProgramView {
 public:
  virtual ~ProgramView() = default;
  virtual std::optional<TypeInfo> type_of(const std::string& name) = 0;
  virtual std::optional<MethodDecl> local_method(const std::string& cls, const std::string& name,
                                                 size_t arity) = 0;
};

class DirectProgramView : public ProgramView {
 public:
  explicit DirectProgramView(const std::vector<ClassDecl>& classes) : classes_(classes) {}

  std::optional<TypeInfo> type_of(const std::string& name) override {
    for (const ClassDecl& c : classes_)
      if (c.name == name) return TypeInfo{c.name, c.super_name, c.fields};
    return std::nullopt;
  }

  std::optional<MethodDecl> local_method(const std::string& cls, const std::string& name,
                                         size_t arity) override {
    for (const ClassDecl& c : classes_) {
      if (c.name != cls) continue;
      for (const MethodDecl& m : c.methods)
        if (m.name == name && m.params.size() == arity) return m;
    }
    return std::nullopt;
  }

 private:
  const std::vector<ClassDecl>& classes_;
};

// Per-join-point bookkeeping: the description, what advised it, and the
// timestamp of the first event its composed computation produced. The
// ordering property (desc strictly precedes the composed computation) is a
// plain comparison over these records.
struct DescRecord {
  JoinPointDescription desc;
  std::vector<std::string> advice_refs;
  std::optional<long long> first_composed_event_time;
};

struct EvalResult {
  Value value;
  Trace trace;
  std::vector<DescRecord> desc_records;
};

class Evaluator : public EvalHost {
 public:
  Evaluator(ProgramView& view, Advisor& advisor, ComputationLog* log, StepBudget& budget)
      : view_(view), advisor_(advisor), log_(log), budget_(budget) {}

  EvalResult run(const ExprPtr& entry) {
    Env top;
    Value v = eval(*entry, top);
    return {std::move(v), std::move(trace_), std::move(desc_records_)};
  }

  const Trace& trace() const { return trace_; }
  const std::vector<DescRecord>& desc_records() const { return desc_records_; }

  // EvalHost: run one advice body at the join point `at`, raising the
  // advice-execution join point for it (which is itself advisable).
  Value run_advice_body(const AdviceBinding& advice, const JoinPointDescription& at,
                        const std::vector<Value>& current_args,
                        const ProceedFn& proceed) override {
    Signature sig{advice.aspect, advice.id, 0};
    Value target = at.target ? *at.target : Value(NullV{});
    ExprPtr body = advice.body;
    std::string ref = advice_ref(advice);
    auto run_body = [this, body, ref, target, current_args, proceed](const std::vector<Value>&) {
      emit(EventKind::AdviceExecution, ref);
      Env env;
      env.vars["jpTarget"] = target;
      env.vars["jpArgs"] = Value(StrV{render_args(current_args)});
      for (size_t i = 0; i < current_args.size(); ++i)
        env.vars["jpArg" + std::to_string(i)] = current_args[i];
      env.proceed = proceed;
      env.proceed_args = current_args;
      return eval(*body, env);
    };
    DepthGuard guard(advice_depth_);
    return at_join_point(CompKind::AdviceExecution, sig, std::nullopt, {}, body->pos,
                         std::move(run_body));
  }

 private:
  struct Env {
    std::optional<Value> self;
    std::map<std::string, Value> vars;
    ProceedFn proceed;               // set only inside around bodies
    std::vector<Value> proceed_args; // arguments proceed() forwards by default
  };

  struct DepthGuard {
    explicit DepthGuard(int& d) : d_(d) { ++d_; }
    ~DepthGuard() { --d_; }
    int& d_;
  };

  void emit(EventKind kind, std::string detail) {
    trace_.push_back(TraceEvent{clock_++, kind, std::move(detail)});
  }

  static std::string render_args(const std::vector<Value>& args) {
    std::string out = "[";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += render(args[i]);
    }
    return out + "]";
  }

  // COMPUTE/ADVISE/CONTROL for one join point: build the description first
  // (its timestamp ticks the shared clock), let the advisor replace the
  // computation, commit and read back through the log when weaving, then
  // run the composed computation.
  Value at_join_point(CompKind kind, Signature sig, std::optional<Value> target,
                      std::vector<Value> args, SourcePos pos,
                      std::function<Value(const std::vector<Value>&)> run_body) {
    StepBudget::Frame frame(budget_);
    budget_.tick();
    JoinPointDescription desc;
    desc.id = next_desc_id_++;
    desc.timestamp = clock_++;
    desc.kind = kind;
    desc.signature = sig;
    desc.target = target;
    desc.args = args;
    desc.static_info = pos;
    desc.depth = advice_depth_;
    Computation x_jp;
    x_jp.kind = kind;
    x_jp.signature = std::move(sig);
    x_jp.id = next_comp_id_++;
    x_jp.run = std::move(run_body);
    AdviseOutcome outcome = advisor_.advise(*this, std::move(x_jp), desc);
    if (log_) {
      log_->commit(outcome.composed, desc, outcome.advice_refs);
      (void)log_->most_recent_id();
    }
    desc_records_.push_back(DescRecord{desc, outcome.advice_refs, std::nullopt});
    size_t record = desc_records_.size() - 1;
    size_t pre_events = trace_.size();
    Value v = outcome.composed.run(args);
    *outcome.composed.result_slot = v;
    if (trace_.size() > pre_events)
      desc_records_[record].first_composed_event_time = trace_[pre_events].time;
    return v;
  }

  Value eval(const Expr& e, Env& env) {
    StepBudget::Frame frame(budget_);
    budget_.tick();
    return std::visit([&](const auto& x) { return eval_node(x, e, env); }, e.node);
  }

  Value eval_node(const IntLit& x, const Expr&, Env&) { return IntV{x.value}; }
  Value eval_node(const StrLit& x, const Expr&, Env&) { return StrV{x.value}; }
  Value eval_node(const BoolLit& x, const Expr&, Env&) { return BoolV{x.value}; }
  Value eval_node(const NullLit&, const Expr&, Env&) { return NullV{}; }

  Value eval_node(const Var& x, const Expr&, Env& env) {
    auto it = env.vars.find(x.name);
    if (it == env.vars.end())
      throw Error(ErrorKind::UnknownVariableError, "unknown variable '" + x.name + "'");
    return it->second;
  }

  Value eval_node(const This&, const Expr&, Env& env) {
    if (!env.self) throw Error(ErrorKind::UnknownVariableError, "'this' is not bound here");
    return *env.self;
  }

  Value eval_node(const FieldGet& x, const Expr&, Env& env) {
    ObjectPtr obj = object_target(eval(*x.target, env), "field access");
    auto it = obj->fields.find(x.field);
    if (it == obj->fields.end())
      throw Error(ErrorKind::NoSuchFieldError,
                  "no field '" + x.field + "' on class '" + obj->class_name + "'");
    return it->second;
  }

  Value eval_node(const FieldSet& x, const Expr&, Env& env) {
    ObjectPtr obj = object_target(eval(*x.target, env), "field assignment");
    Value v = eval(*x.value, env);
    auto it = obj->fields.find(x.field);
    if (it == obj->fields.end())
      throw Error(ErrorKind::NoSuchFieldError,
                  "no field '" + x.field + "' on class '" + obj->class_name + "'");
    it->second = v;
    return v;
  }

  Value eval_node(const BinOp& x, const Expr&, Env& env) {
    Value l = eval(*x.lhs, env);
    Value r = eval(*x.rhs, env);
    if (x.op == BinKind::Eq) return BoolV{value_eq(l, r)};
    const IntV* li = std::get_if<IntV>(&l);
    const IntV* ri = std::get_if<IntV>(&r);
    if (!li || !ri)
      throw Error(ErrorKind::TypeError, "'+' expects integer operands, got " + render(l) +
                                            " and " + render(r));
    return IntV{li->value + ri->value};
  }

  Value eval_node(const Seq& x, const Expr&, Env& env) {
    Value v = NullV{};
    for (const ExprPtr& item : x.items) v = eval(*item, env);
    return v;
  }

  Value eval_node(const If& x, const Expr&, Env& env) {
    Value c = eval(*x.cond, env);
    const BoolV* b = std::get_if<BoolV>(&c);
    if (!b) throw Error(ErrorKind::TypeError, "if condition must be boolean, got " + render(c));
    if (b->value) return eval(*x.then_branch, env);
    if (x.else_branch) return eval(*x.else_branch, env);
    return NullV{};
  }

  Value eval_node(const Print& x, const Expr&, Env& env) {
    Value v = eval(*x.arg, env);
    emit(EventKind::Print, render(v));
    return v;
  }

  Value eval_node(const New& x, const Expr& e, Env& env) {
    auto info = view_.type_of(x.class_name);
    if (!info) throw Error(ErrorKind::TypeError, "no class named '" + x.class_name + "'");
    std::vector<Value> args;
    for (const ExprPtr& a : x.args) args.push_back(eval(*a, env));
    if (!args.empty())
      throw Error(ErrorKind::NoSuchMethodError,
                  x.class_name + ".new/" + std::to_string(args.size()) +
                      " (constructors take no arguments)");
    std::string cls = x.class_name;
    auto run_body = [this, cls](const std::vector<Value>&) -> Value {
      emit(EventKind::ConstructorExecution, cls);
      ObjectPtr obj = std::make_shared<Object>();
      obj->class_name = cls;
      obj->id = next_object_id_++;
      for (const FieldDecl& f : transitive_fields(cls)) obj->fields[f.name] = NullV{};
      return ObjRef{obj};
    };
    return at_join_point(CompKind::ConstructorExecution, Signature{cls, "new", 0}, std::nullopt,
                         {}, e.pos, std::move(run_body));
  }

  Value eval_node(const Call& x, const Expr& e, Env& env) {
    Value target = eval(*x.target, env);
    std::vector<Value> args;
    for (const ExprPtr& a : x.args) args.push_back(eval(*a, env));
    ObjectPtr obj = object_target(target, "method call");
    Signature call_sig{obj->class_name, x.method, args.size()};
    std::string method = x.method;
    SourcePos pos = e.pos;
    // The call computation performs dispatch and raises the execution join
    // point when it runs; an around that never proceeds skips all of it.
    auto run_call = [this, target, obj, method, call_sig, pos](const std::vector<Value>& cur) {
      emit(EventKind::MethodCall, signature_text(CompKind::MethodCall, call_sig));
      std::string declaring;
      std::optional<MethodDecl> m = dispatch(obj->class_name, method, cur.size(), &declaring);
      if (!m)
        throw Error(ErrorKind::NoSuchMethodError,
                    obj->class_name + "." + method + "/" + std::to_string(cur.size()));
      Signature exec_sig{declaring, method, cur.size()};
      MethodDecl decl = *m;
      Value self = target;
      auto run_exec = [this, decl, self, exec_sig](const std::vector<Value>& exec_args) {
        emit(EventKind::MethodExecution, signature_text(CompKind::MethodExecution, exec_sig));
        Env body;
        body.self = self;
        for (size_t i = 0; i < decl.params.size(); ++i) body.vars[decl.params[i]] = exec_args[i];
        return eval(*decl.body, body);
      };
      return at_join_point(CompKind::MethodExecution, exec_sig, self, cur, pos,
                           std::move(run_exec));
    };
    return at_join_point(CompKind::MethodCall, call_sig, target, std::move(args), e.pos,
                         std::move(run_call));
  }

  Value eval_node(const Proceed& x, const Expr&, Env& env) {
    if (!env.proceed)
      throw Error(ErrorKind::ProceedOutsideAround, "proceed() is only valid in around advice");
    if (x.args.empty()) return env.proceed(env.proceed_args);
    std::vector<Value> args;
    for (const ExprPtr& a : x.args) args.push_back(eval(*a, env));
    if (args.size() != env.proceed_args.size())
      throw Error(ErrorKind::TypeError,
                  "proceed expects " + std::to_string(env.proceed_args.size()) +
                      " argument(s), got " + std::to_string(args.size()));
    return env.proceed(args);
  }

  ObjectPtr object_target(const Value& v, const char* what) {
    if (std::holds_alternative<NullV>(v))
      throw Error(ErrorKind::NullTargetError, std::string(what) + " on null");
    const ObjRef* ref = std::get_if<ObjRef>(&v);
    if (!ref)
      throw Error(ErrorKind::TypeError,
                  std::string(what) + " on primitive value " + render(v));
    return ref->object;
  }

  std::optional<MethodDecl> dispatch(const std::string& cls, const std::string& method,
                                     size_t arity, std::string* declaring) {
    std::set<std::string> seen;
    std::string cur = cls;
    for (;;) {
      if (!seen.insert(cur).second)
        throw Error(ErrorKind::InheritanceCycleError, "inheritance cycle through '" + cur + "'");
      auto m = view_.local_method(cur, method, arity);
      if (m) {
        *declaring = cur;
        return m;
      }
      auto info = view_.type_of(cur);
      if (!info) throw Error(ErrorKind::TypeError, "no class named '" + cur + "'");
      if (!info->super) return std::nullopt;
      cur = *info->super;
    }
  }

  std::vector<FieldDecl> transitive_fields(const std::string& cls) {
    std::vector<FieldDecl> out;
    std::set<std::string> seen_names;
    std::set<std::string> seen_classes;
    std::string cur = cls;
    for (;;) {
      if (!seen_classes.insert(cur).second)
        throw Error(ErrorKind::InheritanceCycleError, "inheritance cycle through '" + cur + "'");
      auto info = view_.type_of(cur);
      if (!info) throw Error(ErrorKind::TypeError, "no class named '" + cur + "'");
      for (const FieldDecl& f : info->fields)
        if (seen_names.insert(f.name).second) out.push_back(f);
      if (!info->super) return out;
      cur = *info->super;
    }
  }

  ProgramView& view_;
  Advisor& advisor_;
  ComputationLog* log_;
  StepBudget& budget_;
  Trace trace_;
  std::vector<DescRecord> desc_records_;
  long long clock_ = 0;
  long long next_desc_id_ = 1;
  long long next_comp_id_ = 1;
  int next_object_id_ = 1;
  int advice_depth_ = 0;
};

// Plain evaluation: the identity advisor and no computation log. A weaving
// run swaps in a real advisor over the same machinery.
inline EvalResult evaluate(const std::vector<ClassDecl>& classes, const ExprPtr& entry,
                           long long step_budget = kDefaultStepBudget) {
  validate_program(classes);
  DirectProgramView view(classes);
  IdentityAdvisor advisor;
  StepBudget budget(step_budget);
  Evaluator ev(view, advisor, nullptr, budget);
  return ev.run(entry);
}

}  // namespace crx::minj
