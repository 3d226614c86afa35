#pragma once

#include <string>
#include <variant>
#include <vector>

#include "crx/cmp/specs.hpp"
#include "crx/minj/computation.hpp"
#include "crx/pa/pointcut.hpp"

namespace crx {

// Integration rules are mechanism-specific plan entries. The weaving plan
// as a whole means a set of (match, mix) pairs; each rule kind contributes
// its own matcher and constructor.

struct MergeRule {
  cmp::HypermoduleSpec spec;
};

struct PointcutRule {
  std::string advice_ref;  // "Aspect.advice"
  pa::PcPtr pointcut;
  int decl_order = 0;
};

struct AdviceTypeRule {
  std::string advice_ref;
  minj::AdviceKind kind = minj::AdviceKind::Before;
};

struct EffectBindingRule {
  std::string target;      // type the effect applies to
  std::string effect_ref;  // EffectElem id in the concern program
};

using IntegrationRule = std::variant<MergeRule, PointcutRule, AdviceTypeRule, EffectBindingRule>;

struct WeavingPlan {
  std::vector<IntegrationRule> rules;
};

inline bool equal(const IntegrationRule& a, const IntegrationRule& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, MergeRule>) return cmp::equal(x.spec, y.spec);
        else if constexpr (std::is_same_v<T, PointcutRule>)
          return x.advice_ref == y.advice_ref && x.decl_order == y.decl_order &&
                 pa::equal(*x.pointcut, *y.pointcut);
        else if constexpr (std::is_same_v<T, AdviceTypeRule>)
          return x.advice_ref == y.advice_ref && x.kind == y.kind;
        else
          return x.target == y.target && x.effect_ref == y.effect_ref;
      },
      a);
}

inline bool equal(const WeavingPlan& a, const WeavingPlan& b) {
  if (a.rules.size() != b.rules.size()) return false;
  for (size_t i = 0; i < a.rules.size(); ++i)
    if (!equal(a.rules[i], b.rules[i])) return false;
  return true;
}

}  // namespace crx
