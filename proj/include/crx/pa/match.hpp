#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "crx/minj/computation.hpp"
#include "crx/pa/pointcut.hpp"

namespace crx::pa {

// One advice, fully resolved: placement data and body from the concern
// program, pointcut from the plan.
struct BoundAdvice {
  minj::AdviceBinding binding;
  PcPtr pointcut;
};

// Selects the advice whose pointcut matches the description, in declaration
// order. Pure function of its inputs. An advice never selects its own
// execution join point: a bare adviceexecution() pointcut means "executions
// of other advice", otherwise it would trivially recurse into itself.
inline std::vector<BoundAdvice> match_advice(const minj::JoinPointDescription& desc,
                                             const std::vector<BoundAdvice>& all) {
  std::vector<BoundAdvice> selected;
  for (const BoundAdvice& a : all) {
    if (desc.kind == minj::CompKind::AdviceExecution &&
        desc.signature.type_name == a.binding.aspect &&
        desc.signature.member_name == a.binding.id)
      continue;
    if (matches(*a.pointcut, desc)) selected.push_back(a);
  }
  std::stable_sort(selected.begin(), selected.end(),
                   [](const BoundAdvice& x, const BoundAdvice& y) {
                     return x.binding.decl_order < y.binding.decl_order;
                   });
  return selected;
}

}  // namespace crx::pa
