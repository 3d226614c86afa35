#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "crx/minj/computation.hpp"

namespace crx::pa {

// A matched advice lowered to a runnable. `run` receives the arguments
// flowing at the join point and a proceed continuation; only around advice
// gets a non-empty continuation.
struct AdviceComputation {
  minj::AdviceKind kind = minj::AdviceKind::Before;
  int decl_order = 0;
  std::string advice_ref;
  std::function<minj::Value(const std::vector<minj::Value>&, const minj::ProceedFn&)> run;
};

// Combines advice computations with the join point computation. The core
// runs befores in declaration order, then the join point, then afters in
// reverse declaration order; arounds wrap the core with the earliest
// declared one outermost. An around that never proceeds skips everything
// inside it and its value becomes the join point's value. The composed
// computation keeps the identity of the one it replaces.
inline minj::Computation mix(std::vector<AdviceComputation> advice, minj::Computation x_jp) {
  std::stable_sort(advice.begin(), advice.end(),
                   [](const AdviceComputation& a, const AdviceComputation& b) {
                     return a.decl_order < b.decl_order;
                   });
  std::vector<AdviceComputation> befores, afters, arounds;
  for (AdviceComputation& a : advice) {
    if (a.kind == minj::AdviceKind::Before)
      befores.push_back(std::move(a));
    else if (a.kind == minj::AdviceKind::After)
      afters.push_back(std::move(a));
    else
      arounds.push_back(std::move(a));
  }

  minj::Computation composed = x_jp;
  std::function<minj::Value(const std::vector<minj::Value>&)> layer =
      [befores, afters, jp_run = x_jp.run](const std::vector<minj::Value>& args) {
        for (const AdviceComputation& b : befores) b.run(args, minj::ProceedFn{});
        minj::Value v = jp_run(args);
        for (auto it = afters.rbegin(); it != afters.rend(); ++it)
          it->run(args, minj::ProceedFn{});
        return v;
      };
  for (auto it = arounds.rbegin(); it != arounds.rend(); ++it) {
    AdviceComputation around = std::move(*it);
    std::function<minj::Value(const std::vector<minj::Value>&)> inner = std::move(layer);
    layer = [around, inner](const std::vector<minj::Value>& args) {
      return around.run(args, [inner](const std::vector<minj::Value>& pargs) {
        return inner(pargs);
      });
    };
  }
  composed.run = std::move(layer);
  return composed;
}

}  // namespace crx::pa
