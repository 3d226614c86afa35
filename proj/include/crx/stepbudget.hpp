#pragma once

#include <string>

#include "crx/error.hpp"

namespace crx {

inline constexpr long long kDefaultStepBudget = 1'000'000;
inline constexpr int kMaxEvalDepth = 1000;

// Nontermination guard. Steps meter expression evaluation and composition
// work; the depth ceiling catches runaway recursion before the native stack
// does. Both raise the same error kind.
class StepBudget {
 public:
  explicit StepBudget(long long limit = kDefaultStepBudget) : limit_(limit) {}

  void tick() {
    if (++used_ > limit_)
      throw Error(ErrorKind::StepBudgetExceeded,
                  "step budget of " + std::to_string(limit_) + " exhausted");
  }

  long long used() const { return used_; }
  long long limit() const { return limit_; }

  class Frame {
   public:
    explicit Frame(StepBudget& b) : budget_(b) {
      if (++budget_.depth_ > kMaxEvalDepth)
        throw Error(ErrorKind::StepBudgetExceeded,
                    "evaluation depth limit of " + std::to_string(kMaxEvalDepth) + " exceeded");
    }
    ~Frame() { --budget_.depth_; }
    Frame(const Frame&) = delete;
    Frame& operator=(const Frame&) = delete;

   private:
    StepBudget& budget_;
  };

 private:
  long long limit_;
  long long used_ = 0;
  int depth_ = 0;
};

}  // namespace crx
