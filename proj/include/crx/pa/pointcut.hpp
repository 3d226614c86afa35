#pragma once

#include <memory>
#include <string>
#include <variant>

#include "crx/minj/computation.hpp"

namespace crx::pa {

// `*` matches any run of characters; no other metacharacters.
inline bool glob_match(std::string_view pat, std::string_view text) {
  size_t p = 0, t = 0;
  size_t star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pat.size() && (pat[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pat.size() && pat[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pat.size() && pat[p] == '*') ++p;
  return p == pat.size();
}

struct Pointcut;
using PcPtr = std::shared_ptr<const Pointcut>;

struct SigPattern {
  std::string type_pat;
  std::string name_pat;
};

struct CallPc {
  SigPattern pat;
};
struct ExecutionPc {
  SigPattern pat;
};
struct AdviceExecutionPc {};
struct AndPc {
  PcPtr lhs, rhs;
};
struct OrPc {
  PcPtr lhs, rhs;
};
struct NotPc {
  PcPtr inner;
};

using PointcutNode = std::variant<CallPc, ExecutionPc, AdviceExecutionPc, AndPc, OrPc, NotPc>;

struct Pointcut {
  PointcutNode node;
};

inline PcPtr make_pc(PointcutNode node) {
  return std::make_shared<Pointcut>(Pointcut{std::move(node)});
}

// Pure predicate over a join point description: a function of the
// description and the pointcut alone.
inline bool matches(const Pointcut& pc, const minj::JoinPointDescription& desc) {
  using minj::CompKind;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CallPc>) {
          return desc.kind == CompKind::MethodCall &&
                 glob_match(x.pat.type_pat, desc.signature.type_name) &&
                 glob_match(x.pat.name_pat, desc.signature.member_name);
        } else if constexpr (std::is_same_v<T, ExecutionPc>) {
          return (desc.kind == CompKind::MethodExecution ||
                  desc.kind == CompKind::ConstructorExecution) &&
                 glob_match(x.pat.type_pat, desc.signature.type_name) &&
                 glob_match(x.pat.name_pat, desc.signature.member_name);
        } else if constexpr (std::is_same_v<T, AdviceExecutionPc>) {
          return desc.kind == CompKind::AdviceExecution;
        } else if constexpr (std::is_same_v<T, AndPc>) {
          return matches(*x.lhs, desc) && matches(*x.rhs, desc);
        } else if constexpr (std::is_same_v<T, OrPc>) {
          return matches(*x.lhs, desc) || matches(*x.rhs, desc);
        } else {
          return !matches(*x.inner, desc);
        }
      },
      pc.node);
}

inline bool equal(const Pointcut& a, const Pointcut& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, CallPc> || std::is_same_v<T, ExecutionPc>) {
          return x.pat.type_pat == y.pat.type_pat && x.pat.name_pat == y.pat.name_pat;
        } else if constexpr (std::is_same_v<T, AdviceExecutionPc>) {
          return true;
        } else if constexpr (std::is_same_v<T, NotPc>) {
          return equal(*x.inner, *y.inner);
        } else {
          return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
        }
      },
      a.node);
}

inline std::string render(const Pointcut& pc) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CallPc>)
          return "call(" + x.pat.type_pat + ", " + x.pat.name_pat + ")";
        else if constexpr (std::is_same_v<T, ExecutionPc>)
          return "execution(" + x.pat.type_pat + ", " + x.pat.name_pat + ")";
        else if constexpr (std::is_same_v<T, AdviceExecutionPc>)
          return "adviceexecution()";
        else if constexpr (std::is_same_v<T, AndPc>)
          return "(" + render(*x.lhs) + " && " + render(*x.rhs) + ")";
        else if constexpr (std::is_same_v<T, OrPc>)
          return "(" + render(*x.lhs) + " || " + render(*x.rhs) + ")";
        else
          return "!" + render(*x.inner);
      },
      pc.node);
}

}  // namespace crx::pa
