#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace crx::minj {

enum class EventKind {
  MethodCall,
  MethodExecution,
  ConstructorExecution,
  AdviceExecution,
  Print,
};

inline std::string_view event_name(EventKind k) {
  switch (k) {
    case EventKind::MethodCall: return "method-call";
    case EventKind::MethodExecution: return "method-execution";
    case EventKind::ConstructorExecution: return "constructor-execution";
    case EventKind::AdviceExecution: return "advice-execution";
    case EventKind::Print: return "print";
  }
  return "?";
}

// One entry per computation that actually ran (plus prints), stamped with
// the run's logical clock.
struct TraceEvent {
  long long time = 0;
  EventKind kind = EventKind::Print;
  std::string detail;  // signature ("Person.getName/0", "Log.trap") or printed text
};

using Trace = std::vector<TraceEvent>;

inline std::string format_event(const TraceEvent& e) {
  std::ostringstream out;
  out << "t=" << e.time << " " << event_name(e.kind) << " " << e.detail;
  return out.str();
}

inline std::string format_trace(const Trace& trace) {
  std::string out;
  for (const TraceEvent& e : trace) {
    out += format_event(e);
    out += "\n";
  }
  return out;
}

inline bool operator==(const TraceEvent& a, const TraceEvent& b) {
  return a.time == b.time && a.kind == b.kind && a.detail == b.detail;
}

}  // namespace crx::minj
