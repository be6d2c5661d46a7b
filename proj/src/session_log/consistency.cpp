#include "primmdebug/session_log/consistency.hpp"

#include <optional>

#include "primmdebug/stages/stage.hpp"

namespace primmdebug {

std::vector<std::string> check_consistency(std::span<const SessionEvent> events) {
  std::vector<std::string> issues;
  Stage open_stage = Stage::kPredict;
  bool is_open = false;
  std::optional<std::int64_t> previous_ts;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const SessionEvent& e = events[i];
    const std::string where = "event " + std::to_string(i) + " (" + std::string(kind_name(e.body)) + ")";
    if (e.session_id != events.front().session_id) issues.push_back(where + ": foreign session");
    if (previous_ts && e.ts_ms < *previous_ts) issues.push_back(where + ": timestamp regression");
    previous_ts = e.ts_ms;

    if (const auto* entered = std::get_if<event::StageEntered>(&e.body)) {
      if (is_open) issues.push_back(where + ": " + std::string(to_string(open_stage)) + " still open");
      open_stage = entered->stage;
      is_open = true;
    } else if (const auto* exited = std::get_if<event::StageExited>(&e.body)) {
      if (!is_open || open_stage != exited->stage) {
        issues.push_back(where + ": exit does not match the open stage");
      }
      is_open = false;
    } else if (std::holds_alternative<event::ProgramRun>(e.body)) {
      if (!is_open) {
        issues.push_back(where + ": run outside any stage");
      } else if (!policy(open_stage).can_run) {
        issues.push_back(where + ": run during " + std::string(to_string(open_stage)));
      }
    } else if (std::holds_alternative<event::ProgramEdited>(e.body)) {
      if (!is_open) {
        issues.push_back(where + ": edit outside any stage");
      } else if (!policy(open_stage).can_edit) {
        issues.push_back(where + ": edit during " + std::string(to_string(open_stage)));
      }
    }
  }
  return issues;
}

}  // namespace primmdebug
