#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primmdebug/session_log/event.hpp"

namespace primmdebug {

// One visit to a stage, from StageEntered to StageExited.
struct StageInstance {
  Stage stage = Stage::kPredict;
  int iteration = 1;
  std::int64_t entered_ms = 0;
  std::int64_t exited_ms = 0;
  double dwell_seconds = 0.0;
  int run_count = 0;
  std::vector<std::string> responses;
  bool closed = false;  // false: clipped at session end

  bool has_articulated_response() const;
};

struct SessionSummary {
  std::string session_id;
  std::optional<std::string> participant_id;
  std::string challenge_id;
  std::vector<StageInstance> stages;
  std::vector<event::LineSelected> selections;
  std::optional<bool> first_selection_correct;
  std::optional<RunSnapshot> final_snapshot;  // last ProgramRun of the session
  std::optional<bool> final_harness_verdict;  // as recorded, not re-evaluated
  std::optional<bool> final_self_report;
  bool completed = false;  // a success was self-reported
  bool ended = false;      // SessionEnded seen
  int hints_shown = 0;
  double total_seconds = 0.0;
  double idle_gap_seconds = 0.0;  // time not inside any stage instance
};

// Folds one session's events into per-stage dwell times and counters.
// Error{kMalformedSession} on unmatched exits, nested entries, mixed sessions
// or timestamp regressions.
SessionSummary summarize(std::span<const SessionEvent> events);

}  // namespace primmdebug
