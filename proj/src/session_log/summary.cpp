#include "primmdebug/session_log/summary.hpp"

#include "primmdebug/error.hpp"
#include "primmdebug/stages/stage.hpp"

namespace primmdebug {
namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedSession, what);
}

double seconds_between(std::int64_t from_ms, std::int64_t to_ms) {
  return static_cast<double>(to_ms - from_ms) / 1000.0;
}

}  // namespace

bool StageInstance::has_articulated_response() const {
  for (const auto& r : responses) {
    if (validate_articulation(r)) return true;
  }
  return false;
}

SessionSummary summarize(std::span<const SessionEvent> events) {
  if (events.empty()) malformed("no events");
  SessionSummary s;
  s.session_id = events.front().session_id;
  s.participant_id = events.front().participant_id;
  s.challenge_id = events.front().challenge_id;

  std::optional<StageInstance> open;
  std::int64_t previous_ts = events.front().ts_ms;
  std::int64_t end_ts = events.back().ts_ms;

  for (const SessionEvent& e : events) {
    if (e.session_id != s.session_id) malformed("events from more than one session");
    if (e.ts_ms < previous_ts) malformed("timestamps go backwards");
    previous_ts = e.ts_ms;

    if (const auto* entered = std::get_if<event::StageEntered>(&e.body)) {
      if (open) malformed("entered " + std::string(to_string(entered->stage)) +
                          " before leaving " + std::string(to_string(open->stage)));
      open = StageInstance{entered->stage, entered->iteration, e.ts_ms, e.ts_ms, 0.0, 0, {}, false};
    } else if (const auto* exited = std::get_if<event::StageExited>(&e.body)) {
      if (!open || open->stage != exited->stage) {
        malformed("unmatched exit from " + std::string(to_string(exited->stage)));
      }
      open->exited_ms = e.ts_ms;
      open->dwell_seconds = seconds_between(open->entered_ms, e.ts_ms);
      open->closed = true;
      s.stages.push_back(std::move(*open));
      open.reset();
    } else if (const auto* response = std::get_if<event::ResponseSubmitted>(&e.body)) {
      if (open) open->responses.push_back(response->text);
    } else if (const auto* run = std::get_if<event::ProgramRun>(&e.body)) {
      if (open) ++open->run_count;
      s.final_snapshot = run->snapshot;
    } else if (const auto* selected = std::get_if<event::LineSelected>(&e.body)) {
      if (s.selections.empty()) s.first_selection_correct = selected->correct;
      s.selections.push_back(*selected);
    } else if (std::holds_alternative<event::HintShown>(e.body)) {
      ++s.hints_shown;
    } else if (const auto* outcome = std::get_if<event::TestOutcomeReported>(&e.body)) {
      s.final_self_report = outcome->self_report;
      s.final_harness_verdict = outcome->harness_passed;
      s.completed = s.completed || outcome->self_report;
    } else if (std::holds_alternative<event::SessionEnded>(e.body)) {
      s.ended = true;
      end_ts = e.ts_ms;
    }
  }

  if (open) {
    open->exited_ms = end_ts;
    open->dwell_seconds = seconds_between(open->entered_ms, end_ts);
    s.stages.push_back(std::move(*open));
  }

  s.total_seconds = seconds_between(events.front().ts_ms, events.back().ts_ms);
  double in_stage = 0.0;
  for (const auto& inst : s.stages) in_stage += inst.dwell_seconds;
  s.idle_gap_seconds = s.total_seconds - in_stage;
  return s;
}

}  // namespace primmdebug
