#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "primmdebug/challenge/challenge.hpp"
#include "primmdebug/session_log/event.hpp"
#include "primmdebug/stages/stage.hpp"

namespace primmdebug {

// Progress of one student through one challenge. Transitions are pure:
// advance() never mutates its input.
struct SessionState {
  std::string challenge_id;
  Stage stage = Stage::kPredict;
  std::size_t test_case_cursor = 0;
  std::string working_program;
  std::string original_program;
  std::vector<std::string> predictions;       // one per completed Predict stage
  std::vector<std::string> observed_outputs;  // stdout of each Run-stage run
  std::vector<std::string> hypotheses;        // articulated Inspect responses
  int find_attempts = 0;  // incorrect line selections
  int fix_attempts = 0;   // Test stages ending in a reported failure
  int hints_shown = 0;
  bool localised = false;                 // a correct line has been selected
  bool last_selection_incorrect = false;  // within the current Find stage
  bool completed = false;                 // success was reported at Test
  bool finished = false;                  // terminal; no further events
  std::optional<Stage> finished_at_stage;
  std::array<int, 9> stage_entries{};  // entries per stage, by stage_index()

  bool operator==(const SessionState&) const = default;
};

enum class NextStep { kInspect, kFix, kModify, kMake, kFinish };
enum class Extension { kModify, kMake, kFinish };

std::string_view to_string(NextStep step);
std::optional<NextStep> next_step_from_string(std::string_view name);
std::string_view to_string(Extension ext);
std::optional<Extension> extension_from_string(std::string_view name);

namespace transition {

struct SubmitResponse {
  std::string text;
};
// Permission check only; the caller performs the run and reports it with
// RunCompleted.
struct RunRequested {};
struct RunCompleted {
  RunSnapshot snapshot;
};
struct SelectLine {
  int line = 0;
};
// Back from Find to Inspect after an incorrect selection.
struct ReturnToInspect {};
struct SubmitFix {
  std::string new_program;
  std::string description;
};
struct ReportOutcome {
  bool success = false;
  NextStep next = NextStep::kInspect;
  std::optional<bool> harness_passed;  // filled in by the engine, not the student
};
// Spot-the-defect response that also skips Inspect (syntax-error challenges).
struct SkipInspect {
  std::string text;
};
struct ChooseExtension {
  Extension choice = Extension::kMake;
};

}  // namespace transition

using TransitionEvent =
    std::variant<transition::SubmitResponse, transition::RunRequested, transition::RunCompleted,
                 transition::SelectLine, transition::ReturnToInspect, transition::SubmitFix,
                 transition::ReportOutcome, transition::SkipInspect,
                 transition::ChooseExtension>;

std::string_view trigger_name(const TransitionEvent& event);

struct Transition {
  SessionState state;
  std::vector<EventBody> events;  // in emission order, the first one names the cause
};

// Initial state at Predict with the SessionStarted/StageEntered pair.
Transition begin_session(const Challenge& challenge);

// Applies one event. Throws Error with kIllegalEvent, kArticulationRejected,
// kEditRejected, kRunRejected or kOutOfRange; state is untouched on error.
Transition advance(const SessionState& state, const TransitionEvent& event,
                   const Challenge& challenge);

struct LocalisationResult {
  bool correct = false;
  std::optional<std::string> hint;  // the hint the next render will show
};

// Forced localisation check for single-line challenges at FindTheError.
LocalisationResult check_localisation(const SessionState& state, const Challenge& challenge,
                                      int line);

// Replaces the working program. Allowed in FixTheError (description must be
// articulated), Modify and Make.
SessionState apply_fix(const SessionState& state, std::string new_program,
                       std::string_view description);

// Hints earned so far, clamped to the authored list (or the fallback).
std::vector<std::string> visible_hints(const SessionState& state, const Challenge& challenge);

}  // namespace primmdebug
