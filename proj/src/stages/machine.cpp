#include "primmdebug/stages/machine.hpp"

#include <algorithm>

#include "primmdebug/error.hpp"

namespace primmdebug {
namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

[[noreturn]] void illegal(const SessionState& s, std::string_view what) {
  throw Error(ErrorCode::kIllegalEvent,
              std::string(what) + " is not permitted at " + std::string(to_string(s.stage)));
}

void require_articulation(std::string_view text) {
  if (!validate_articulation(text)) {
    throw Error(ErrorCode::kArticulationRejected,
                "responses must contain at least one letter or number");
  }
}

// Builds one transition: collects emitted events while the state changes.
class Step {
 public:
  explicit Step(const SessionState& from) : state_(from) {}

  SessionState& state() { return state_; }

  void emit(EventBody body) { events_.push_back(std::move(body)); }

  void leave(std::string_view trigger, std::optional<std::string> choice = std::nullopt) {
    emit(event::StageExited{state_.stage, std::string(trigger), std::move(choice)});
  }

  void enter(Stage next) {
    state_.stage = next;
    const int iteration = ++state_.stage_entries[stage_index(next)];
    if (next == Stage::kFindTheError) state_.last_selection_incorrect = false;
    emit(event::StageEntered{next, iteration});
  }

  void move(std::string_view trigger, Stage next,
            std::optional<std::string> choice = std::nullopt) {
    leave(trigger, std::move(choice));
    enter(next);
  }

  void finish(std::string_view trigger, std::optional<std::string> choice = std::nullopt) {
    leave(trigger, std::move(choice));
    state_.finished = true;
    state_.finished_at_stage = state_.stage;
    emit(event::SessionEnded{"completed"});
  }

  void show_hint(const Challenge& challenge) {
    ++state_.hints_shown;
    const bool fallback = challenge.hints.empty();
    const int last = fallback ? 0 : static_cast<int>(challenge.hints.size()) - 1;
    emit(event::HintShown{std::min(state_.hints_shown - 1, last), fallback});
  }

  Transition done() && { return {std::move(state_), std::move(events_)}; }

 private:
  SessionState state_;
  std::vector<EventBody> events_;
};

Transition on_response(const SessionState& s, const transition::SubmitResponse& ev,
                       const Challenge& challenge) {
  Step step(s);
  const std::string_view trigger = "submit_response";
  const StagePolicy pol = policy(s.stage);
  if (pol.response == ResponseRequirement::kNone) illegal(s, "a response");
  if (pol.response_kind == ResponseKind::kSelfReport) illegal(s, "a free-text response");
  if (s.stage == Stage::kFindTheError && challenge.error_spec.single_line) {
    illegal(s, "a free-text location for a single-line error");
  }
  if (pol.response == ResponseRequirement::kRequired) require_articulation(ev.text);

  step.emit(event::ResponseSubmitted{s.stage, ev.text, false});
  switch (s.stage) {
    case Stage::kPredict:
      step.state().predictions.push_back(ev.text);
      step.move(trigger, Stage::kRun);
      break;
    case Stage::kSpotTheDefect:
      step.move(trigger, Stage::kInspectTheCode);
      break;
    case Stage::kInspectTheCode:
      if (validate_articulation(ev.text)) step.state().hypotheses.push_back(ev.text);
      step.move(trigger, Stage::kFindTheError);
      break;
    case Stage::kFindTheError:  // multi-line errors: no correctness check
      step.move(trigger, Stage::kFixTheError);
      break;
    case Stage::kModify:  // optional description, stays put
      break;
    default:
      illegal(s, "a response");
  }
  return std::move(step).done();
}

Transition on_run_completed(const SessionState& s, const transition::RunCompleted& ev,
                            const Challenge& challenge) {
  Step step(s);
  step.emit(event::ProgramRun{ev.snapshot});
  if (s.stage == Stage::kRun) {
    auto& st = step.state();
    st.observed_outputs.push_back(ev.snapshot.stdout_text);
    if (st.test_case_cursor + 1 < challenge.test_cases.size()) {
      ++st.test_case_cursor;
      step.move("run_completed", Stage::kPredict);
    } else {
      step.move("run_completed", Stage::kSpotTheDefect);
    }
  }
  return std::move(step).done();
}

Transition on_select_line(const SessionState& s, const transition::SelectLine& ev,
                          const Challenge& challenge) {
  if (s.stage != Stage::kFindTheError) illegal(s, "selecting a line");
  if (!challenge.error_spec.single_line) illegal(s, "selecting a line for a multi-line error");
  const LocalisationResult result = check_localisation(s, challenge, ev.line);

  Step step(s);
  step.emit(event::LineSelected{ev.line, result.correct});
  if (result.correct) {
    step.state().localised = true;
    step.move("select_line", Stage::kFixTheError);
  } else {
    ++step.state().find_attempts;
    step.state().last_selection_incorrect = true;
    step.show_hint(challenge);
  }
  return std::move(step).done();
}

Transition on_fix(const SessionState& s, const transition::SubmitFix& ev) {
  Step step(s);
  step.state() = apply_fix(s, ev.new_program, ev.description);
  step.emit(event::ProgramEdited{ev.new_program, ev.description});
  if (s.stage == Stage::kFixTheError) step.move("submit_fix", Stage::kTest);
  return std::move(step).done();
}

Transition on_outcome(const SessionState& s, const transition::ReportOutcome& ev,
                      const Challenge& challenge) {
  if (s.stage != Stage::kTest) illegal(s, "reporting a test outcome");
  const bool failure_step = ev.next == NextStep::kInspect || ev.next == NextStep::kFix;
  if (ev.success == failure_step) {
    throw Error(ErrorCode::kIllegalEvent, "next step '" + std::string(to_string(ev.next)) +
                                              "' does not follow a reported " +
                                              (ev.success ? "success" : "failure"));
  }

  Step step(s);
  const std::string_view trigger = "report_outcome";
  step.emit(event::TestOutcomeReported{ev.success, ev.harness_passed,
                                       std::string(to_string(ev.next))});
  auto& st = step.state();
  if (!ev.success) {
    ++st.fix_attempts;
    st.working_program = st.original_program;
    step.move(trigger, ev.next == NextStep::kInspect ? Stage::kInspectTheCode
                                                     : Stage::kFixTheError);
    step.show_hint(challenge);
    return std::move(step).done();
  }

  st.completed = true;
  switch (ev.next) {
    case NextStep::kModify: step.move(trigger, Stage::kModify); break;
    case NextStep::kMake: step.move(trigger, Stage::kMake); break;
    default: step.finish(trigger); break;
  }
  return std::move(step).done();
}

Transition on_extension(const SessionState& s, const transition::ChooseExtension& ev) {
  Step step(s);
  const std::string choice(to_string(ev.choice));
  if (s.stage == Stage::kModify && ev.choice == Extension::kMake) {
    step.move("choose_extension", Stage::kMake, choice);
  } else if (s.stage == Stage::kMake && ev.choice == Extension::kFinish) {
    step.finish("choose_extension", choice);
  } else {
    illegal(s, "choosing '" + choice + "'");
  }
  return std::move(step).done();
}

}  // namespace

std::string_view to_string(NextStep step) {
  switch (step) {
    case NextStep::kInspect: return "inspect";
    case NextStep::kFix: return "fix";
    case NextStep::kModify: return "modify";
    case NextStep::kMake: return "make";
    case NextStep::kFinish: return "finish";
  }
  return "?";
}

std::optional<NextStep> next_step_from_string(std::string_view name) {
  for (NextStep s : {NextStep::kInspect, NextStep::kFix, NextStep::kModify, NextStep::kMake,
                     NextStep::kFinish}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view to_string(Extension ext) {
  switch (ext) {
    case Extension::kModify: return "modify";
    case Extension::kMake: return "make";
    case Extension::kFinish: return "finish";
  }
  return "?";
}

std::optional<Extension> extension_from_string(std::string_view name) {
  for (Extension e : {Extension::kModify, Extension::kMake, Extension::kFinish}) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

std::string_view trigger_name(const TransitionEvent& event) {
  return std::visit(
      overloaded{
          [](const transition::SubmitResponse&) { return std::string_view("submit_response"); },
          [](const transition::RunRequested&) { return std::string_view("run_requested"); },
          [](const transition::RunCompleted&) { return std::string_view("run_completed"); },
          [](const transition::SelectLine&) { return std::string_view("select_line"); },
          [](const transition::ReturnToInspect&) {
            return std::string_view("return_to_inspect");
          },
          [](const transition::SubmitFix&) { return std::string_view("submit_fix"); },
          [](const transition::ReportOutcome&) { return std::string_view("report_outcome"); },
          [](const transition::SkipInspect&) { return std::string_view("skip_inspect"); },
          [](const transition::ChooseExtension&) {
            return std::string_view("choose_extension");
          },
      },
      event);
}

Transition begin_session(const Challenge& challenge) {
  SessionState s;
  s.challenge_id = challenge.id;
  s.original_program = challenge.program;
  s.working_program = challenge.program;
  Step step(s);
  step.emit(event::SessionStarted{});
  step.enter(Stage::kPredict);
  return std::move(step).done();
}

Transition advance(const SessionState& state, const TransitionEvent& event,
                   const Challenge& challenge) {
  if (state.finished) {
    throw Error(ErrorCode::kIllegalEvent, "the session has already finished");
  }
  const StagePolicy pol = policy(state.stage);
  return std::visit(
      overloaded{
          [&](const transition::SubmitResponse& ev) { return on_response(state, ev, challenge); },
          [&](const transition::RunRequested&) {
            if (!pol.can_run) {
              throw Error(ErrorCode::kRunRejected,
                          "the program cannot be run at " + std::string(to_string(state.stage)));
            }
            return Transition{state, {}};
          },
          [&](const transition::RunCompleted& ev) {
            if (!pol.can_run) {
              throw Error(ErrorCode::kRunRejected,
                          "the program cannot be run at " + std::string(to_string(state.stage)));
            }
            return on_run_completed(state, ev, challenge);
          },
          [&](const transition::SelectLine& ev) { return on_select_line(state, ev, challenge); },
          [&](const transition::ReturnToInspect&) {
            if (state.stage != Stage::kFindTheError || !state.last_selection_incorrect) {
              illegal(state, "returning to Inspect the Code");
            }
            Step step(state);
            step.move("return_to_inspect", Stage::kInspectTheCode);
            return std::move(step).done();
          },
          [&](const transition::SubmitFix& ev) { return on_fix(state, ev); },
          [&](const transition::ReportOutcome& ev) { return on_outcome(state, ev, challenge); },
          [&](const transition::SkipInspect& ev) {
            if (state.stage != Stage::kSpotTheDefect || !challenge.syntax_error_flag) {
              illegal(state, "skipping Inspect the Code");
            }
            require_articulation(ev.text);
            Step step(state);
            step.emit(event::ResponseSubmitted{state.stage, ev.text, true});
            step.move("skip_inspect", Stage::kFindTheError);
            return std::move(step).done();
          },
          [&](const transition::ChooseExtension& ev) { return on_extension(state, ev); },
      },
      event);
}

LocalisationResult check_localisation(const SessionState& state, const Challenge& challenge,
                                      int line) {
  if (!challenge.error_spec.single_line || challenge.error_spec.line_numbers.size() != 1) {
    throw Error(ErrorCode::kPrecondition, "line checks apply to single-line errors only");
  }
  if (state.stage != Stage::kFindTheError) {
    throw Error(ErrorCode::kPrecondition, "line checks happen at FindTheError");
  }
  const int lines = line_count(state.original_program);
  if (line < 1 || line > lines) {
    throw Error(ErrorCode::kOutOfRange, "line " + std::to_string(line) +
                                            " is outside the program (1-" +
                                            std::to_string(lines) + ")");
  }
  if (line == challenge.error_spec.line_numbers.front()) return {true, std::nullopt};
  return {false, hint_at(challenge, state.hints_shown)};
}

SessionState apply_fix(const SessionState& state, std::string new_program,
                       std::string_view description) {
  if (state.finished || !policy(state.stage).can_edit) {
    throw Error(ErrorCode::kEditRejected,
                "the program cannot be edited at " + std::string(to_string(state.stage)));
  }
  if (policy(state.stage).response == ResponseRequirement::kRequired) {
    require_articulation(description);
  }
  SessionState next = state;
  next.working_program = std::move(new_program);
  return next;
}

std::vector<std::string> visible_hints(const SessionState& state, const Challenge& challenge) {
  std::vector<std::string> out;
  if (state.hints_shown <= 0) return out;
  if (challenge.hints.empty()) {
    out.emplace_back(kFallbackHint);
    return out;
  }
  const auto n = std::min(static_cast<std::size_t>(state.hints_shown), challenge.hints.size());
  out.assign(challenge.hints.begin(), challenge.hints.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

}  // namespace primmdebug
