#include "primmdebug/session_log/replay.hpp"

#include "primmdebug/error.hpp"

namespace primmdebug {

std::optional<TransitionEvent> cause_of(const EventBody& body) {
  if (const auto* r = std::get_if<event::ResponseSubmitted>(&body)) {
    if (r->skip_inspect) return transition::SkipInspect{r->text};
    return transition::SubmitResponse{r->text};
  }
  if (const auto* run = std::get_if<event::ProgramRun>(&body)) {
    return transition::RunCompleted{run->snapshot};
  }
  if (const auto* sel = std::get_if<event::LineSelected>(&body)) {
    return transition::SelectLine{sel->line};
  }
  if (const auto* edit = std::get_if<event::ProgramEdited>(&body)) {
    return transition::SubmitFix{edit->new_text, edit->description};
  }
  if (const auto* outcome = std::get_if<event::TestOutcomeReported>(&body)) {
    auto next = next_step_from_string(outcome->next);
    if (!next) return std::nullopt;
    return transition::ReportOutcome{outcome->self_report, *next, outcome->harness_passed};
  }
  if (const auto* exited = std::get_if<event::StageExited>(&body)) {
    if (exited->trigger == "return_to_inspect") return transition::ReturnToInspect{};
    if (exited->trigger == "choose_extension" && exited->choice) {
      if (auto ext = extension_from_string(*exited->choice)) {
        return transition::ChooseExtension{*ext};
      }
    }
  }
  return std::nullopt;
}

ReplayResult replay(std::span<const SessionEvent> events, const Challenge& challenge) {
  ReplayResult result;
  for (const auto& e : events) {
    if (const auto* entered = std::get_if<event::StageEntered>(&e.body)) {
      result.recorded_stages.push_back(entered->stage);
    }
  }

  std::size_t pos = 0;
  auto consume = [&](const Transition& t) -> bool {
    for (std::size_t k = 0; k < t.events.size(); ++k) {
      if (const auto* entered = std::get_if<event::StageEntered>(&t.events[k])) {
        result.replayed_stages.push_back(entered->stage);
      }
      if (pos + k >= events.size()) {
        result.mismatch = "log ends inside a transition at event " + std::to_string(pos + k);
        return false;
      }
      if (!(t.events[k] == events[pos + k].body)) {
        result.mismatch = "event " + std::to_string(pos + k) + ": recorded " +
                          std::string(kind_name(events[pos + k].body)) + ", replayed " +
                          std::string(kind_name(t.events[k]));
        return false;
      }
    }
    pos += t.events.size();
    result.final_state = t.state;
    return true;
  };

  if (!consume(begin_session(challenge))) return result;
  while (pos < events.size()) {
    const auto cause = cause_of(events[pos].body);
    if (!cause) {
      result.mismatch = "event " + std::to_string(pos) + " (" +
                        std::string(kind_name(events[pos].body)) + ") cannot start a transition";
      return result;
    }
    Transition t;
    try {
      t = advance(result.final_state, *cause, challenge);
    } catch (const Error& e) {
      result.mismatch = "event " + std::to_string(pos) + " rejected: " + e.what();
      return result;
    }
    if (!consume(t)) return result;
  }
  result.matches = result.recorded_stages == result.replayed_stages;
  if (!result.matches) result.mismatch = "stage sequences differ";
  return result;
}

}  // namespace primmdebug
