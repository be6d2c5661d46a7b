#include "primmdebug/service/session_service.hpp"

#include <chrono>
#include <cstdio>

#include "primmdebug/error.hpp"
#include "primmdebug/session_log/replay.hpp"
#include "primmdebug/stages/messages.hpp"

namespace primmdebug {
namespace {

using json = nlohmann::json;

json string_list(const std::vector<std::string>& xs) { return json(xs); }

template <class T>
T field(const json& action, const char* key) {
  if (!action.contains(key)) {
    throw Error(ErrorCode::kSchema, std::string("action is missing '") + key + "'");
  }
  try {
    return action.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kSchema, std::string("action field '") + key + "' has the wrong type");
  }
}

TransitionEvent parse_action(const json& action) {
  if (!action.is_object()) throw Error(ErrorCode::kSchema, "action must be a JSON object");
  const auto type = field<std::string>(action, "type");
  if (type == "submit_response") return transition::SubmitResponse{field<std::string>(action, "text")};
  if (type == "skip_inspect") return transition::SkipInspect{field<std::string>(action, "text")};
  if (type == "select_line") return transition::SelectLine{field<int>(action, "line")};
  if (type == "return_to_inspect") return transition::ReturnToInspect{};
  if (type == "submit_fix") {
    std::string description =
        action.contains("description") ? field<std::string>(action, "description") : "";
    return transition::SubmitFix{field<std::string>(action, "program"), std::move(description)};
  }
  if (type == "report_outcome") {
    const auto next_name = field<std::string>(action, "next");
    const auto next = next_step_from_string(next_name);
    if (!next) throw Error(ErrorCode::kSchema, "unknown next step '" + next_name + "'");
    return transition::ReportOutcome{field<bool>(action, "success"), *next, std::nullopt};
  }
  if (type == "choose_extension") {
    const auto choice_name = field<std::string>(action, "choice");
    const auto choice = extension_from_string(choice_name);
    if (!choice) throw Error(ErrorCode::kSchema, "unknown extension '" + choice_name + "'");
    return transition::ChooseExtension{*choice};
  }
  throw Error(ErrorCode::kSchema, "unknown action type '" + type + "'");
}

json run_view(const RunResult& r) {
  return {{"stdout", r.stdout_text},
          {"stderr", r.stderr_text},
          {"error_message", r.error_message ? json(*r.error_message) : json(nullptr)},
          {"exit_status", std::string(to_string(r.exit_status))},
          {"duration_seconds", r.duration_seconds},
          {"output_truncated", r.output_truncated}};
}

std::string hint_text(const Challenge& challenge, const event::HintShown& h) {
  if (h.fallback || challenge.hints.empty()) return std::string(kFallbackHint);
  return challenge.hints.at(std::min<std::size_t>(static_cast<std::size_t>(h.index),
                                                  challenge.hints.size() - 1));
}

}  // namespace

std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

json challenge_view(const Challenge& c) {
  json cases = json::array();
  for (const auto& tc : c.test_cases) {
    cases.push_back({{"inputs", tc.inputs}, {"expected_output", tc.expected_output}});
  }
  return {{"id", c.id},
          {"title", c.title},
          {"difficulty", c.difficulty},
          {"description", c.description},
          {"language_tag", c.language_tag},
          {"line_count", line_count(c.program)},
          {"test_cases", std::move(cases)}};
}

SessionService::SessionService(ServiceConfig config, Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      store_(config_.data_dir, config_.sync_writes),
      harness_(run_defaults(config_)),
      id_rng_(std::random_device{}()) {
  std::vector<LoadWarning> load_warnings;
  catalog_ = load_catalog(config_.challenge_dir, &load_warnings);
  for (const auto& w : load_warnings) warnings_.push_back(w.path.string() + ": " + w.message);
}

std::vector<std::string> SessionService::warnings() const {
  std::lock_guard lock(misc_mutex_);
  return warnings_;
}

std::size_t SessionService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

json SessionService::list_challenges() const {
  std::vector<const Challenge*> ordered;
  for (const auto& [id, c] : catalog_) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(), [](const Challenge* a, const Challenge* b) {
    return std::tie(a->difficulty, a->title, a->id) < std::tie(b->difficulty, b->title, b->id);
  });
  json out = json::array();
  for (const Challenge* c : ordered) {
    out.push_back({{"id", c->id},
                   {"title", c->title},
                   {"difficulty", c->difficulty},
                   {"description", c->description},
                   {"test_case_count", c->test_cases.size()}});
  }
  return out;
}

std::string SessionService::new_session_id() {
  std::lock_guard lock(misc_mutex_);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(id_rng_()),
                static_cast<unsigned long long>(id_rng_()));
  return buf;
}

std::shared_ptr<SessionService::Session> SessionService::find(std::string_view session_id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kUnknownSession, "no session '" + std::string(session_id) + "'");
  }
  return it->second;
}

void SessionService::record(Session& session, const std::vector<EventBody>& events) {
  if (!session.participant_id) return;
  for (const auto& body : events) {
    session.last_ts = std::max(session.last_ts, clock_());
    store_.append(SessionEvent{session.id, session.participant_id, session.challenge->id,
                               session.last_ts, body});
  }
}

void SessionService::refresh_harness(Session& session) {
  session.harness_passed.reset();
  if (session.state.stage != Stage::kTest || session.challenge->test_cases.empty()) return;
  try {
    session.harness_passed = harness_.passes(*session.challenge, session.state.working_program);
  } catch (const Error& e) {
    std::lock_guard lock(misc_mutex_);
    warnings_.push_back("harness for session " + session.id + ": " + e.what());
  }
}

json SessionService::handle(const Session& s) const {
  const Challenge& c = *s.challenge;
  const SessionState& st = s.state;
  const StagePolicy pol = policy(st.stage);

  json current = nullptr;
  if (st.test_case_cursor < c.test_cases.size() &&
      (st.stage == Stage::kPredict || st.stage == Stage::kRun)) {
    const auto& tc = c.test_cases[st.test_case_cursor];
    current = {{"index", st.test_case_cursor},
               {"inputs", tc.inputs},
               {"expected_output", tc.expected_output}};
  }

  json h = {
      {"session_id", s.id},
      {"challenge", challenge_view(c)},
      {"stage", std::string(to_string(st.stage))},
      {"stage_title", std::string(messages::stage_title(st.stage))},
      {"policy",
       {{"can_run", pol.can_run},
        {"can_edit", pol.can_edit},
        {"response", std::string(to_string(pol.response))},
        {"response_kind", std::string(to_string(pol.response_kind))}}},
      {"prompt", st.finished ? std::string() : messages::stage_prompt(st, c)},
      {"cursor", st.test_case_cursor},
      {"current_test_case", current},
      {"predictions", string_list(st.predictions)},
      {"observed_outputs", string_list(st.observed_outputs)},
      {"hypotheses", string_list(st.hypotheses)},
      {"hints", string_list(visible_hints(st, c))},
      {"find_mode", c.error_spec.single_line ? "line_select" : "free_text"},
      {"program", st.working_program},
      {"editable", pol.can_edit},
      {"runnable", pol.can_run},
      {"can_skip_inspect", st.stage == Stage::kSpotTheDefect && c.syntax_error_flag},
      {"can_return_to_inspect", st.stage == Stage::kFindTheError && st.last_selection_incorrect},
      {"find_attempts", st.find_attempts},
      {"fix_attempts", st.fix_attempts},
      {"completed", st.completed},
      {"finished", st.finished},
      {"logging", s.participant_id.has_value()},
  };
  if (st.stage == Stage::kTest) {
    h["harness"] = {{"passed", s.harness_passed ? json(*s.harness_passed) : json(nullptr)}};
  }
  if (st.stage == Stage::kModify && c.modify_prompt) h["modify_prompt"] = *c.modify_prompt;
  return h;
}

json SessionService::start_session(std::string_view challenge_id,
                                   std::optional<std::string> participant_id) {
  if (participant_id && participant_id->empty()) participant_id.reset();
  if (config_.research_mode && !participant_id) {
    throw Error(ErrorCode::kSchema, "a participant id is required in research mode");
  }
  auto it = catalog_.find(challenge_id);
  if (it == catalog_.end()) {
    throw Error(ErrorCode::kUnknownChallenge, "no challenge '" + std::string(challenge_id) + "'");
  }

  auto session = std::make_shared<Session>();
  session->id = new_session_id();
  session->participant_id = std::move(participant_id);
  session->challenge = &it->second;
  Transition t = begin_session(it->second);
  std::lock_guard session_lock(session->mutex);
  record(*session, t.events);
  session->state = std::move(t.state);
  {
    std::unique_lock lock(sessions_mutex_);
    sessions_.emplace(session->id, session);
  }
  return handle(*session);
}

json SessionService::get_session(std::string_view session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return handle(*session);
}

json SessionService::submit(std::string_view session_id, const json& action) {
  if (action.is_object() && action.value("type", "") == "run_requested") {
    std::optional<std::vector<std::string>> stdin_lines;
    if (action.contains("stdin")) stdin_lines = field<std::vector<std::string>>(action, "stdin");
    return run(session_id, std::move(stdin_lines));
  }
  TransitionEvent event = parse_action(action);
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  if (auto* outcome = std::get_if<transition::ReportOutcome>(&event)) {
    outcome->harness_passed = session->harness_passed;
  }
  Transition t = advance(session->state, event, *session->challenge);
  record(*session, t.events);
  session->state = std::move(t.state);
  refresh_harness(*session);

  json feedback = {{"new_hints", json::array()}};
  for (const auto& body : t.events) {
    if (const auto* hint = std::get_if<event::HintShown>(&body)) {
      feedback["new_hints"].push_back(hint_text(*session->challenge, *hint));
    } else if (const auto* sel = std::get_if<event::LineSelected>(&body)) {
      feedback["selection_correct"] = sel->correct;
    }
  }
  json h = handle(*session);
  h["feedback"] = std::move(feedback);
  return h;
}

json SessionService::run(std::string_view session_id,
                         std::optional<std::vector<std::string>> stdin_lines) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  advance(session->state, transition::RunRequested{}, *session->challenge);

  const SessionState& st = session->state;
  const Challenge& c = *session->challenge;
  if (!stdin_lines) {
    stdin_lines = std::vector<std::string>{};
    if (st.stage == Stage::kRun && st.test_case_cursor < c.test_cases.size()) {
      *stdin_lines = c.test_cases[st.test_case_cursor].inputs;
    }
  }
  RunRequest req = run_defaults(config_);
  req.program = st.working_program;
  req.stdin_lines = *stdin_lines;
  const RunResult result = primmdebug::run(req);

  RunSnapshot snap{st.working_program, *stdin_lines, result.stdout_text, result.stderr_text,
                   result.error_message, std::string(to_string(result.exit_status))};
  Transition t = advance(st, transition::RunCompleted{std::move(snap)}, c);
  record(*session, t.events);
  session->state = std::move(t.state);
  refresh_harness(*session);
  return {{"run", run_view(result)}, {"session", handle(*session)}};
}

std::size_t SessionService::recover() {
  std::size_t restored = 0;
  std::vector<std::string> unreadable;
  auto logs = read_all_sessions(config_.data_dir, &unreadable);
  if (!unreadable.empty()) {
    std::lock_guard lock(misc_mutex_);
    for (auto& u : unreadable) warnings_.push_back(u + " (not recovered)");
  }
  for (auto& loaded : logs) {
    const std::string name = loaded.file.filename().string();
    if (loaded.events.empty()) continue;
    const SessionEvent& first = loaded.events.front();
    {
      std::shared_lock lock(sessions_mutex_);
      if (sessions_.contains(first.session_id)) continue;
    }
    auto it = catalog_.find(first.challenge_id);
    std::string problem;
    if (it == catalog_.end()) {
      problem = "unknown challenge '" + first.challenge_id + "'";
    } else {
      try {
        ReplayResult r = replay(loaded.events, it->second);
        if (!r.matches) {
          problem = "replay diverged: " + r.mismatch;
        } else {
          auto session = std::make_shared<Session>();
          session->id = first.session_id;
          session->participant_id = first.participant_id;
          session->challenge = &it->second;
          session->state = std::move(r.final_state);
          session->last_ts = loaded.events.back().ts_ms;
          refresh_harness(*session);
          std::unique_lock lock(sessions_mutex_);
          sessions_.emplace(session->id, std::move(session));
          ++restored;
        }
      } catch (const Error& e) {
        problem = e.what();
      }
    }
    if (!problem.empty()) {
      std::lock_guard lock(misc_mutex_);
      warnings_.push_back(name + ": not recovered: " + problem);
    }
  }
  return restored;
}

}  // namespace primmdebug
