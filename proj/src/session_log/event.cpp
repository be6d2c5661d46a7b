#include "primmdebug/session_log/event.hpp"

#include "primmdebug/error.hpp"

namespace primmdebug {
namespace {

using nlohmann::json;

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

Stage stage_at(const json& payload, const char* key) {
  auto stage = stage_from_string(payload.at(key).get<std::string>());
  if (!stage) {
    throw Error(ErrorCode::kSchema, "unknown stage '" + payload.at(key).get<std::string>() + "'");
  }
  return *stage;
}

json optional_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::string> optional_string(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return obj.at(key).get<std::string>();
}

}  // namespace

std::string_view kind_name(const EventBody& body) {
  return std::visit(
      overloaded{
          [](const event::SessionStarted&) { return std::string_view("SessionStarted"); },
          [](const event::StageEntered&) { return std::string_view("StageEntered"); },
          [](const event::StageExited&) { return std::string_view("StageExited"); },
          [](const event::ResponseSubmitted&) { return std::string_view("ResponseSubmitted"); },
          [](const event::ProgramRun&) { return std::string_view("ProgramRun"); },
          [](const event::ProgramEdited&) { return std::string_view("ProgramEdited"); },
          [](const event::LineSelected&) { return std::string_view("LineSelected"); },
          [](const event::HintShown&) { return std::string_view("HintShown"); },
          [](const event::TestOutcomeReported&) {
            return std::string_view("TestOutcomeReported");
          },
          [](const event::SessionEnded&) { return std::string_view("SessionEnded"); },
      },
      body);
}

json snapshot_to_json(const RunSnapshot& s) {
  return {{"program", s.program},
          {"stdin", s.stdin_lines},
          {"stdout", s.stdout_text},
          {"stderr", s.stderr_text},
          {"error_message", optional_json(s.error_message)},
          {"exit_status", s.exit_status}};
}

RunSnapshot snapshot_from_json(const json& p) {
  RunSnapshot s;
  s.program = p.at("program").get<std::string>();
  s.stdin_lines = p.at("stdin").get<std::vector<std::string>>();
  s.stdout_text = p.at("stdout").get<std::string>();
  s.stderr_text = p.at("stderr").get<std::string>();
  s.error_message = optional_string(p, "error_message");
  s.exit_status = p.value("exit_status", std::string("ok"));
  return s;
}

json payload_to_json(const EventBody& body) {
  return std::visit(
      overloaded{
          [](const event::SessionStarted&) { return json::object(); },
          [](const event::StageEntered& e) {
            return json{{"stage", to_string(e.stage)}, {"iteration", e.iteration}};
          },
          [](const event::StageExited& e) {
            json j = {{"stage", to_string(e.stage)}, {"trigger", e.trigger}};
            if (e.choice) j["choice"] = *e.choice;
            return j;
          },
          [](const event::ResponseSubmitted& e) {
            return json{{"stage", to_string(e.stage)},
                        {"text", e.text},
                        {"skip_inspect", e.skip_inspect}};
          },
          [](const event::ProgramRun& e) { return snapshot_to_json(e.snapshot); },
          [](const event::ProgramEdited& e) {
            return json{{"new_text", e.new_text}, {"description", e.description}};
          },
          [](const event::LineSelected& e) {
            return json{{"line", e.line}, {"correct", e.correct}};
          },
          [](const event::HintShown& e) {
            return json{{"index", e.index}, {"fallback", e.fallback}};
          },
          [](const event::TestOutcomeReported& e) {
            return json{{"self_report", e.self_report},
                        {"harness_passed", e.harness_passed ? json(*e.harness_passed)
                                                            : json(nullptr)},
                        {"next", e.next}};
          },
          [](const event::SessionEnded& e) { return json{{"reason", e.reason}}; },
      },
      body);
}

EventBody payload_from_json(std::string_view kind, const json& p) {
  try {
    if (kind == "SessionStarted") return event::SessionStarted{};
    if (kind == "StageEntered") {
      return event::StageEntered{stage_at(p, "stage"), p.at("iteration").get<int>()};
    }
    if (kind == "StageExited") {
      return event::StageExited{stage_at(p, "stage"), p.at("trigger").get<std::string>(),
                                optional_string(p, "choice")};
    }
    if (kind == "ResponseSubmitted") {
      return event::ResponseSubmitted{stage_at(p, "stage"), p.at("text").get<std::string>(),
                                      p.value("skip_inspect", false)};
    }
    if (kind == "ProgramRun") return event::ProgramRun{snapshot_from_json(p)};
    if (kind == "ProgramEdited") {
      return event::ProgramEdited{p.at("new_text").get<std::string>(),
                                  p.value("description", std::string())};
    }
    if (kind == "LineSelected") {
      return event::LineSelected{p.at("line").get<int>(), p.at("correct").get<bool>()};
    }
    if (kind == "HintShown") {
      return event::HintShown{p.at("index").get<int>(), p.value("fallback", false)};
    }
    if (kind == "TestOutcomeReported") {
      event::TestOutcomeReported e;
      e.self_report = p.at("self_report").get<bool>();
      if (p.contains("harness_passed") && !p.at("harness_passed").is_null()) {
        e.harness_passed = p.at("harness_passed").get<bool>();
      }
      e.next = p.value("next", std::string());
      return e;
    }
    if (kind == "SessionEnded") return event::SessionEnded{p.at("reason").get<std::string>()};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string(kind) + " payload: " + e.what());
  }
  throw Error(ErrorCode::kSchema, "unknown event kind '" + std::string(kind) + "'");
}

json to_json(const SessionEvent& e) {
  return {{"session_id", e.session_id},
          {"participant_id", optional_json(e.participant_id)},
          {"challenge_id", e.challenge_id},
          {"ts_ms", e.ts_ms},
          {"kind", kind_name(e.body)},
          {"payload", payload_to_json(e.body)}};
}

SessionEvent session_event_from_json(const json& r) {
  try {
    SessionEvent e;
    e.session_id = r.at("session_id").get<std::string>();
    e.participant_id = optional_string(r, "participant_id");
    e.challenge_id = r.at("challenge_id").get<std::string>();
    e.ts_ms = r.at("ts_ms").get<std::int64_t>();
    e.body = payload_from_json(r.at("kind").get<std::string>(), r.at("payload"));
    return e;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kSchema, std::string("event record: ") + ex.what());
  }
}

std::string encode_line(const SessionEvent& event) { return to_json(event).dump(); }

SessionEvent decode_line(std::string_view line) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  return session_event_from_json(record);
}

}  // namespace primmdebug
