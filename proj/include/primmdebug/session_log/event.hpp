#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "primmdebug/stages/stage.hpp"

namespace primmdebug {

// What gets recorded about one program execution.
struct RunSnapshot {
  std::string program;
  std::vector<std::string> stdin_lines;
  std::string stdout_text;
  std::string stderr_text;
  std::optional<std::string> error_message;
  std::string exit_status = "ok";

  bool operator==(const RunSnapshot&) const = default;
};

namespace event {

struct SessionStarted {
  bool operator==(const SessionStarted&) const = default;
};

struct StageEntered {
  Stage stage = Stage::kPredict;
  int iteration = 1;  // 1-based count of entries into this stage
  bool operator==(const StageEntered&) const = default;
};

// trigger names the transition event that caused the exit; choice carries
// the extension picked by choose_extension.
struct StageExited {
  Stage stage = Stage::kPredict;
  std::string trigger;
  std::optional<std::string> choice;
  bool operator==(const StageExited&) const = default;
};

struct ResponseSubmitted {
  Stage stage = Stage::kPredict;
  std::string text;
  bool skip_inspect = false;
  bool operator==(const ResponseSubmitted&) const = default;
};

struct ProgramRun {
  RunSnapshot snapshot;
  bool operator==(const ProgramRun&) const = default;
};

struct ProgramEdited {
  std::string new_text;
  std::string description;
  bool operator==(const ProgramEdited&) const = default;
};

struct LineSelected {
  int line = 0;
  bool correct = false;
  bool operator==(const LineSelected&) const = default;
};

struct HintShown {
  int index = 0;
  bool fallback = false;
  bool operator==(const HintShown&) const = default;
};

struct TestOutcomeReported {
  bool self_report = false;
  std::optional<bool> harness_passed;
  std::string next;  // inspect | fix | modify | make | finish
  bool operator==(const TestOutcomeReported&) const = default;
};

struct SessionEnded {
  std::string reason;
  bool operator==(const SessionEnded&) const = default;
};

}  // namespace event

using EventBody =
    std::variant<event::SessionStarted, event::StageEntered, event::StageExited,
                 event::ResponseSubmitted, event::ProgramRun, event::ProgramEdited,
                 event::LineSelected, event::HintShown, event::TestOutcomeReported,
                 event::SessionEnded>;

std::string_view kind_name(const EventBody& body);

struct SessionEvent {
  std::string session_id;
  std::optional<std::string> participant_id;
  std::string challenge_id;
  std::int64_t ts_ms = 0;  // UTC milliseconds
  EventBody body;

  bool operator==(const SessionEvent&) const = default;
};

nlohmann::json payload_to_json(const EventBody& body);
EventBody payload_from_json(std::string_view kind, const nlohmann::json& payload);

// One JSONL record: session_id, participant_id, challenge_id, ts_ms, kind,
// payload.
nlohmann::json to_json(const SessionEvent& event);
SessionEvent session_event_from_json(const nlohmann::json& record);

std::string encode_line(const SessionEvent& event);  // no trailing newline
SessionEvent decode_line(std::string_view line);

nlohmann::json snapshot_to_json(const RunSnapshot& snapshot);
RunSnapshot snapshot_from_json(const nlohmann::json& payload);

}  // namespace primmdebug
