#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "primmdebug/challenge/challenge.hpp"
#include "primmdebug/stages/stage.hpp"

namespace primmdebug::sim {

// Known edits of a challenge program with their harness verdict pinned.
struct FixVariant {
  std::string program;
  bool passes = false;
};

// Variants for the bundled challenges; empty for unknown ids.
std::vector<FixVariant> fix_variants(const Challenge& challenge);

struct CohortOptions {
  std::uint64_t seed = 20240917;
  int participants = 45;
  int min_sessions = 300;
  std::int64_t start_ms = 1'700'000'000'000;
  std::filesystem::path data_dir;  // logs are written here
};

// What the simulator did, recorded independently of the analytics code.
struct TraceStage {
  Stage stage = Stage::kPredict;
  std::int64_t entered_ms = 0;
  std::int64_t exited_ms = 0;
  int runs = 0;
  bool articulated_response = false;
};

struct SessionTrace {
  std::string session_id;
  std::string participant_id;
  std::string challenge_id;
  std::vector<TraceStage> stages;
  std::vector<bool> selections;  // correctness of each SelectLine, in order
  std::optional<std::string> final_run_program;
  bool success = false;  // pinned verdict of the final run (self-report without cases)
  std::int64_t started_ms = 0;
  std::int64_t last_ms = 0;
};

struct SurveyRow {
  std::string participant_id;
  std::map<std::string, std::optional<int>> items;
};

struct CohortTrace {
  std::vector<SessionTrace> sessions;  // generation order
  std::vector<std::string> survey_items;
  std::vector<SurveyRow> survey;
  std::string survey_csv;
};

// Drives the stage machine for a seeded cohort and writes one JSONL log per
// session into options.data_dir. Same seed, same bytes.
CohortTrace simulate_cohort(const CohortOptions& options, const ChallengeCatalog& challenges);

}  // namespace primmdebug::sim
