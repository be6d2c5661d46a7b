#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace primmdebug {

enum class Stage {
  kPredict,
  kRun,
  kSpotTheDefect,
  kInspectTheCode,
  kFindTheError,
  kFixTheError,
  kTest,
  kModify,
  kMake,
};

inline constexpr std::array<Stage, 9> kAllStages = {
    Stage::kPredict,      Stage::kRun,         Stage::kSpotTheDefect,
    Stage::kInspectTheCode, Stage::kFindTheError, Stage::kFixTheError,
    Stage::kTest,         Stage::kModify,      Stage::kMake,
};

inline constexpr std::size_t stage_index(Stage s) { return static_cast<std::size_t>(s); }

// Canonical wire names: "Predict", "Run", "SpotTheDefect", ...
std::string_view to_string(Stage stage);
std::optional<Stage> stage_from_string(std::string_view name);

enum class ResponseRequirement { kRequired, kOptional, kNone };
enum class ResponseKind { kFreeText, kLineSelectOrFreeText, kSelfReport };

std::string_view to_string(ResponseRequirement r);
std::string_view to_string(ResponseKind k);

struct StagePolicy {
  bool can_run = false;
  bool can_edit = false;
  ResponseRequirement response = ResponseRequirement::kNone;
  ResponseKind response_kind = ResponseKind::kFreeText;

  bool operator==(const StagePolicy&) const = default;
};

// Fixed per-stage code interactivity. Only Modify and Make allow both
// running and editing.
StagePolicy policy(Stage stage);

// True iff text contains at least one Unicode letter or digit.
bool validate_articulation(std::string_view text);

}  // namespace primmdebug
