#pragma once

#include <string>
#include <string_view>

#include "primmdebug/stages/stage.hpp"

namespace primmdebug {

struct Challenge;
struct SessionState;

// Student-facing copy. Everything the UI shows as a stage prompt comes from
// here so wording can be revised in one place.
namespace messages {

inline constexpr std::string_view kArticulationRule =
    "Your response must contain at least one letter or number.";
inline constexpr std::string_view kRunDisabled = "You cannot run the program at this stage.";
inline constexpr std::string_view kEditDisabled = "You cannot edit the program at this stage.";
inline constexpr std::string_view kInspectRecommended =
    "Going back to Inspect the Code is recommended before trying another fix.";

std::string_view stage_title(Stage stage);

// Prompt for the current stage, specialised with the test case or modify
// pointer where relevant.
std::string stage_prompt(const SessionState& state, const Challenge& challenge);

}  // namespace messages
}  // namespace primmdebug
