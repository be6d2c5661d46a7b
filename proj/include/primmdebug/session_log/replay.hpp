#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primmdebug/challenge/challenge.hpp"
#include "primmdebug/session_log/event.hpp"
#include "primmdebug/stages/machine.hpp"

namespace primmdebug {

// The transition event an emitted batch starts with, if body can lead one.
std::optional<TransitionEvent> cause_of(const EventBody& body);

struct ReplayResult {
  SessionState final_state;
  std::vector<Stage> recorded_stages;  // StageEntered order in the log
  std::vector<Stage> replayed_stages;  // StageEntered order from the machine
  bool matches = false;                // every replayed batch equals the log
  std::string mismatch;                // first divergence, when !matches
};

// Folds the log through the stage machine, batch by batch, comparing each
// emitted event body with the recorded one.
ReplayResult replay(std::span<const SessionEvent> events, const Challenge& challenge);

}  // namespace primmdebug
