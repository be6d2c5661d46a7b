#pragma once

#include <span>
#include <string>
#include <vector>

#include "primmdebug/session_log/event.hpp"

namespace primmdebug {

// Cross-checks a session log against the stage policy table. The store
// accepts anything well-ordered; this is where policy breaches surface.
// Returns one message per violation, empty when consistent.
std::vector<std::string> check_consistency(std::span<const SessionEvent> events);

}  // namespace primmdebug
