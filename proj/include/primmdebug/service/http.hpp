#pragma once

#include <utility>

#include <json.hpp>

#include "primmdebug/error.hpp"

namespace httplib {
class Server;
}

namespace primmdebug {

class SessionService;

// HTTP status and JSON body for a failed request.
std::pair<int, nlohmann::json> error_response(const Error& error);

// GET  /api/challenges
// POST /api/sessions               {challenge_id, participant_id?} or X-Research-Id
// GET  /api/sessions/{id}
// POST /api/sessions/{id}/events   action object
// POST /api/sessions/{id}/run      {stdin: [..]}
void bind_routes(httplib::Server& server, SessionService& service);

}  // namespace primmdebug
