#include "primmdebug/service/http.hpp"

#include <httplib.h>

#include "primmdebug/service/session_service.hpp"
#include "primmdebug/stages/messages.hpp"

namespace primmdebug {
namespace {

using json = nlohmann::json;

constexpr const char* kJson = "application/json; charset=utf-8";
constexpr const char* kSessionPath = R"(/api/sessions/([A-Za-z0-9_-]{1,128}))";

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("request body is not valid JSON: ") + e.what());
  }
}

template <class F>
httplib::Server::Handler guarded(F body) {
  return [body](const httplib::Request& req, httplib::Response& res) {
    int status = 200;
    json payload;
    try {
      payload = body(req);
    } catch (const Error& e) {
      std::tie(status, payload) = error_response(e);
    } catch (const json::exception& e) {
      status = 400;
      payload = {{"error", "bad_request"}, {"reason", e.what()}};
    } catch (const std::exception& e) {
      status = 500;
      payload = {{"error", "internal"}, {"reason", e.what()}};
    }
    res.status = status;
    res.set_content(payload.dump(), kJson);
  };
}

}  // namespace

std::pair<int, json> error_response(const Error& error) {
  const std::string reason = error.what();
  switch (error.code()) {
    case ErrorCode::kUnknownChallenge:
    case ErrorCode::kUnknownSession:
      return {404, {{"error", std::string(to_string(error.code()))}, {"reason", reason}}};
    case ErrorCode::kIllegalEvent:
    case ErrorCode::kRunRejected:
    case ErrorCode::kEditRejected:
      return {409,
              {{"error", "illegal_event"},
               {"code", std::string(to_string(error.code()))},
               {"reason", reason}}};
    case ErrorCode::kArticulationRejected:
      return {422,
              {{"error", "articulation_rejected"},
               {"rule", std::string(messages::kArticulationRule)},
               {"reason", reason}}};
    case ErrorCode::kParse:
    case ErrorCode::kSchema:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kPrecondition:
      return {400, {{"error", std::string(to_string(error.code()))}, {"reason", reason}}};
    case ErrorCode::kSpawnFailure:
      return {503, {{"error", "spawn_failure"}, {"reason", reason}}};
    default:
      return {500, {{"error", std::string(to_string(error.code()))}, {"reason", reason}}};
  }
}

void bind_routes(httplib::Server& server, SessionService& service) {
  server.Get("/api/challenges",
             guarded([&service](const httplib::Request&) { return service.list_challenges(); }));

  server.Post("/api/sessions", guarded([&service](const httplib::Request& req) {
                const json body = parse_body(req);
                if (!body.is_object() || !body.contains("challenge_id") ||
                    !body["challenge_id"].is_string()) {
                  throw Error(ErrorCode::kSchema, "challenge_id (string) is required");
                }
                std::optional<std::string> participant;
                if (body.contains("participant_id") && !body["participant_id"].is_null()) {
                  participant = body["participant_id"].get<std::string>();
                } else if (req.has_header("X-Research-Id")) {
                  participant = req.get_header_value("X-Research-Id");
                }
                return service.start_session(body["challenge_id"].get<std::string>(),
                                             std::move(participant));
              }));

  server.Get(kSessionPath, guarded([&service](const httplib::Request& req) {
               return service.get_session(req.matches[1].str());
             }));

  server.Post(std::string(kSessionPath) + "/events",
              guarded([&service](const httplib::Request& req) {
                return service.submit(req.matches[1].str(), parse_body(req));
              }));

  server.Post(std::string(kSessionPath) + "/run", guarded([&service](const httplib::Request& req) {
                const json body = parse_body(req);
                std::optional<std::vector<std::string>> stdin_lines;
                if (body.is_object() && body.contains("stdin") && !body["stdin"].is_null()) {
                  stdin_lines = body["stdin"].get<std::vector<std::string>>();
                }
                return service.run(req.matches[1].str(), std::move(stdin_lines));
              }));
}

}  // namespace primmdebug
