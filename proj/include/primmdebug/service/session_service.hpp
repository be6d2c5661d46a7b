#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "primmdebug/challenge/challenge.hpp"
#include "primmdebug/runner/runner.hpp"
#include "primmdebug/service/config.hpp"
#include "primmdebug/session_log/store.hpp"
#include "primmdebug/stages/machine.hpp"

namespace primmdebug {

using Clock = std::function<std::int64_t()>;  // epoch milliseconds

std::int64_t system_clock_ms();

// Sessions live in memory; when a participant id is present every
// transition is written through to the event store before the response.
// Requests for one session are serialised, distinct sessions run in
// parallel. All payloads are student-facing and never carry error_spec,
// unearned hints or exposes_error.
class SessionService {
 public:
  explicit SessionService(ServiceConfig config, Clock clock = system_clock_ms);

  nlohmann::json list_challenges() const;
  nlohmann::json start_session(std::string_view challenge_id,
                               std::optional<std::string> participant_id);
  nlohmann::json get_session(std::string_view session_id) const;
  // Action object with a "type" field; see README for the wire format.
  nlohmann::json submit(std::string_view session_id, const nlohmann::json& action);
  nlohmann::json run(std::string_view session_id, std::optional<std::vector<std::string>> stdin_lines);

  // Rebuilds in-memory sessions from the logs in the data directory.
  // Returns the number restored; unreplayable logs go to warnings().
  std::size_t recover();

  const ServiceConfig& config() const { return config_; }
  const ChallengeCatalog& challenges() const { return catalog_; }
  std::vector<std::string> warnings() const;
  std::size_t session_count() const;

 private:
  struct Session {
    std::mutex mutex;
    std::string id;
    std::optional<std::string> participant_id;
    const Challenge* challenge = nullptr;
    SessionState state;
    std::optional<bool> harness_passed;  // working program at Test
    std::int64_t last_ts = 0;
  };

  std::shared_ptr<Session> find(std::string_view session_id) const;
  void record(Session& session, const std::vector<EventBody>& events);
  void refresh_harness(Session& session);
  nlohmann::json handle(const Session& session) const;
  std::string new_session_id();

  ServiceConfig config_;
  Clock clock_;
  ChallengeCatalog catalog_;
  EventStore store_;
  HarnessCache harness_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;

  mutable std::mutex misc_mutex_;
  std::vector<std::string> warnings_;
  std::mt19937_64 id_rng_;
};

// Student-facing challenge view (no error_spec, hints or exposes_error).
nlohmann::json challenge_view(const Challenge& challenge);

}  // namespace primmdebug
