#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "primmdebug/session_log/event.hpp"

namespace primmdebug {

// Append-only JSONL store: one file per session (<session_id>.jsonl) in a
// data directory, one event per line. There is no update or delete.
class EventStore {
 public:
  explicit EventStore(std::filesystem::path data_dir, bool sync_writes = false);

  // Error{kUnknownSession} unless the session exists or the event is
  // SessionStarted; Error{kOrdering} on a timestamp regression.
  void append(const SessionEvent& event);

  bool has_session(const std::string& session_id) const;
  std::vector<SessionEvent> read_session(const std::string& session_id) const;
  std::filesystem::path session_path(const std::string& session_id) const;
  const std::filesystem::path& data_dir() const { return data_dir_; }

 private:
  std::filesystem::path data_dir_;
  bool sync_writes_;
  mutable std::mutex mutex_;
  std::map<std::string, std::int64_t> last_ts_;
};

bool valid_session_id(std::string_view id);

// Parses one JSONL log file. Blank lines are skipped.
std::vector<SessionEvent> read_event_log(const std::filesystem::path& file);

struct LoadedSession {
  std::filesystem::path file;
  std::vector<SessionEvent> events;
};

// Every *.jsonl file in dir, ordered by file name. With skipped set,
// unreadable files are listed there ("file: reason") instead of throwing.
std::vector<LoadedSession> read_all_sessions(const std::filesystem::path& dir,
                                             std::vector<std::string>* skipped = nullptr);

}  // namespace primmdebug
