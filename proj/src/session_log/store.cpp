#include "primmdebug/session_log/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <regex>

#include "primmdebug/error.hpp"

namespace primmdebug {

bool valid_session_id(std::string_view id) {
  static const std::regex pattern("[A-Za-z0-9_-]{1,128}");
  return std::regex_match(id.begin(), id.end(), pattern);
}

EventStore::EventStore(std::filesystem::path data_dir, bool sync_writes)
    : data_dir_(std::move(data_dir)), sync_writes_(sync_writes) {
  std::error_code ec;
  std::filesystem::create_directories(data_dir_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + data_dir_.string() + ": " + ec.message());
}

std::filesystem::path EventStore::session_path(const std::string& session_id) const {
  return data_dir_ / (session_id + ".jsonl");
}

bool EventStore::has_session(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  return last_ts_.contains(session_id) ||
         (valid_session_id(session_id) && std::filesystem::exists(session_path(session_id)));
}

void EventStore::append(const SessionEvent& event) {
  if (!valid_session_id(event.session_id)) {
    throw Error(ErrorCode::kUnknownSession, "invalid session id '" + event.session_id + "'");
  }
  const bool starting = std::holds_alternative<event::SessionStarted>(event.body);
  const auto path = session_path(event.session_id);

  std::lock_guard lock(mutex_);
  auto it = last_ts_.find(event.session_id);
  if (it == last_ts_.end() && std::filesystem::exists(path)) {
    auto existing = read_event_log(path);
    if (!existing.empty()) {
      it = last_ts_.emplace(event.session_id, existing.back().ts_ms).first;
    }
  }
  if (it == last_ts_.end()) {
    if (!starting) {
      throw Error(ErrorCode::kUnknownSession, "no session '" + event.session_id + "'");
    }
  } else {
    if (starting) {
      throw Error(ErrorCode::kOrdering, "session '" + event.session_id + "' already started");
    }
    if (event.ts_ms < it->second) {
      throw Error(ErrorCode::kOrdering, "timestamp " + std::to_string(event.ts_ms) +
                                            " precedes " + std::to_string(it->second));
    }
  }

  const std::string line = encode_line(event) + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot open " + path.string() + ": " + std::strerror(errno));
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int e = errno;
      ::close(fd);
      throw Error(ErrorCode::kIo, "cannot append to " + path.string() + ": " + std::strerror(e));
    }
    done += static_cast<std::size_t>(n);
  }
  if (sync_writes_) ::fdatasync(fd);
  ::close(fd);
  last_ts_[event.session_id] = event.ts_ms;
}

std::vector<SessionEvent> EventStore::read_session(const std::string& session_id) const {
  if (!valid_session_id(session_id)) {
    throw Error(ErrorCode::kUnknownSession, "invalid session id '" + session_id + "'");
  }
  const auto path = session_path(session_id);
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kUnknownSession, "no session '" + session_id + "'");
  }
  return read_event_log(path);
}

std::vector<SessionEvent> read_event_log(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string());
  std::vector<SessionEvent> events;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      events.push_back(decode_line(line));
    } catch (const Error& e) {
      throw Error(e.code(), file.filename().string() + ":" + std::to_string(line_no) + ": " +
                                e.what());
    }
  }
  return events;
}

std::vector<LoadedSession> read_all_sessions(const std::filesystem::path& dir,
                                             std::vector<std::string>* skipped) {
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot read directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : it) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LoadedSession> sessions;
  for (auto& f : files) {
    std::vector<SessionEvent> events;
    try {
      events = read_event_log(f);
    } catch (const Error& e) {
      if (!skipped) throw;
      skipped->push_back(f.filename().string() + ": " + e.what());
      continue;
    }
    sessions.push_back({std::move(f), std::move(events)});
  }
  return sessions;
}

}  // namespace primmdebug
