#include "primmdebug/runner/runner.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "primmdebug/error.hpp"

namespace primmdebug {
namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void spawn_failure(const std::string& what) {
  throw Error(ErrorCode::kSpawnFailure, what);
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

class TempDir {
 public:
  explicit TempDir(const std::filesystem::path& root) {
    const auto base = root.empty() ? std::filesystem::temp_directory_path() : root;
    std::string pattern = (base / "primmdebug-run-XXXXXX").string();
    if (!::mkdtemp(pattern.data())) {
      spawn_failure("cannot create working directory under " + base.string() + ": " +
                    std::strerror(errno));
    }
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { reset(); }
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }

  int get() const { return fd_; }
  bool open() const { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

struct Pipe {
  Fd read;
  Fd write;
};

Pipe make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) spawn_failure(std::string("pipe: ") + std::strerror(errno));
  return {Fd(fds[0]), Fd(fds[1])};
}

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

std::string resolve_executable(const std::string& name) {
  if (name.empty()) spawn_failure("empty interpreter command");
  if (name.find('/') != std::string::npos) {
    if (::access(name.c_str(), X_OK) != 0) spawn_failure("interpreter not executable: " + name);
    return name;
  }
  const char* env_path = std::getenv("PATH");
  std::istringstream dirs(env_path ? env_path : "/usr/local/bin:/usr/bin:/bin");
  for (std::string dir; std::getline(dirs, dir, ':');) {
    if (dir.empty()) continue;
    std::string candidate = dir + "/" + name;
    struct stat st {};
    if (::stat(candidate.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
        ::access(candidate.c_str(), X_OK) == 0) {
      return candidate;
    }
  }
  spawn_failure("interpreter not found on PATH: " + name);
}

std::vector<std::string> build_argv(const CommandTemplate& tmpl, const std::string& file) {
  static constexpr std::string_view kPlaceholder = "{program}";
  std::vector<std::string> argv;
  bool substituted = false;
  for (std::string arg : tmpl) {
    for (auto pos = arg.find(kPlaceholder); pos != std::string::npos;
         pos = arg.find(kPlaceholder, pos + file.size())) {
      arg.replace(pos, kPlaceholder.size(), file);
      substituted = true;
    }
    argv.push_back(std::move(arg));
  }
  if (!substituted) argv.push_back(file);
  return argv;
}

std::vector<char*> c_strings(std::vector<std::string>& strings) {
  std::vector<char*> out;
  for (auto& s : strings) out.push_back(s.data());
  out.push_back(nullptr);
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

CommandTemplate default_interpreter() { return {"python3", "-I", "{program}"}; }

CommandTemplate parse_command_template(std::string_view text) {
  CommandTemplate out;
  std::istringstream in{std::string(text)};
  for (std::string word; in >> word;) out.push_back(word);
  return out;
}

CommandTemplate interpreter_from_env() {
  if (const char* v = std::getenv("PRIMMDEBUG_INTERPRETER"); v && *v) {
    auto tmpl = parse_command_template(v);
    if (!tmpl.empty()) return tmpl;
  }
  return default_interpreter();
}

std::string_view to_string(ExitStatus status) {
  switch (status) {
    case ExitStatus::kOk: return "ok";
    case ExitStatus::kNonzeroExit: return "nonzero_exit";
    case ExitStatus::kTimeout: return "timeout";
    case ExitStatus::kSpawnFailure: return "spawn_failure";
  }
  return "?";
}

RunResult run(const RunRequest& req) {
  if (req.program.empty()) throw Error(ErrorCode::kPrecondition, "program must not be empty");
  if (req.timeout.count() <= 0) throw Error(ErrorCode::kPrecondition, "timeout must be positive");
  if (req.interpreter_command.empty()) spawn_failure("no interpreter configured");
  ignore_sigpipe();

  TempDir workdir(req.temp_root);
  const auto program_file = workdir.path() / "main.py";
  {
    std::ofstream out(program_file, std::ios::binary);
    out << req.program;
    if (!out) spawn_failure("cannot write program file");
  }

  std::vector<std::string> argv = build_argv(req.interpreter_command, program_file.string());
  const std::string exe = resolve_executable(argv.front());
  std::vector<std::string> envp = {
      "PATH=/usr/local/bin:/usr/bin:/bin",
      "HOME=" + workdir.path().string(),
      "TMPDIR=" + workdir.path().string(),
      "LANG=C.UTF-8",
      "LC_ALL=C.UTF-8",
      "PYTHONIOENCODING=utf-8",
      "PYTHONDONTWRITEBYTECODE=1",
  };
  std::vector<char*> c_argv = c_strings(argv);
  std::vector<char*> c_envp = c_strings(envp);
  const std::string cwd = workdir.path().string();

  Pipe in = make_pipe();
  Pipe out = make_pipe();
  Pipe err = make_pipe();
  Pipe status = make_pipe();

  const auto start = Clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) spawn_failure(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    // Child: async-signal-safe calls only.
    ::setpgid(0, 0);
    int code = 0;
    if (::chdir(cwd.c_str()) != 0 || ::dup2(in.read.get(), 0) < 0 ||
        ::dup2(out.write.get(), 1) < 0 || ::dup2(err.write.get(), 2) < 0) {
      code = errno;
    } else {
      ::execve(exe.c_str(), c_argv.data(), c_envp.data());
      code = errno;
    }
    [[maybe_unused]] auto n = ::write(status.write.get(), &code, sizeof code);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  in.read.reset();
  out.write.reset();
  err.write.reset();
  status.write.reset();

  int exec_errno = 0;
  ssize_t got;
  do {
    got = ::read(status.read.get(), &exec_errno, sizeof exec_errno);
  } while (got < 0 && errno == EINTR);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    ::waitpid(pid, nullptr, 0);
    spawn_failure("cannot start " + exe + ": " + std::strerror(exec_errno));
  }

  std::string input;
  for (const auto& line : req.stdin_lines) input += line + "\n";
  std::size_t written = 0;
  Fd& child_in = in.write;
  if (input.empty()) child_in.reset();
  if (child_in.open()) set_nonblocking(child_in.get());
  set_nonblocking(out.read.get());
  set_nonblocking(err.read.get());

  RunResult result;
  const auto deadline = start + req.timeout;
  bool timed_out = false;
  bool reaped = false;
  int wait_status = 0;

  auto drain = [&](Fd& fd, std::string& sink) {
    char buf[65536];
    for (;;) {
      const ssize_t n = ::read(fd.get(), buf, sizeof buf);
      if (n > 0) {
        const std::size_t room =
            req.max_output_bytes > sink.size() ? req.max_output_bytes - sink.size() : 0;
        const auto keep = std::min(room, static_cast<std::size_t>(n));
        sink.append(buf, keep);
        if (keep < static_cast<std::size_t>(n)) result.output_truncated = true;
        continue;
      }
      if (n == 0) fd.reset();
      else if (errno != EAGAIN && errno != EINTR) fd.reset();
      return;
    }
  };

  while (true) {
    const auto now = Clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    if (!out.read.open() && !err.read.open()) {
      if (::waitpid(pid, &wait_status, WNOHANG) == pid) {
        reaped = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
      continue;
    }

    pollfd fds[3];
    nfds_t count = 0;
    int out_slot = -1, err_slot = -1, in_slot = -1;
    if (out.read.open()) {
      out_slot = static_cast<int>(count);
      fds[count++] = {out.read.get(), POLLIN, 0};
    }
    if (err.read.open()) {
      err_slot = static_cast<int>(count);
      fds[count++] = {err.read.get(), POLLIN, 0};
    }
    if (child_in.open()) {
      in_slot = static_cast<int>(count);
      fds[count++] = {child_in.get(), POLLOUT, 0};
    }
    const auto remaining =
        std::chrono::ceil<std::chrono::milliseconds>(deadline - now).count();
    const int ready = ::poll(fds, count, static_cast<int>(std::max<long long>(1, remaining)));
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;

    if (out_slot >= 0 && fds[out_slot].revents) drain(out.read, result.stdout_text);
    if (err_slot >= 0 && fds[err_slot].revents) drain(err.read, result.stderr_text);
    if (in_slot >= 0 && fds[in_slot].revents) {
      if (fds[in_slot].revents & (POLLERR | POLLHUP)) {
        child_in.reset();
      } else {
        const ssize_t n = ::write(child_in.get(), input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        else if (errno != EAGAIN && errno != EINTR) child_in.reset();
        if (written == input.size()) child_in.reset();
      }
    }
  }

  if (!reaped) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &wait_status, 0);
  } else {
    ::kill(-pid, SIGKILL);  // stray descendants
  }
  // Collect whatever was flushed before the kill.
  if (out.read.open()) drain(out.read, result.stdout_text);
  if (err.read.open()) drain(err.read, result.stderr_text);
  result.duration_seconds = std::chrono::duration<double>(Clock::now() - start).count();

  if (timed_out) {
    result.exit_status = ExitStatus::kTimeout;
    result.exit_code = -1;
  } else if (WIFEXITED(wait_status)) {
    result.exit_code = WEXITSTATUS(wait_status);
    result.exit_status = result.exit_code == 0 ? ExitStatus::kOk : ExitStatus::kNonzeroExit;
  } else {
    result.exit_code = WIFSIGNALED(wait_status) ? 128 + WTERMSIG(wait_status) : -1;
    result.exit_status = ExitStatus::kNonzeroExit;
  }

  if (result.exit_status != ExitStatus::kOk) {
    std::string diagnostic = trim(result.stderr_text);
    if (result.exit_status == ExitStatus::kTimeout) {
      const double limit = std::chrono::duration<double>(req.timeout).count();
      std::ostringstream msg;
      msg << "The program was stopped after " << limit << " seconds.";
      diagnostic = diagnostic.empty() ? msg.str() : diagnostic + "\n" + msg.str();
    } else if (diagnostic.empty()) {
      diagnostic = "The program exited with status " + std::to_string(result.exit_code) + ".";
    }
    result.error_message = std::move(diagnostic);
  }
  return result;
}

std::string normalize_output(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t start = 0;
  while (true) {
    const auto nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    const auto end = line.find_last_not_of(" \t\r\v\f");
    out.append(line.substr(0, end == std::string_view::npos ? 0 : end + 1));
    if (nl == std::string_view::npos) break;
    out.push_back('\n');
    start = nl + 1;
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

bool outputs_match(std::string_view actual, std::string_view expected) {
  return normalize_output(actual) == normalize_output(expected);
}

}  // namespace primmdebug
