#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primmdebug/challenge/challenge.hpp"

namespace primmdebug {

// Interpreter invocation. "{program}" in any argument is replaced with the
// path of the program file; without a placeholder the path is appended.
using CommandTemplate = std::vector<std::string>;

CommandTemplate default_interpreter();
// Whitespace-separated template, e.g. "python3 -I {program}".
CommandTemplate parse_command_template(std::string_view text);
// PRIMMDEBUG_INTERPRETER when set, otherwise default_interpreter().
CommandTemplate interpreter_from_env();

struct RunRequest {
  std::string program;
  std::vector<std::string> stdin_lines;
  std::chrono::milliseconds timeout{5000};
  CommandTemplate interpreter_command = default_interpreter();
  std::filesystem::path temp_root;  // empty: system temp directory
  std::size_t max_output_bytes = 4u << 20;  // per stream; excess is discarded
};

enum class ExitStatus { kOk, kNonzeroExit, kTimeout, kSpawnFailure };

std::string_view to_string(ExitStatus status);

struct RunResult {
  std::string stdout_text;
  std::string stderr_text;
  std::optional<std::string> error_message;
  ExitStatus exit_status = ExitStatus::kOk;
  int exit_code = 0;
  double duration_seconds = 0.0;
  bool output_truncated = false;
};

// Runs the program in a child process inside a throwaway working directory
// with a minimal environment. Program failures are reported in the result;
// only an interpreter that cannot be started throws (Error{kSpawnFailure}).
RunResult run(const RunRequest& request);

// Strips trailing whitespace from each line and trailing blank lines.
std::string normalize_output(std::string_view text);
bool outputs_match(std::string_view actual, std::string_view expected);

struct CaseResult {
  std::vector<std::string> inputs;
  std::string expected_output;
  std::string actual_output;
  bool passed = false;
};

struct HarnessResult {
  std::vector<CaseResult> per_case;
  bool all_passed = false;
};

// Runs program once per case using the request's interpreter settings.
// cases must be non-empty (Error{kPrecondition}).
HarnessResult evaluate_harness(std::string_view program, std::span<const TestCase> cases,
                               const RunRequest& defaults = {});

struct CaseExposure {
  std::size_t index = 0;
  bool annotated_exposes = false;
  bool observed_exposes = false;  // buggy program fails this case
};

struct ExposureReport {
  std::vector<CaseExposure> cases;
  bool any_exposes = false;
  bool annotations_consistent = false;
  bool ok = false;
};

ExposureReport verify_exposure(const Challenge& challenge, const RunRequest& defaults = {});

// Memoised harness verdicts keyed by (challenge id, program text). Safe for
// concurrent use.
class HarnessCache {
 public:
  explicit HarnessCache(RunRequest defaults = {}) : defaults_(std::move(defaults)) {}

  bool passes(const Challenge& challenge, const std::string& program);
  std::size_t executions() const;

 private:
  RunRequest defaults_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, bool> verdicts_;
  std::size_t executions_ = 0;
};

}  // namespace primmdebug
