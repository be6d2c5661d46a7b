#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "primmdebug/runner/runner.hpp"

namespace primmdebug {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path challenge_dir = "challenges";
  std::filesystem::path data_dir = "data";
  CommandTemplate interpreter = default_interpreter();
  std::filesystem::path temp_root;  // empty: system temp directory
  std::chrono::milliseconds run_timeout{5000};
  bool research_mode = false;  // every session must carry a participant id
  bool sync_writes = false;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string& name)>;

std::optional<std::string> process_env(const std::string& name);

// Keys: host, port, challenge_dir, data_dir, interpreter (string or array),
// temp_root, run_timeout_ms, research_mode, sync_writes. Unknown keys are
// rejected (Error{kSchema}).
ServiceConfig config_from_json(std::string_view text, ServiceConfig base = {});

// PRIMMDEBUG_PORT, PRIMMDEBUG_HOST, PRIMMDEBUG_CHALLENGES, PRIMMDEBUG_DATA,
// PRIMMDEBUG_INTERPRETER, PRIMMDEBUG_TMPDIR, PRIMMDEBUG_RUN_TIMEOUT_MS,
// PRIMMDEBUG_RESEARCH_MODE.
void apply_env_overrides(ServiceConfig& config, const EnvLookup& env = process_env);

// Defaults, then the optional file, then the environment.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file,
                          const EnvLookup& env = process_env);

RunRequest run_defaults(const ServiceConfig& config);

}  // namespace primmdebug
