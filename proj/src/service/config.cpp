#include "primmdebug/service/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "primmdebug/error.hpp"

namespace primmdebug {
namespace {

bool parse_flag(const std::string& name, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off" || value.empty()) {
    return false;
  }
  throw Error(ErrorCode::kParse, name + ": expected a boolean, got '" + value + "'");
}

long parse_int(const std::string& name, const std::string& value, long lo, long hi) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || *end != '\0' || errno != 0 || v < lo || v > hi) {
    throw Error(ErrorCode::kParse, name + ": expected an integer in [" + std::to_string(lo) +
                                       ", " + std::to_string(hi) + "], got '" + value + "'");
  }
  return v;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

ServiceConfig config_from_json(std::string_view text, ServiceConfig base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kSchema, "config: top level must be an object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "host") {
        base.host = value.get<std::string>();
      } else if (key == "port") {
        const int port = value.get<int>();
        if (port < 0 || port > 65535) throw Error(ErrorCode::kSchema, "config: port out of range");
        base.port = port;
      } else if (key == "challenge_dir") {
        base.challenge_dir = value.get<std::string>();
      } else if (key == "data_dir") {
        base.data_dir = value.get<std::string>();
      } else if (key == "interpreter") {
        base.interpreter = value.is_string() ? parse_command_template(value.get<std::string>())
                                             : value.get<CommandTemplate>();
        if (base.interpreter.empty()) throw Error(ErrorCode::kSchema, "config: empty interpreter");
      } else if (key == "temp_root") {
        base.temp_root = value.get<std::string>();
      } else if (key == "run_timeout_ms") {
        const int ms = value.get<int>();
        if (ms <= 0) throw Error(ErrorCode::kSchema, "config: run_timeout_ms must be positive");
        base.run_timeout = std::chrono::milliseconds(ms);
      } else if (key == "research_mode") {
        base.research_mode = value.get<bool>();
      } else if (key == "sync_writes") {
        base.sync_writes = value.get<bool>();
      } else {
        throw Error(ErrorCode::kSchema, "config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("config: ") + e.what());
  }
  return base;
}

void apply_env_overrides(ServiceConfig& config, const EnvLookup& env) {
  if (auto v = env("PRIMMDEBUG_HOST")) config.host = *v;
  if (auto v = env("PRIMMDEBUG_PORT")) {
    config.port = static_cast<int>(parse_int("PRIMMDEBUG_PORT", *v, 0, 65535));
  }
  if (auto v = env("PRIMMDEBUG_CHALLENGES")) config.challenge_dir = *v;
  if (auto v = env("PRIMMDEBUG_DATA")) config.data_dir = *v;
  if (auto v = env("PRIMMDEBUG_INTERPRETER"); v && !v->empty()) {
    config.interpreter = parse_command_template(*v);
  }
  if (auto v = env("PRIMMDEBUG_TMPDIR")) config.temp_root = *v;
  if (auto v = env("PRIMMDEBUG_RUN_TIMEOUT_MS")) {
    config.run_timeout =
        std::chrono::milliseconds(parse_int("PRIMMDEBUG_RUN_TIMEOUT_MS", *v, 1, 600000));
  }
  if (auto v = env("PRIMMDEBUG_RESEARCH_MODE")) {
    config.research_mode = parse_flag("PRIMMDEBUG_RESEARCH_MODE", *v);
  }
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  ServiceConfig config;
  if (file) {
    std::ifstream in(*file, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open config " + file->string());
    std::ostringstream text;
    text << in.rdbuf();
    config = config_from_json(text.str(), config);
  }
  apply_env_overrides(config, env);
  return config;
}

RunRequest run_defaults(const ServiceConfig& config) {
  RunRequest req;
  req.interpreter_command = config.interpreter;
  req.temp_root = config.temp_root;
  req.timeout = config.run_timeout;
  return req;
}

}  // namespace primmdebug
