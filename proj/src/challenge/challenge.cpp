#include "primmdebug/challenge/challenge.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "primmdebug/error.hpp"

namespace primmdebug {
namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kSchema, where + ": expected an object");
  }
  std::set<std::string_view> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::kSchema, where + ": unknown key '" + key + "'");
    }
  }
  for (std::string_view key : keys) {
    if (!obj.contains(key)) {
      throw Error(ErrorCode::kSchema, where + ": missing key '" + std::string(key) + "'");
    }
  }
}

const json& field(const json& obj, const std::string& where, const char* key,
                  json::value_t type) {
  const json& value = obj.at(key);
  bool ok = value.type() == type;
  // Integers arrive as either signed or unsigned.
  if (type == json::value_t::number_integer) ok = value.is_number_integer();
  if (!ok) {
    throw Error(ErrorCode::kSchema,
                where + ": '" + key + "' has type " + value.type_name());
  }
  return value;
}

std::string string_field(const json& obj, const std::string& where, const char* key) {
  return field(obj, where, key, json::value_t::string).get<std::string>();
}

bool bool_field(const json& obj, const std::string& where, const char* key) {
  return field(obj, where, key, json::value_t::boolean).get<bool>();
}

std::vector<std::string> string_array(const json& obj, const std::string& where,
                                      const char* key) {
  const json& arr = field(obj, where, key, json::value_t::array);
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (!item.is_string()) {
      throw Error(ErrorCode::kSchema, where + ": '" + key + "' must hold strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

TestCase parse_test_case(const json& obj, const std::string& where) {
  require_keys(obj, where, {"inputs", "expected_output", "exposes_error"});
  TestCase tc;
  tc.inputs = string_array(obj, where, "inputs");
  tc.expected_output = string_field(obj, where, "expected_output");
  tc.exposes_error = bool_field(obj, where, "exposes_error");
  return tc;
}

ErrorSpec parse_error_spec(const json& obj) {
  const std::string where = "error_spec";
  require_keys(obj, where, {"single_line", "line_numbers", "nature"});
  ErrorSpec spec;
  spec.single_line = bool_field(obj, where, "single_line");
  for (const auto& n : field(obj, where, "line_numbers", json::value_t::array)) {
    if (!n.is_number_integer()) {
      throw Error(ErrorCode::kSchema, "error_spec: line_numbers must hold integers");
    }
    spec.line_numbers.push_back(n.get<int>());
  }
  spec.nature = string_field(obj, where, "nature");
  return spec;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int line_count(std::string_view program) {
  if (program.empty()) return 0;
  int lines = static_cast<int>(std::count(program.begin(), program.end(), '\n'));
  if (program.back() != '\n') ++lines;
  return lines;
}

std::string hint_at(const Challenge& challenge, int index) {
  if (challenge.hints.empty()) return std::string(kFallbackHint);
  const int last = static_cast<int>(challenge.hints.size()) - 1;
  return challenge.hints[static_cast<std::size_t>(std::clamp(index, 0, last))];
}

ValidationReport validate_challenge(const Challenge& c) {
  ValidationReport report;
  auto violate = [&](std::string fieldname, std::string message) {
    report.push_back({std::move(fieldname), std::move(message)});
  };

  static const std::regex slug("[a-z0-9]+(-[a-z0-9]+)*");
  if (!std::regex_match(c.id, slug)) violate("id", "must be a lowercase slug");
  if (c.title.empty()) violate("title", "must not be empty");
  if (c.difficulty < kMinDifficulty || c.difficulty > kMaxDifficulty) {
    violate("difficulty", "must be between 1 and 3");
  }
  if (c.program.empty()) violate("program", "must not be empty");
  if (c.language_tag.empty()) violate("language_tag", "must not be empty");

  const ErrorSpec& spec = c.error_spec;
  if (spec.line_numbers.empty()) {
    violate("error_spec.line_numbers", "must not be empty");
  }
  if (spec.single_line && spec.line_numbers.size() > 1) {
    violate("error_spec.line_numbers", "single-line errors have exactly one line");
  }
  const int lines = line_count(c.program);
  for (int line : spec.line_numbers) {
    if (line < 1 || line > lines) {
      violate("error_spec.line_numbers",
              "line " + std::to_string(line) + " outside program of " +
                  std::to_string(lines) + " lines");
    }
  }

  if (!c.test_cases.empty() &&
      std::none_of(c.test_cases.begin(), c.test_cases.end(),
                   [](const TestCase& tc) { return tc.exposes_error; })) {
    violate("test_cases", "at least one test case must expose the error");
  }
  return report;
}

Challenge parse_challenge(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }

  const std::string where = "challenge";
  require_keys(doc, where,
               {"id", "title", "difficulty", "description", "program", "language_tag",
                "test_cases", "error_spec", "hints", "modify_prompt",
                "syntax_error_flag"});

  Challenge c;
  c.id = string_field(doc, where, "id");
  c.title = string_field(doc, where, "title");
  c.difficulty = field(doc, where, "difficulty", json::value_t::number_integer).get<int>();
  c.description = string_field(doc, where, "description");
  c.program = string_field(doc, where, "program");
  c.language_tag = string_field(doc, where, "language_tag");
  const json& cases = field(doc, where, "test_cases", json::value_t::array);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    c.test_cases.push_back(parse_test_case(cases[i], "test_cases[" + std::to_string(i) + "]"));
  }
  c.error_spec = parse_error_spec(doc.at("error_spec"));
  c.hints = string_array(doc, where, "hints");
  const json& modify = doc.at("modify_prompt");
  if (modify.is_string()) {
    c.modify_prompt = modify.get<std::string>();
  } else if (!modify.is_null()) {
    throw Error(ErrorCode::kSchema, "challenge: 'modify_prompt' must be a string or null");
  }
  c.syntax_error_flag = bool_field(doc, where, "syntax_error_flag");

  if (auto report = validate_challenge(c); !report.empty()) {
    throw Error(ErrorCode::kInvariant, report.front().field + ": " + report.front().message);
  }
  return c;
}

Challenge load_challenge(const std::filesystem::path& path) {
  try {
    return parse_challenge(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.filename().string() + ": " + e.what());
  }
}

std::string serialize_challenge(const Challenge& c) {
  json cases = json::array();
  for (const auto& tc : c.test_cases) {
    cases.push_back({{"inputs", tc.inputs},
                     {"expected_output", tc.expected_output},
                     {"exposes_error", tc.exposes_error}});
  }
  json doc = {
      {"id", c.id},
      {"title", c.title},
      {"difficulty", c.difficulty},
      {"description", c.description},
      {"program", c.program},
      {"language_tag", c.language_tag},
      {"test_cases", cases},
      {"error_spec",
       {{"single_line", c.error_spec.single_line},
        {"line_numbers", c.error_spec.line_numbers},
        {"nature", c.error_spec.nature}}},
      {"hints", c.hints},
      {"modify_prompt", c.modify_prompt ? json(*c.modify_prompt) : json(nullptr)},
      {"syntax_error_flag", c.syntax_error_flag},
  };
  return doc.dump(2) + "\n";
}

void save_challenge(const Challenge& challenge, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << serialize_challenge(challenge);
}

namespace {

std::vector<std::filesystem::path> json_files(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot read directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : it) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

ChallengeIndex list_challenges(const std::filesystem::path& dir) {
  ChallengeIndex index;
  for (const auto& path : json_files(dir)) {
    try {
      Challenge c = load_challenge(path);
      index.entries.push_back({c.id, c.title, c.difficulty});
    } catch (const Error& e) {
      index.warnings.push_back({path, e.what()});
    }
  }
  std::sort(index.entries.begin(), index.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.difficulty, a.title, a.id) < std::tie(b.difficulty, b.title, b.id);
  });
  return index;
}

ChallengeCatalog load_catalog(const std::filesystem::path& dir,
                              std::vector<LoadWarning>* warnings) {
  ChallengeCatalog catalog;
  for (const auto& path : json_files(dir)) {
    try {
      Challenge c = load_challenge(path);
      std::string id = c.id;
      if (!catalog.emplace(id, std::move(c)).second && warnings) {
        warnings->push_back({path, "duplicate challenge id '" + id + "'"});
      }
    } catch (const Error& e) {
      if (warnings) warnings->push_back({path, e.what()});
    }
  }
  return catalog;
}

}  // namespace primmdebug
