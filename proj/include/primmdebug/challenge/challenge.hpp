#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace primmdebug {

inline constexpr int kMinDifficulty = 1;
inline constexpr int kMaxDifficulty = 3;

// Shown when a hint is due but the challenge author supplied none.
inline constexpr std::string_view kFallbackHint =
    "Look again at the failing test case and compare the expected and actual output.";

struct TestCase {
  std::vector<std::string> inputs;  // stdin lines
  std::string expected_output;      // stdout of the intended program
  bool exposes_error = false;

  bool operator==(const TestCase&) const = default;
};

struct ErrorSpec {
  bool single_line = true;
  std::vector<int> line_numbers;  // 1-based
  std::string nature;

  bool operator==(const ErrorSpec&) const = default;
};

// A buggy program with exactly one planted error, plus what a student needs
// to debug it. Immutable once loaded.
struct Challenge {
  std::string id;
  std::string title;
  int difficulty = kMinDifficulty;
  std::string description;
  std::string program;
  std::string language_tag = "python";
  std::vector<TestCase> test_cases;
  ErrorSpec error_spec;
  std::vector<std::string> hints;
  std::optional<std::string> modify_prompt;
  bool syntax_error_flag = false;

  bool operator==(const Challenge&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

// Static invariants only. Whether a test case really exposes the error is a
// dynamic property, see verify_exposure() in the runner.
ValidationReport validate_challenge(const Challenge& challenge);

// Throws Error{kParse} for malformed JSON, Error{kSchema} for missing,
// unknown or ill-typed keys and Error{kInvariant} when validation fails.
Challenge parse_challenge(std::string_view json_text);
Challenge load_challenge(const std::filesystem::path& path);

std::string serialize_challenge(const Challenge& challenge);
void save_challenge(const Challenge& challenge, const std::filesystem::path& path);

struct ChallengeIndexEntry {
  std::string id;
  std::string title;
  int difficulty = kMinDifficulty;
};

struct LoadWarning {
  std::filesystem::path path;
  std::string message;
};

struct ChallengeIndex {
  std::vector<ChallengeIndexEntry> entries;  // sorted by (difficulty, title)
  std::vector<LoadWarning> warnings;
};

// Lists every *.json challenge in dir. Broken files become warnings; only an
// unreadable directory throws (Error{kIo}).
ChallengeIndex list_challenges(const std::filesystem::path& dir);

// All valid challenges in dir keyed by id.
using ChallengeCatalog = std::map<std::string, Challenge, std::less<>>;
ChallengeCatalog load_catalog(const std::filesystem::path& dir,
                              std::vector<LoadWarning>* warnings = nullptr);

int line_count(std::string_view program);

// Hint text for a 0-based index, clamped to the last hint; kFallbackHint when
// the challenge has none.
std::string hint_at(const Challenge& challenge, int index);

}  // namespace primmdebug
