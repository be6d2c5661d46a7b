#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "primmdebug/error.hpp"
#include "primmdebug/runner/runner.hpp"
#include "test_support.hpp"

using namespace primmdebug;
using namespace std::chrono_literals;
using primmdebug::testing::bundled;
using primmdebug::testing::golden_dir;
using primmdebug::testing::read_file;

namespace {

RunResult run_program(std::string program, std::vector<std::string> stdin_lines = {},
                      std::chrono::milliseconds timeout = 5000ms) {
  RunRequest req;
  req.program = std::move(program);
  req.stdin_lines = std::move(stdin_lines);
  req.timeout = timeout;
  return run(req);
}

std::size_t corpus_checksum() {
  std::size_t h = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(primmdebug::testing::challenge_dir())) {
    if (!entry.is_regular_file()) continue;
    h ^= std::hash<std::string>{}(entry.path().string() + read_file(entry.path())) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

TEST(Runner, PrintHi) {
  const RunResult r = run_program("print(\"hi\")\n");
  EXPECT_EQ(r.stdout_text, "hi\n");
  EXPECT_EQ(r.exit_status, ExitStatus::kOk);
  EXPECT_FALSE(r.error_message);
}

TEST(Runner, NumberTimelineGoldens) {
  const Challenge c = bundled("number-timeline");
  const std::string fixed = primmdebug::testing::number_timeline_fixed();
  EXPECT_EQ(run_program(c.program, {"10", "3"}).stdout_text,
            read_file(golden_dir() / "number_timeline_buggy_case1.txt"));
  const RunResult buggy = run_program(c.program, {"25", "30"});
  EXPECT_EQ(buggy.stdout_text, read_file(golden_dir() / "number_timeline_buggy_case2.txt"));
  EXPECT_NE(buggy.stdout_text.find("29"), std::string::npos);
  EXPECT_EQ(buggy.stdout_text.find("30"), std::string::npos);
  EXPECT_EQ(run_program(fixed, {"10", "3"}).stdout_text,
            read_file(golden_dir() / "number_timeline_fixed_case1.txt"));
  EXPECT_EQ(run_program(fixed, {"25", "30"}).stdout_text,
            read_file(golden_dir() / "number_timeline_fixed_case2.txt"));
}

TEST(Runner, Timeout) {
  const RunResult r = run_program("while True:\n    pass\n", {}, 1000ms);
  EXPECT_EQ(r.exit_status, ExitStatus::kTimeout);
  EXPECT_GE(r.duration_seconds, 1.0);
  EXPECT_TRUE(r.error_message);
}

TEST(Runner, ErrorsAreData) {
  const RunResult r = run_program("print(undefined_name)\n");
  EXPECT_EQ(r.exit_status, ExitStatus::kNonzeroExit);
  ASSERT_TRUE(r.error_message);
  EXPECT_NE(r.error_message->find("NameError"), std::string::npos);
  EXPECT_NE(r.stderr_text.find("NameError"), std::string::npos);
}

TEST(Runner, StdinExhaustionIsEofError) {
  const RunResult r = run_program("a = input()\nb = input()\n", {"1"});
  EXPECT_EQ(r.exit_status, ExitStatus::kNonzeroExit);
  ASSERT_TRUE(r.error_message);
  EXPECT_NE(r.error_message->find("EOFError"), std::string::npos);
}

TEST(Runner, SyntaxErrorIsData) {
  const RunResult r = run_program(bundled("greeting").program, {"Sam"});
  EXPECT_EQ(r.exit_status, ExitStatus::kNonzeroExit);
  ASSERT_TRUE(r.error_message);
  EXPECT_NE(r.error_message->find("SyntaxError"), std::string::npos);
}

TEST(Runner, Preconditions) {
  EXPECT_THROW(run_program(""), Error);
  EXPECT_THROW(run_program("print(1)", {}, 0ms), Error);
}

TEST(Runner, SpawnFailure) {
  RunRequest req;
  req.program = "print(1)\n";
  req.interpreter_command = {"/nonexistent/interpreter", "{program}"};
  try {
    run(req);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpawnFailure);
  }
}

TEST(Runner, CommandTemplate) {
  EXPECT_EQ(parse_command_template("python3 -I {program}"),
            (CommandTemplate{"python3", "-I", "{program}"}));
  RunRequest req;
  req.program = "print('templated')\n";
  req.interpreter_command = {"python3"};  // path appended
  EXPECT_EQ(run(req).stdout_text, "templated\n");
}

TEST(Runner, Determinism) {
  for (const auto& [id, c] : load_catalog(primmdebug::testing::challenge_dir())) {
    std::vector<std::string> inputs;
    if (!c.test_cases.empty()) inputs = c.test_cases.back().inputs;
    const RunResult first = run_program(c.program, inputs);
    for (int i = 0; i < 4; ++i) {
      const RunResult again = run_program(c.program, inputs);
      EXPECT_EQ(again.stdout_text, first.stdout_text) << id;
      EXPECT_EQ(again.exit_status, first.exit_status) << id;
    }
  }
}

TEST(Runner, Isolation) {
  const std::size_t before = corpus_checksum();
  const RunResult r = run_program(
      "import os\n"
      "print(os.getcwd())\n"
      "open('number-timeline.json', 'w').write('clobbered')\n"
      "os.makedirs('challenges', exist_ok=True)\n"
      "open('challenges/number-timeline.json', 'w').write('clobbered')\n"
      "print(sorted(k for k in os.environ if k.startswith('PRIMMDEBUG')))\n");
  EXPECT_EQ(r.exit_status, ExitStatus::kOk) << r.stderr_text;
  EXPECT_EQ(corpus_checksum(), before);
  const std::string cwd = r.stdout_text.substr(0, r.stdout_text.find('\n'));
  EXPECT_FALSE(std::filesystem::exists(cwd));  // throwaway directory removed
  EXPECT_NE(r.stdout_text.find("[]"), std::string::npos);
}

TEST(Runner, OutputCap) {
  RunRequest req;
  req.program = "import sys\nsys.stdout.write('x' * 100000)\n";
  req.max_output_bytes = 1000;
  const RunResult r = run(req);
  EXPECT_EQ(r.stdout_text.size(), 1000u);
  EXPECT_TRUE(r.output_truncated);
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize_output("25 26 \n\n\n"), "25 26");
  EXPECT_EQ(normalize_output("a  \nb\t\n"), "a\nb");
  EXPECT_TRUE(outputs_match("Pass\n", "Pass"));
  EXPECT_FALSE(outputs_match("Pass", "pass"));
  EXPECT_FALSE(outputs_match(" a", "a"));
}

TEST(Normalize, Idempotent) {
  std::mt19937 rng(3);
  const std::string alphabet = "ab \t\n\r\n x";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int len = static_cast<int>(rng() % 20);
    for (int j = 0; j < len; ++j) s += alphabet[rng() % alphabet.size()];
    const std::string once = normalize_output(s);
    EXPECT_EQ(normalize_output(once), once);
  }
}

TEST(Harness, NumberTimeline) {
  const Challenge c = bundled("number-timeline");
  const HarnessResult buggy = evaluate_harness(c.program, c.test_cases);
  ASSERT_EQ(buggy.per_case.size(), 2u);
  EXPECT_TRUE(buggy.per_case[0].passed);
  EXPECT_FALSE(buggy.per_case[1].passed);
  EXPECT_FALSE(buggy.all_passed);
  EXPECT_TRUE(evaluate_harness(primmdebug::testing::number_timeline_fixed(), c.test_cases).all_passed);
  EXPECT_THROW(evaluate_harness(c.program, {}), Error);
}

TEST(Exposure, BundledCorpus) {
  for (const auto& [id, c] : load_catalog(primmdebug::testing::challenge_dir())) {
    if (c.test_cases.empty()) continue;
    const ExposureReport r = verify_exposure(c);
    EXPECT_TRUE(r.ok) << id;
  }
  const ExposureReport nt = verify_exposure(bundled("number-timeline"));
  EXPECT_TRUE(nt.cases[1].observed_exposes);
  EXPECT_FALSE(nt.cases[0].observed_exposes);
}

TEST(Exposure, PassingBuggyProgramIsNotOk) {
  Challenge c = bundled("number-timeline");
  c.program = primmdebug::testing::number_timeline_fixed();
  const ExposureReport r = verify_exposure(c);
  EXPECT_FALSE(r.any_exposes);
  EXPECT_FALSE(r.ok);
}

TEST(Exposure, WrongAnnotationIsFlagged) {
  Challenge c = bundled("number-timeline");
  c.test_cases[0].exposes_error = true;
  const ExposureReport r = verify_exposure(c);
  EXPECT_FALSE(r.annotations_consistent);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(r.cases[0].annotated_exposes);
  EXPECT_FALSE(r.cases[0].observed_exposes);
}

TEST(Harness, CacheMemoises) {
  HarnessCache cache;
  const Challenge c = bundled("number-timeline");
  EXPECT_FALSE(cache.passes(c, c.program));
  EXPECT_FALSE(cache.passes(c, c.program));
  EXPECT_TRUE(cache.passes(c, primmdebug::testing::number_timeline_fixed()));
  EXPECT_EQ(cache.executions(), 2u);
}
