#include "primmdebug/error.hpp"
#include "primmdebug/runner/runner.hpp"

namespace primmdebug {

HarnessResult evaluate_harness(std::string_view program, std::span<const TestCase> cases,
                               const RunRequest& defaults) {
  if (cases.empty()) {
    throw Error(ErrorCode::kPrecondition, "a harness needs at least one test case");
  }
  HarnessResult result;
  result.all_passed = true;
  for (const TestCase& tc : cases) {
    RunRequest req = defaults;
    req.program = std::string(program);
    req.stdin_lines = tc.inputs;
    RunResult run_result = run(req);

    CaseResult cr;
    cr.inputs = tc.inputs;
    cr.expected_output = tc.expected_output;
    cr.passed = outputs_match(run_result.stdout_text, tc.expected_output);
    cr.actual_output = std::move(run_result.stdout_text);
    result.all_passed = result.all_passed && cr.passed;
    result.per_case.push_back(std::move(cr));
  }
  return result;
}

ExposureReport verify_exposure(const Challenge& challenge, const RunRequest& defaults) {
  ExposureReport report;
  report.annotations_consistent = true;
  if (!challenge.test_cases.empty()) {
    const HarnessResult harness =
        evaluate_harness(challenge.program, challenge.test_cases, defaults);
    for (std::size_t i = 0; i < harness.per_case.size(); ++i) {
      CaseExposure ce{i, challenge.test_cases[i].exposes_error, !harness.per_case[i].passed};
      report.any_exposes = report.any_exposes || ce.observed_exposes;
      report.annotations_consistent =
          report.annotations_consistent && ce.annotated_exposes == ce.observed_exposes;
      report.cases.push_back(ce);
    }
  }
  report.ok = report.any_exposes && report.annotations_consistent;
  return report;
}

bool HarnessCache::passes(const Challenge& challenge, const std::string& program) {
  auto key = std::make_pair(challenge.id, program);
  {
    std::lock_guard lock(mutex_);
    if (auto it = verdicts_.find(key); it != verdicts_.end()) return it->second;
  }
  const bool verdict =
      !challenge.test_cases.empty() &&
      evaluate_harness(program, challenge.test_cases, defaults_).all_passed;
  std::lock_guard lock(mutex_);
  ++executions_;
  verdicts_.emplace(std::move(key), verdict);
  return verdict;
}

std::size_t HarnessCache::executions() const {
  std::lock_guard lock(mutex_);
  return executions_;
}

}  // namespace primmdebug
