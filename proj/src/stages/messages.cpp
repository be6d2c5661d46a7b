#include "primmdebug/stages/messages.hpp"

#include "primmdebug/challenge/challenge.hpp"
#include "primmdebug/stages/machine.hpp"

namespace primmdebug::messages {
namespace {

std::string join_inputs(const TestCase& tc) {
  std::string out;
  for (std::size_t i = 0; i < tc.inputs.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + tc.inputs[i] + "\"";
  }
  return out;
}

}  // namespace

std::string_view stage_title(Stage stage) {
  switch (stage) {
    case Stage::kPredict: return "Predict";
    case Stage::kRun: return "Run";
    case Stage::kSpotTheDefect: return "Spot the Defect";
    case Stage::kInspectTheCode: return "Inspect the Code";
    case Stage::kFindTheError: return "Find the Error";
    case Stage::kFixTheError: return "Fix the Error";
    case Stage::kTest: return "Test";
    case Stage::kModify: return "Modify";
    case Stage::kMake: return "Make";
  }
  return "";
}

std::string stage_prompt(const SessionState& state, const Challenge& challenge) {
  const bool has_cases = !challenge.test_cases.empty();
  const TestCase* current =
      has_cases && state.test_case_cursor < challenge.test_cases.size()
          ? &challenge.test_cases[state.test_case_cursor]
          : nullptr;
  switch (state.stage) {
    case Stage::kPredict:
      if (current && !current->inputs.empty()) {
        return "What do you think the program will output when you enter " +
               join_inputs(*current) + "? Write your prediction below.";
      }
      return "What do you think the program will output? Write your prediction below.";
    case Stage::kRun:
      if (current && !current->inputs.empty()) {
        return "Run the program and enter " + join_inputs(*current) +
               ". Was your prediction correct?";
      }
      return "Run the program. Was your prediction correct?";
    case Stage::kSpotTheDefect:
      return "Describe the difference between the expected output and the actual output.";
    case Stage::kInspectTheCode:
      return "What do you think is causing the error, and where? Re-read the description, "
             "the code and the test cases. You can run the program with other inputs.";
    case Stage::kFindTheError:
      if (challenge.error_spec.single_line) {
        return "Which line number is the error on?";
      }
      return "Describe where the error is in the program.";
    case Stage::kFixTheError:
      return "Change the program to fix the error, then describe what you changed.";
    case Stage::kTest:
      return "Run the program to test your fix. Did it work?";
    case Stage::kModify:
      if (challenge.modify_prompt) return *challenge.modify_prompt;
      return "Change the program so it does something new.";
    case Stage::kMake:
      return "Create your own version of the program.";
  }
  return "";
}

}  // namespace primmdebug::messages
