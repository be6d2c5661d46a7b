#include <gtest/gtest.h>

#include "primmdebug/error.hpp"
#include "primmdebug/stages/machine.hpp"
#include "primmdebug/stages/messages.hpp"
#include "properties.hpp"
#include "test_support.hpp"

using namespace primmdebug;
using primmdebug::testing::bundled;

namespace {

ErrorCode code_of(const SessionState& s, const TransitionEvent& ev, const Challenge& c) {
  try {
    advance(s, ev, c);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "event was accepted";
  return ErrorCode::kIo;
}

RunSnapshot snap(const SessionState& s) {
  RunSnapshot r;
  r.program = s.working_program;
  return r;
}

class NumberTimeline : public ::testing::Test {
 protected:
  Challenge c = bundled("number-timeline");

  SessionState apply(SessionState s, const TransitionEvent& ev) {
    return advance(s, ev, c).state;
  }

  SessionState at_spot() {
    SessionState s = begin_session(c).state;
    for (std::size_t i = 0; i < c.test_cases.size(); ++i) {
      s = apply(s, transition::SubmitResponse{"a prediction"});
      s = apply(s, transition::RunCompleted{snap(s)});
    }
    return s;
  }

  SessionState at_find() {
    SessionState s = apply(at_spot(), transition::SubmitResponse{"the last number is missing"});
    return apply(s, transition::SubmitResponse{"range stops early"});
  }

  SessionState at_test() {
    SessionState s = apply(at_find(), transition::SelectLine{6});
    return apply(s, transition::SubmitFix{primmdebug::testing::number_timeline_fixed(), "added +1"});
  }
};

}  // namespace

TEST_F(NumberTimeline, BeginsAtPredict) {
  const Transition t = begin_session(c);
  EXPECT_EQ(t.state.stage, Stage::kPredict);
  EXPECT_EQ(t.state.test_case_cursor, 0u);
  ASSERT_EQ(t.events.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<event::SessionStarted>(t.events[0]));
  EXPECT_TRUE(std::holds_alternative<event::StageEntered>(t.events[1]));
}

TEST_F(NumberTimeline, PredictRunCycles) {
  SessionState s = begin_session(c).state;
  s = apply(s, transition::SubmitResponse{"prints 25 to 29"});
  EXPECT_EQ(s.stage, Stage::kRun);
  EXPECT_EQ(s.test_case_cursor, 0u);
  s = apply(s, transition::RunCompleted{snap(s)});
  EXPECT_EQ(s.stage, Stage::kPredict);
  EXPECT_EQ(s.test_case_cursor, 1u);
  s = apply(s, transition::SubmitResponse{"prints 25 to 30"});
  s = apply(s, transition::RunCompleted{snap(s)});
  EXPECT_EQ(s.stage, Stage::kSpotTheDefect);
  EXPECT_EQ(s.predictions.size(), 2u);
  EXPECT_EQ(s.stage_entries[stage_index(Stage::kPredict)], 2);
  EXPECT_EQ(s.stage_entries[stage_index(Stage::kRun)], 2);
}

TEST(Machine, NoTestCasesGivesOneCycle) {
  const Challenge c = bundled("countdown");
  SessionState s = begin_session(c).state;
  s = advance(s, transition::SubmitResponse{"counts down"}, c).state;
  s = advance(s, transition::RunCompleted{snap(s)}, c).state;
  EXPECT_EQ(s.stage, Stage::kSpotTheDefect);
  EXPECT_EQ(s.stage_entries[stage_index(Stage::kPredict)], 1);
}

TEST_F(NumberTimeline, ArticulationRequiredAtPredict) {
  const SessionState s = begin_session(c).state;
  EXPECT_EQ(code_of(s, transition::SubmitResponse{""}, c), ErrorCode::kArticulationRejected);
  EXPECT_EQ(code_of(s, transition::SubmitResponse{"?!"}, c), ErrorCode::kArticulationRejected);
  EXPECT_EQ(apply(s, transition::SubmitResponse{"7"}).stage, Stage::kRun);
}

TEST_F(NumberTimeline, ArticulationRuleInEveryRequiredStage) {
  // Predict, Spot, Find (free text is the multi-line path), Fix; Test uses a self-report.
  const SessionState spot = at_spot();
  EXPECT_EQ(code_of(spot, transition::SubmitResponse{"..."}, c), ErrorCode::kArticulationRejected);
  const SessionState fix = apply(at_find(), transition::SelectLine{6});
  EXPECT_EQ(code_of(fix, transition::SubmitFix{c.program, "  "}, c), ErrorCode::kArticulationRejected);

  const Challenge swap = bundled("swap-values");
  SessionState s = begin_session(swap).state;
  while (s.stage == Stage::kPredict || s.stage == Stage::kRun) {
    s = s.stage == Stage::kPredict ? advance(s, transition::SubmitResponse{"x"}, swap).state
                                   : advance(s, transition::RunCompleted{snap(s)}, swap).state;
  }
  s = advance(s, transition::SubmitResponse{"x"}, swap).state;
  s = advance(s, transition::SubmitResponse{""}, swap).state;
  ASSERT_EQ(s.stage, Stage::kFindTheError);
  EXPECT_EQ(code_of(s, transition::SubmitResponse{"!"}, swap), ErrorCode::kArticulationRejected);
}

TEST_F(NumberTimeline, InspectResponseIsOptional) {
  SessionState s = apply(at_spot(), transition::SubmitResponse{"wrong"});
  ASSERT_EQ(s.stage, Stage::kInspectTheCode);
  s = apply(s, transition::SubmitResponse{""});
  EXPECT_EQ(s.stage, Stage::kFindTheError);
  EXPECT_TRUE(s.hypotheses.empty());
}

TEST_F(NumberTimeline, RunRejectedAtSpot) {
  const SessionState s = at_spot();
  EXPECT_EQ(code_of(s, transition::RunRequested{}, c), ErrorCode::kRunRejected);
  EXPECT_EQ(code_of(s, transition::RunCompleted{snap(s)}, c), ErrorCode::kRunRejected);
}

TEST_F(NumberTimeline, RunsAllowedInInspect) {
  SessionState s = apply(at_spot(), transition::SubmitResponse{"wrong"});
  const Transition t = advance(s, transition::RunCompleted{snap(s)}, c);
  EXPECT_EQ(t.state.stage, Stage::kInspectTheCode);
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<event::ProgramRun>(t.events[0]));
}

TEST_F(NumberTimeline, EditRejectedOutsideEditStages) {
  EXPECT_EQ(code_of(at_spot(), transition::SubmitFix{c.program, "change"}, c),
            ErrorCode::kEditRejected);
  EXPECT_EQ(code_of(at_test(), transition::SubmitFix{c.program, "change"}, c),
            ErrorCode::kEditRejected);
}

TEST_F(NumberTimeline, SkipInspectOnlyForSyntaxChallenges) {
  EXPECT_EQ(code_of(at_spot(), transition::SkipInspect{"syntax"}, c), ErrorCode::kIllegalEvent);
  const Challenge g = bundled("greeting");
  SessionState s = begin_session(g).state;
  while (s.stage != Stage::kSpotTheDefect) {
    s = s.stage == Stage::kPredict ? advance(s, transition::SubmitResponse{"x"}, g).state
                                   : advance(s, transition::RunCompleted{snap(s)}, g).state;
  }
  EXPECT_EQ(advance(s, transition::SkipInspect{"missing colon"}, g).state.stage,
            Stage::kFindTheError);
}

TEST_F(NumberTimeline, CorrectLineUnlocksFix) {
  const SessionState find = at_find();
  const auto result = check_localisation(find, c, 6);
  EXPECT_TRUE(result.correct);
  const Transition t = advance(find, transition::SelectLine{6}, c);
  EXPECT_EQ(t.state.stage, Stage::kFixTheError);
  EXPECT_TRUE(t.state.localised);
}

TEST_F(NumberTimeline, WrongLineGivesHintNextIteration) {
  const SessionState find = at_find();
  const auto result = check_localisation(find, c, 3);
  EXPECT_FALSE(result.correct);
  ASSERT_TRUE(result.hint);
  EXPECT_EQ(*result.hint, c.hints[0]);

  const Transition t = advance(find, transition::SelectLine{3}, c);
  EXPECT_EQ(t.state.stage, Stage::kFindTheError);
  EXPECT_EQ(t.state.find_attempts, 1);
  EXPECT_EQ(visible_hints(t.state, c), std::vector<std::string>{c.hints[0]});
  ASSERT_EQ(t.events.size(), 2u);
  const auto* hint = std::get_if<event::HintShown>(&t.events[1]);
  ASSERT_NE(hint, nullptr);
  EXPECT_EQ(hint->index, 0);

  // Second miss escalates; the hint also shows after going back to Inspect.
  SessionState s = apply(t.state, transition::SelectLine{2});
  EXPECT_EQ(visible_hints(s, c).size(), 2u);
  s = apply(s, transition::ReturnToInspect{});
  EXPECT_EQ(s.stage, Stage::kInspectTheCode);
  EXPECT_EQ(visible_hints(s, c).size(), 2u);
}

TEST_F(NumberTimeline, HintsClampToLast) {
  SessionState s = at_find();
  for (int line : {1, 2, 3, 4, 5}) s = apply(s, transition::SelectLine{line});
  EXPECT_EQ(s.hints_shown, 5);
  EXPECT_EQ(visible_hints(s, c), c.hints);
  EXPECT_EQ(check_localisation(s, c, 1).hint, c.hints.back());
}

TEST_F(NumberTimeline, LineZeroIsOutOfRange) {
  EXPECT_EQ(code_of(at_find(), transition::SelectLine{0}, c), ErrorCode::kOutOfRange);
  EXPECT_EQ(code_of(at_find(), transition::SelectLine{8}, c), ErrorCode::kOutOfRange);
  EXPECT_THROW(check_localisation(at_find(), c, 0), Error);
}

TEST_F(NumberTimeline, FixUnreachableWithoutCorrectSelection) {
  const SessionState find = at_find();
  EXPECT_EQ(code_of(find, transition::SubmitResponse{"line six"}, c), ErrorCode::kIllegalEvent);
  EXPECT_EQ(code_of(find, transition::SubmitFix{c.program, "fix"}, c), ErrorCode::kEditRejected);
  for (int line = 1; line <= 7; ++line) {
    if (line == 6) continue;
    EXPECT_EQ(apply(find, transition::SelectLine{line}).stage, Stage::kFindTheError);
  }
}

TEST(Machine, MultiLineFindAcceptsAnyResponse) {
  const Challenge c = bundled("swap-values");
  SessionState s = begin_session(c).state;
  while (s.stage != Stage::kSpotTheDefect) {
    s = s.stage == Stage::kPredict ? advance(s, transition::SubmitResponse{"x"}, c).state
                                   : advance(s, transition::RunCompleted{snap(s)}, c).state;
  }
  s = advance(s, transition::SubmitResponse{"both the same"}, c).state;
  s = advance(s, transition::SubmitResponse{"overwrite"}, c).state;
  ASSERT_EQ(s.stage, Stage::kFindTheError);
  EXPECT_THROW(advance(s, transition::SelectLine{3}, c), Error);
  EXPECT_THROW(check_localisation(s, c, 3), Error);
  EXPECT_EQ(advance(s, transition::SubmitResponse{"lines 3 and 4"}, c).state.stage,
            Stage::kFixTheError);
}

TEST_F(NumberTimeline, FixMovesToTest) {
  const SessionState s = at_test();
  EXPECT_EQ(s.stage, Stage::kTest);
  EXPECT_EQ(s.working_program, primmdebug::testing::number_timeline_fixed());
}

TEST_F(NumberTimeline, NoDiffFixIsAccepted) {
  const SessionState fix = apply(at_find(), transition::SelectLine{6});
  const Transition t = advance(fix, transition::SubmitFix{c.program, "I think it is right"}, c);
  EXPECT_EQ(t.state.stage, Stage::kTest);
  EXPECT_TRUE(std::holds_alternative<event::ProgramEdited>(t.events[0]));
}

TEST_F(NumberTimeline, ApplyFixDirect) {
  const SessionState fix = apply(at_find(), transition::SelectLine{6});
  EXPECT_EQ(apply_fix(fix, "x = 1\n", "added +1 to range end").working_program, "x = 1\n");
  EXPECT_THROW(apply_fix(fix, "x = 1\n", ""), Error);
  EXPECT_THROW(apply_fix(at_find(), "x = 1\n", "change"), Error);
}

TEST_F(NumberTimeline, FailedTestResetsProgram) {
  const SessionState test = at_test();
  const SessionState retry =
      apply(test, transition::ReportOutcome{false, NextStep::kFix, std::nullopt});
  EXPECT_EQ(retry.stage, Stage::kFixTheError);
  EXPECT_EQ(retry.working_program, retry.original_program);
  EXPECT_EQ(retry.fix_attempts, 1);
  EXPECT_EQ(retry.hints_shown, 1);

  const SessionState back =
      apply(test, transition::ReportOutcome{false, NextStep::kInspect, std::nullopt});
  EXPECT_EQ(back.stage, Stage::kInspectTheCode);
  EXPECT_EQ(back.working_program, back.original_program);
}

TEST_F(NumberTimeline, SuccessfulTestBranches) {
  const SessionState test = at_test();
  const SessionState modify =
      apply(test, transition::ReportOutcome{true, NextStep::kModify, std::nullopt});
  EXPECT_EQ(modify.stage, Stage::kModify);
  EXPECT_TRUE(modify.completed);
  const SessionState make = apply(modify, transition::ChooseExtension{Extension::kMake});
  EXPECT_EQ(make.stage, Stage::kMake);
  const SessionState done = apply(make, transition::ChooseExtension{Extension::kFinish});
  EXPECT_TRUE(done.finished);
  EXPECT_THROW(advance(done, transition::SubmitResponse{"more"}, c), Error);

  const SessionState finished =
      apply(test, transition::ReportOutcome{true, NextStep::kFinish, std::nullopt});
  EXPECT_TRUE(finished.finished);
  EXPECT_EQ(finished.finished_at_stage, Stage::kTest);
  EXPECT_EQ(code_of(test, transition::ReportOutcome{true, NextStep::kFix, std::nullopt}, c),
            ErrorCode::kIllegalEvent);
}

TEST_F(NumberTimeline, ModifyCanRunAndEdit) {
  SessionState s = apply(at_test(), transition::ReportOutcome{true, NextStep::kModify, std::nullopt});
  const Transition edit = advance(s, transition::SubmitFix{"print(1)\n", ""}, c);
  EXPECT_EQ(edit.state.stage, Stage::kModify);
  EXPECT_EQ(edit.state.working_program, "print(1)\n");
  EXPECT_EQ(advance(edit.state, transition::RunCompleted{snap(edit.state)}, c).state.stage,
            Stage::kModify);
}

TEST_F(NumberTimeline, PromptsMentionTestInputs) {
  const SessionState s = begin_session(c).state;
  const std::string prompt = messages::stage_prompt(s, c);
  EXPECT_NE(prompt.find("10"), std::string::npos);
}

TEST(MachineProperties, RandomSequences) {
  std::vector<Challenge> all;
  for (const auto& [id, ch] : load_catalog(primmdebug::testing::challenge_dir())) all.push_back(ch);
  const auto report = primmdebug::testing::random_walks(all, 2000, 7);
  EXPECT_EQ(report.violation_count, 0u);
  for (const auto& v : report.violations) ADD_FAILURE() << v;
  for (Stage st : kAllStages) EXPECT_GT(report.stage_visits[stage_index(st)], 0u) << to_string(st);
  EXPECT_GT(report.test_failures, 0u);
  EXPECT_GT(report.finished, 0u);
}
