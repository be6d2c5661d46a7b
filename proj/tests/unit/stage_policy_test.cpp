#include <gtest/gtest.h>

#include "corpus.hpp"
#include "primmdebug/stages/stage.hpp"

using namespace primmdebug;

namespace {

struct Row {
  Stage stage;
  bool run;
  bool edit;
  ResponseRequirement response;
  ResponseKind kind;
};

constexpr ResponseRequirement kReq = ResponseRequirement::kRequired;
constexpr ResponseRequirement kOpt = ResponseRequirement::kOptional;
constexpr ResponseRequirement kNone = ResponseRequirement::kNone;

const Row kTable[] = {
    {Stage::kPredict, false, false, kReq, ResponseKind::kFreeText},
    {Stage::kRun, true, false, kNone, ResponseKind::kFreeText},
    {Stage::kSpotTheDefect, false, false, kReq, ResponseKind::kFreeText},
    {Stage::kInspectTheCode, true, false, kOpt, ResponseKind::kFreeText},
    {Stage::kFindTheError, false, false, kReq, ResponseKind::kLineSelectOrFreeText},
    {Stage::kFixTheError, false, true, kReq, ResponseKind::kFreeText},
    {Stage::kTest, true, false, kReq, ResponseKind::kSelfReport},
    {Stage::kModify, true, true, kOpt, ResponseKind::kFreeText},
    {Stage::kMake, true, true, kNone, ResponseKind::kFreeText},
};

}  // namespace

TEST(StagePolicy, FullTable) {
  ASSERT_EQ(std::size(kTable), kAllStages.size());
  for (const Row& row : kTable) {
    const StagePolicy p = policy(row.stage);
    EXPECT_EQ(p.can_run, row.run) << to_string(row.stage);
    EXPECT_EQ(p.can_edit, row.edit) << to_string(row.stage);
    EXPECT_EQ(p.response, row.response) << to_string(row.stage);
    if (row.response != kNone) {
      EXPECT_EQ(p.response_kind, row.kind) << to_string(row.stage);
    }
  }
}

TEST(StagePolicy, OnlyModifyAndMakeRunAndEdit) {
  for (Stage s : kAllStages) {
    const StagePolicy p = policy(s);
    EXPECT_EQ(p.can_run && p.can_edit, s == Stage::kModify || s == Stage::kMake);
  }
}

TEST(StagePolicy, CanonicalNames) {
  const char* names[] = {"Predict",      "Run",       "SpotTheDefect", "InspectTheCode", "FindTheError",
                         "FixTheError", "Test",      "Modify",        "Make"};
  for (std::size_t i = 0; i < kAllStages.size(); ++i) {
    EXPECT_EQ(to_string(kAllStages[i]), names[i]);
    EXPECT_EQ(stage_from_string(names[i]), kAllStages[i]);
  }
  EXPECT_FALSE(stage_from_string("predict"));
}

TEST(Articulation, Examples) {
  EXPECT_TRUE(validate_articulation("the range stops at B"));
  EXPECT_FALSE(validate_articulation("!!! ... ???"));
  EXPECT_TRUE(validate_articulation("7"));
}

TEST(Articulation, Corpus) {
  const auto& corpus = primmdebug::testing::articulation_corpus();
  ASSERT_EQ(corpus.size(), 50u);
  for (const auto& [text, accepted] : corpus) {
    EXPECT_EQ(validate_articulation(text), accepted) << "'" << text << "'";
  }
}

TEST(Articulation, MalformedUtf8HasNoLetters) {
  EXPECT_FALSE(validate_articulation("\xff\xfe"));
  EXPECT_FALSE(validate_articulation("\xe6\xbc"));  // truncated
  EXPECT_TRUE(validate_articulation("\xff" "a"));
}
