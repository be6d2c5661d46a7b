#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace primmdebug::analytics {

// Which survey items feed the two composite variables, and the Likert range
// every item must respect.
struct SurveyScale {
  std::string sifft_item = "sifft_utility";
  std::vector<std::string> restrictive_items = {"forced_articulation", "restricted_running",
                                                "restricted_editing", "forced_localisation"};
  int min_value = 1;
  int max_value = 5;
};

struct SurveyTable {
  SurveyScale scale;
  std::vector<std::string> item_ids;
  std::vector<std::string> participants;  // file order
  std::map<std::string, std::vector<std::optional<double>>, std::less<>> responses;

  std::optional<double> value(std::string_view participant, std::string_view item) const;
};

// Header row "participant_id,<item>,..."; one row per participant; empty
// cells are missing values. Error{kSchema} for header problems or duplicate
// participants, Error{kParse} for non-numeric cells and Error{kInvariant}
// for responses outside the scale.
SurveyTable parse_survey_csv(std::string_view text, SurveyScale scale = {});
SurveyTable load_survey_csv(const std::filesystem::path& path, SurveyScale scale = {});

}  // namespace primmdebug::analytics
