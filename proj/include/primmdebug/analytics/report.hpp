#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "primmdebug/analytics/metrics.hpp"
#include "primmdebug/runner/runner.hpp"

namespace primmdebug::analytics {

enum class OutputFormat { kJson, kCsv };

struct AnalysisOptions {
  std::filesystem::path data_dir;
  std::filesystem::path challenge_dir;
  std::optional<std::filesystem::path> survey;
  SurveyScale scale;
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::kJson;
  RunRequest harness_defaults;
};

struct AnalysisResult {
  std::vector<SessionSummary> sessions;  // sorted by session_id
  StageTimeStats stage_times;
  OutcomeStats outcomes;
  std::optional<CorrelationMatrix> correlations;
  std::optional<double> restrictive_alpha;  // Cronbach alpha of the restrictive items
  std::optional<double> survey_alpha;       // over every survey item
  std::vector<std::string> warnings;        // skipped files, undefined alphas
  std::vector<std::filesystem::path> written;
};

// Loads logs, challenges and the optional survey, computes every metric and
// writes stage_times, outcomes and (with a survey) correlations into out_dir.
// Output bytes depend only on the inputs.
AnalysisResult run_analysis(const AnalysisOptions& options);

// Computation without file output; sessions are summarized and sorted here.
AnalysisResult analyse(std::vector<SessionSummary> sessions, const ChallengeCatalog& challenges,
                       const std::optional<SurveyTable>& survey, const HarnessJudge& judge);

std::string stage_times_json(const StageTimeStats& stats);
std::string stage_times_csv(const StageTimeStats& stats);
std::string outcomes_json(const OutcomeStats& stats);
std::string outcomes_csv(const OutcomeStats& stats);
std::string correlations_json(const CorrelationMatrix& m, std::optional<double> restrictive_alpha,
                              std::optional<double> survey_alpha);
std::string correlations_csv(const CorrelationMatrix& m);

// Shortest round-trip decimal form; "" for nullopt in CSV.
std::string format_number(double value);

}  // namespace primmdebug::analytics
