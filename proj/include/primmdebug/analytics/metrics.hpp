#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "primmdebug/analytics/stats.hpp"
#include "primmdebug/analytics/survey.hpp"
#include "primmdebug/challenge/challenge.hpp"
#include "primmdebug/session_log/summary.hpp"

namespace primmdebug::analytics {

struct StageTimeStats {
  std::vector<std::pair<Stage, Summary>> per_stage;  // canonical stage order, observed stages only
  Summary all_stages;     // every stage instance pooled
  Summary per_challenge;  // total duration of each attempt
};

// Dwell times in seconds. Error{kNoData} without sessions.
StageTimeStats stage_time_stats(std::span<const SessionSummary> sessions);

// Decides whether a program passes a challenge's full harness.
using HarnessJudge = std::function<bool(const Challenge&, const std::string& program)>;

struct SessionOutcome {
  std::string session_id;
  std::optional<std::string> participant_id;
  std::string challenge_id;
  bool success = false;
  bool judged_by_harness = true;  // false: challenge has no test cases
};

struct LocalisationStats {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::optional<double> rate;
  std::size_t first_attempt_total = 0;
  std::size_t first_attempt_correct = 0;
  std::optional<double> first_attempt_rate;
};

struct EngagementStats {
  std::size_t inspect_instances = 0;
  std::size_t inspect_zero_runs = 0;
  std::size_t inspect_without_response = 0;
  std::size_t test_instances = 0;
  std::size_t test_zero_runs = 0;
  std::size_t test_one_run = 0;
  std::optional<double> inspect_zero_run_fraction;
  std::optional<double> inspect_without_response_fraction;
  std::optional<double> test_zero_run_fraction;
  std::optional<double> test_one_run_fraction;
};

struct OutcomeStats {
  std::size_t attempts = 0;  // one per session
  std::size_t successes = 0;
  std::size_t judged_by_self_report = 0;
  std::optional<double> success_rate;
  LocalisationStats localisation;
  EngagementStats engagement;
  std::vector<SessionOutcome> sessions;  // input order
};

// An attempt succeeds iff its final ProgramRun snapshot passes the harness
// (re-judged via judge, never taken from the log). Challenges without test
// cases fall back to the last self-report. Error{kMissingChallenge} for
// logs naming an unknown challenge.
OutcomeStats outcome_stats(std::span<const SessionSummary> sessions,
                           const ChallengeCatalog& challenges, const HarnessJudge& judge);

inline constexpr std::array<std::string_view, 6> kCorrelationVariables = {
    "sifft_utility",           "restrictive_features_utility", "mean_time_per_challenge",
    "mean_time_per_stage",     "completed_challenges",         "attempted_challenges",
};

struct ParticipantVariables {
  std::string participant_id;
  std::array<std::optional<double>, 6> values;  // ordered as kCorrelationVariables
};

// Participants present in both the survey and the logs, sorted by id.
std::vector<ParticipantVariables> participant_variables(
    const SurveyTable& survey, std::span<const SessionSummary> sessions,
    const OutcomeStats& outcomes);

struct CorrelationMatrix {
  std::vector<std::string> variables;
  std::vector<std::vector<std::optional<double>>> tau;
  std::vector<std::vector<std::optional<double>>> p_value;
  std::vector<std::vector<std::size_t>> n;
};

// Pairwise Kendall tau-b over the six participant variables.
// Error{kJoin} when no participant appears in both inputs.
CorrelationMatrix correlation_matrix(const SurveyTable& survey,
                                     std::span<const SessionSummary> sessions,
                                     const OutcomeStats& outcomes);
CorrelationMatrix correlation_matrix(std::span<const ParticipantVariables> participants);

}  // namespace primmdebug::analytics
