#include "primmdebug/analytics/metrics.hpp"

#include <map>

#include "primmdebug/error.hpp"

namespace primmdebug::analytics {
namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

StageTimeStats stage_time_stats(std::span<const SessionSummary> sessions) {
  if (sessions.empty()) throw Error(ErrorCode::kNoData, "no sessions to analyse");
  std::array<std::vector<double>, 9> by_stage;
  std::vector<double> pooled;
  std::vector<double> totals;
  for (const auto& s : sessions) {
    for (const auto& inst : s.stages) {
      by_stage[stage_index(inst.stage)].push_back(inst.dwell_seconds);
      pooled.push_back(inst.dwell_seconds);
    }
    totals.push_back(s.total_seconds);
  }
  if (pooled.empty()) throw Error(ErrorCode::kNoData, "sessions contain no stage instances");

  StageTimeStats stats;
  for (Stage st : kAllStages) {
    const auto& xs = by_stage[stage_index(st)];
    if (!xs.empty()) stats.per_stage.emplace_back(st, describe(xs));
  }
  stats.all_stages = describe(pooled);
  stats.per_challenge = describe(totals);
  return stats;
}

OutcomeStats outcome_stats(std::span<const SessionSummary> sessions,
                           const ChallengeCatalog& challenges, const HarnessJudge& judge) {
  OutcomeStats out;
  auto& loc = out.localisation;
  auto& eng = out.engagement;

  for (const auto& s : sessions) {
    auto it = challenges.find(s.challenge_id);
    if (it == challenges.end()) {
      throw Error(ErrorCode::kMissingChallenge,
                  "session " + s.session_id + " references unknown challenge '" +
                      s.challenge_id + "'");
    }
    const Challenge& challenge = it->second;

    SessionOutcome outcome{s.session_id, s.participant_id, s.challenge_id, false, true};
    if (challenge.test_cases.empty()) {
      outcome.judged_by_harness = false;
      outcome.success = s.final_self_report.value_or(false);
      ++out.judged_by_self_report;
    } else if (s.final_snapshot) {
      outcome.success = judge(challenge, s.final_snapshot->program);
    }
    ++out.attempts;
    if (outcome.success) ++out.successes;
    out.sessions.push_back(std::move(outcome));

    for (const auto& sel : s.selections) {
      ++loc.total;
      if (sel.correct) ++loc.correct;
    }
    if (s.first_selection_correct) {
      ++loc.first_attempt_total;
      if (*s.first_selection_correct) ++loc.first_attempt_correct;
    }

    for (const auto& inst : s.stages) {
      if (inst.stage == Stage::kInspectTheCode) {
        ++eng.inspect_instances;
        if (inst.run_count == 0) ++eng.inspect_zero_runs;
        if (!inst.has_articulated_response()) ++eng.inspect_without_response;
      } else if (inst.stage == Stage::kTest) {
        ++eng.test_instances;
        if (inst.run_count == 0) ++eng.test_zero_runs;
        if (inst.run_count == 1) ++eng.test_one_run;
      }
    }
  }

  out.success_rate = ratio(out.successes, out.attempts);
  loc.rate = ratio(loc.correct, loc.total);
  loc.first_attempt_rate = ratio(loc.first_attempt_correct, loc.first_attempt_total);
  eng.inspect_zero_run_fraction = ratio(eng.inspect_zero_runs, eng.inspect_instances);
  eng.inspect_without_response_fraction =
      ratio(eng.inspect_without_response, eng.inspect_instances);
  eng.test_zero_run_fraction = ratio(eng.test_zero_runs, eng.test_instances);
  eng.test_one_run_fraction = ratio(eng.test_one_run, eng.test_instances);
  return out;
}

std::vector<ParticipantVariables> participant_variables(
    const SurveyTable& survey, std::span<const SessionSummary> sessions,
    const OutcomeStats& outcomes) {
  std::map<std::string, bool> success_by_session;
  for (const auto& o : outcomes.sessions) success_by_session[o.session_id] = o.success;

  struct Accumulator {
    std::vector<double> challenge_times;
    std::vector<double> stage_times;
    std::size_t completed = 0;
  };
  std::map<std::string, Accumulator> by_participant;
  for (const auto& s : sessions) {
    if (!s.participant_id) continue;
    auto& acc = by_participant[*s.participant_id];
    acc.challenge_times.push_back(s.total_seconds);
    for (const auto& inst : s.stages) acc.stage_times.push_back(inst.dwell_seconds);
    if (auto it = success_by_session.find(s.session_id); it != success_by_session.end() && it->second) {
      ++acc.completed;
    }
  }

  std::vector<ParticipantVariables> rows;
  for (const auto& [participant, acc] : by_participant) {
    if (!survey.responses.contains(participant)) continue;
    ParticipantVariables row;
    row.participant_id = participant;
    row.values[0] = survey.value(participant, survey.scale.sifft_item);

    std::vector<double> restrictive;
    for (const auto& item : survey.scale.restrictive_items) {
      if (auto v = survey.value(participant, item)) restrictive.push_back(*v);
    }
    if (!restrictive.empty()) row.values[1] = mean(restrictive);
    row.values[2] = mean(acc.challenge_times);
    if (!acc.stage_times.empty()) row.values[3] = mean(acc.stage_times);
    row.values[4] = static_cast<double>(acc.completed);
    row.values[5] = static_cast<double>(acc.challenge_times.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

CorrelationMatrix correlation_matrix(std::span<const ParticipantVariables> participants) {
  if (participants.empty()) {
    throw Error(ErrorCode::kJoin, "no participant appears in both the survey and the logs");
  }
  const std::size_t k = kCorrelationVariables.size();
  CorrelationMatrix m;
  m.variables.assign(kCorrelationVariables.begin(), kCorrelationVariables.end());
  m.tau.assign(k, std::vector<std::optional<double>>(k));
  m.p_value.assign(k, std::vector<std::optional<double>>(k));
  m.n.assign(k, std::vector<std::size_t>(k, 0));

  std::vector<std::vector<std::optional<double>>> columns(k);
  for (const auto& p : participants) {
    for (std::size_t v = 0; v < k; ++v) columns[v].push_back(p.values[v]);
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      std::size_t complete = 0;
      for (std::size_t i = 0; i < participants.size(); ++i) {
        if (columns[a][i] && columns[b][i]) ++complete;
      }
      KendallResult r;
      r.n = complete;
      if (complete >= 2) r = kendall_tau_b(columns[a], columns[b]);
      m.tau[a][b] = m.tau[b][a] = r.tau;
      m.p_value[a][b] = m.p_value[b][a] = r.p_value;
      m.n[a][b] = m.n[b][a] = r.n;
    }
  }
  return m;
}

CorrelationMatrix correlation_matrix(const SurveyTable& survey,
                                     std::span<const SessionSummary> sessions,
                                     const OutcomeStats& outcomes) {
  const auto rows = participant_variables(survey, sessions, outcomes);
  return correlation_matrix(rows);
}

}  // namespace primmdebug::analytics
