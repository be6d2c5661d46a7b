#include "primmdebug/analytics/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "primmdebug/error.hpp"
#include "primmdebug/session_log/store.hpp"

namespace primmdebug::analytics {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json opt(std::optional<double> v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

// Counts print as integers.
ordered_json metric(std::optional<double> v) {
  if (v && std::trunc(*v) == *v && std::abs(*v) < 9.0e15) return static_cast<std::int64_t>(*v);
  return opt(v);
}

std::string cell(std::optional<double> v) { return v ? format_number(*v) : std::string(); }

ordered_json summary_json(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean},          {"median", s.median},
          {"sd", opt(s.sd)},  {"skewness", opt(s.skewness)}};
}

std::string summary_row(std::string_view scope, const Summary& s) {
  std::string row(scope);
  row += ',' + std::to_string(s.count) + ',' + format_number(s.mean) + ',' +
         format_number(s.median) + ',' + cell(s.sd) + ',' + cell(s.skewness) + '\n';
  return row;
}

std::vector<std::pair<std::string, std::optional<double>>> outcome_metrics(const OutcomeStats& s) {
  const auto& l = s.localisation;
  const auto& e = s.engagement;
  auto count = [](std::size_t n) { return std::optional<double>(static_cast<double>(n)); };
  return {
      {"attempts", count(s.attempts)},
      {"successes", count(s.successes)},
      {"success_rate", s.success_rate},
      {"judged_by_self_report", count(s.judged_by_self_report)},
      {"localisation_total", count(l.total)},
      {"localisation_correct", count(l.correct)},
      {"localisation_rate", l.rate},
      {"localisation_first_attempt_total", count(l.first_attempt_total)},
      {"localisation_first_attempt_correct", count(l.first_attempt_correct)},
      {"localisation_first_attempt_rate", l.first_attempt_rate},
      {"inspect_instances", count(e.inspect_instances)},
      {"inspect_zero_runs", count(e.inspect_zero_runs)},
      {"inspect_zero_run_fraction", e.inspect_zero_run_fraction},
      {"inspect_without_response", count(e.inspect_without_response)},
      {"inspect_without_response_fraction", e.inspect_without_response_fraction},
      {"test_instances", count(e.test_instances)},
      {"test_zero_runs", count(e.test_zero_runs)},
      {"test_zero_run_fraction", e.test_zero_run_fraction},
      {"test_one_run", count(e.test_one_run)},
      {"test_one_run_fraction", e.test_one_run_fraction},
  };
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::optional<double> alpha_over(const SurveyTable& survey, const std::vector<std::string>& items,
                                 std::string_view label, std::vector<std::string>& warnings) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : survey.participants) {
    std::vector<double> row;
    for (const auto& item : items) {
      if (auto v = survey.value(p, item)) row.push_back(*v);
    }
    if (row.size() == items.size()) rows.push_back(std::move(row));
  }
  try {
    return cronbach_alpha(rows);
  } catch (const Error& e) {
    warnings.push_back(std::string(label) + " alpha undefined: " + e.what());
    return std::nullopt;
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error(ErrorCode::kInvariant, "cannot format number");
  return std::string(buf, end);
}

std::string stage_times_json(const StageTimeStats& stats) {
  ordered_json per_stage = ordered_json::array();
  for (const auto& [stage, s] : stats.per_stage) {
    ordered_json row = {{"stage", std::string(to_string(stage))}};
    row.update(summary_json(s));
    per_stage.push_back(std::move(row));
  }
  ordered_json doc = {{"per_stage", per_stage},
                      {"all_stages", summary_json(stats.all_stages)},
                      {"per_challenge", summary_json(stats.per_challenge)}};
  return doc.dump(2) + "\n";
}

std::string stage_times_csv(const StageTimeStats& stats) {
  std::string out = "scope,count,mean,median,sd,skewness\n";
  for (const auto& [stage, s] : stats.per_stage) out += summary_row(to_string(stage), s);
  out += summary_row("all_stages", stats.all_stages);
  out += summary_row("per_challenge", stats.per_challenge);
  return out;
}

std::string outcomes_json(const OutcomeStats& stats) {
  ordered_json doc = ordered_json::object();
  for (const auto& [name, value] : outcome_metrics(stats)) doc[name] = metric(value);
  ordered_json sessions = ordered_json::array();
  for (const auto& o : stats.sessions) {
    sessions.push_back({{"session_id", o.session_id},
                        {"participant_id", o.participant_id ? ordered_json(*o.participant_id)
                                                            : ordered_json(nullptr)},
                        {"challenge_id", o.challenge_id},
                        {"success", o.success},
                        {"judged_by_harness", o.judged_by_harness}});
  }
  doc["sessions"] = std::move(sessions);
  return doc.dump(2) + "\n";
}

std::string outcomes_csv(const OutcomeStats& stats) {
  std::string out = "metric,value\n";
  for (const auto& [name, value] : outcome_metrics(stats)) out += name + ',' + cell(value) + '\n';
  return out;
}

std::string correlations_json(const CorrelationMatrix& m, std::optional<double> restrictive_alpha,
                              std::optional<double> survey_alpha) {
  ordered_json tau = ordered_json::array();
  ordered_json p = ordered_json::array();
  for (std::size_t a = 0; a < m.variables.size(); ++a) {
    ordered_json tau_row = ordered_json::array();
    ordered_json p_row = ordered_json::array();
    for (std::size_t b = 0; b < m.variables.size(); ++b) {
      tau_row.push_back(opt(m.tau[a][b]));
      p_row.push_back(opt(m.p_value[a][b]));
    }
    tau.push_back(std::move(tau_row));
    p.push_back(std::move(p_row));
  }
  ordered_json doc = {{"variables", m.variables},
                      {"tau", tau},
                      {"p_value", p},
                      {"n", m.n},
                      {"cronbach_alpha",
                       {{"restrictive_features", opt(restrictive_alpha)},
                        {"all_items", opt(survey_alpha)}}}};
  return doc.dump(2) + "\n";
}

std::string correlations_csv(const CorrelationMatrix& m) {
  std::string out = "var_a,var_b,tau,p_value,n\n";
  for (std::size_t a = 0; a < m.variables.size(); ++a) {
    for (std::size_t b = 0; b < m.variables.size(); ++b) {
      out += m.variables[a] + ',' + m.variables[b] + ',' + cell(m.tau[a][b]) + ',' +
             cell(m.p_value[a][b]) + ',' + std::to_string(m.n[a][b]) + '\n';
    }
  }
  return out;
}

AnalysisResult analyse(std::vector<SessionSummary> sessions, const ChallengeCatalog& challenges,
                       const std::optional<SurveyTable>& survey, const HarnessJudge& judge) {
  std::sort(sessions.begin(), sessions.end(),
            [](const auto& a, const auto& b) { return a.session_id < b.session_id; });
  AnalysisResult result;
  result.stage_times = stage_time_stats(sessions);
  result.outcomes = outcome_stats(sessions, challenges, judge);
  if (survey) {
    result.correlations = correlation_matrix(*survey, sessions, result.outcomes);
    result.restrictive_alpha =
        alpha_over(*survey, survey->scale.restrictive_items, "restrictive features", result.warnings);
    result.survey_alpha = alpha_over(*survey, survey->item_ids, "all items", result.warnings);
  }
  result.sessions = std::move(sessions);
  return result;
}

AnalysisResult run_analysis(const AnalysisOptions& options) {
  std::vector<std::string> warnings;
  std::vector<LoadWarning> load_warnings;
  const ChallengeCatalog challenges = load_catalog(options.challenge_dir, &load_warnings);
  for (const auto& w : load_warnings) warnings.push_back(w.path.string() + ": " + w.message);

  std::vector<SessionSummary> summaries;
  std::vector<std::string> unreadable;
  const auto logs = read_all_sessions(options.data_dir, &unreadable);
  for (const auto& u : unreadable) warnings.push_back(u + " (skipped)");
  for (const auto& loaded : logs) {
    try {
      summaries.push_back(summarize(loaded.events));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMalformedSession) throw;
      warnings.push_back(loaded.file.filename().string() + ": skipped: " + e.what());
    }
  }

  std::optional<SurveyTable> survey;
  if (options.survey) survey = load_survey_csv(*options.survey, options.scale);

  HarnessCache cache(options.harness_defaults);
  HarnessJudge judge = [&cache](const Challenge& c, const std::string& program) {
    return cache.passes(c, program);
  };
  AnalysisResult result = analyse(std::move(summaries), challenges, survey, judge);
  result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + options.out_dir.string());
  const bool json = options.format == OutputFormat::kJson;
  const std::string ext = json ? ".json" : ".csv";
  auto emit = [&](const std::string& stem, const std::string& content) {
    auto path = options.out_dir / (stem + ext);
    write_file(path, content);
    result.written.push_back(std::move(path));
  };
  emit("stage_times", json ? stage_times_json(result.stage_times)
                           : stage_times_csv(result.stage_times));
  emit("outcomes", json ? outcomes_json(result.outcomes) : outcomes_csv(result.outcomes));
  if (result.correlations) {
    emit("correlations",
         json ? correlations_json(*result.correlations, result.restrictive_alpha,
                                  result.survey_alpha)
              : correlations_csv(*result.correlations));
  }
  return result;
}

}  // namespace primmdebug::analytics
