#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace primmdebug::oracle {
namespace {

using ld = long double;

bool constant(const std::vector<double>& xs) {
  for (double x : xs) {
    if (x != xs.front()) return false;
  }
  return true;
}

ld variance(const std::vector<double>& xs) {
  const ld m = mean(xs);
  ld ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<ld>(xs.size() - 1);
}

ld tie_term(const std::vector<double>& v, int kind) {
  std::map<double, ld> counts;
  for (double x : v) counts[x] += 1;
  ld sum = 0;
  for (const auto& [value, t] : counts) {
    if (kind == 0) sum += t * (t - 1) / 2;
    if (kind == 2) sum += t * (t - 1) * (t - 2);
    if (kind == 5) sum += t * (t - 1) * (2 * t + 5);
  }
  return sum;
}

}  // namespace

double mean(const std::vector<double>& xs) {
  ld s = 0;
  for (double x : xs) s += x;
  return static_cast<double>(s / static_cast<ld>(xs.size()));
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

std::optional<double> sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return std::nullopt;
  return static_cast<double>(std::sqrt(variance(xs)));
}

std::optional<double> skewness(const std::vector<double>& xs) {
  if (xs.size() < 3 || constant(xs)) return std::nullopt;
  const ld n = static_cast<ld>(xs.size());
  const ld m = mean(xs);
  const ld s = std::sqrt(variance(xs));
  ld sum = 0;
  for (double x : xs) {
    const ld z = (x - m) / s;
    sum += z * z * z;
  }
  return static_cast<double>(n / ((n - 1) * (n - 2)) * sum);
}

std::optional<double> tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  long long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0, pairs = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      ++pairs;
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0) ++tied_x;
      if (dy == 0) ++tied_y;
      if (dx == 0 || dy == 0) continue;
      if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long long a = pairs - tied_x;
  const long long b = pairs - tied_y;
  if (a == 0 || b == 0) return std::nullopt;
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(a) * static_cast<double>(b));
}

std::optional<double> tau_p_value(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 3 || !tau_b(x, y)) return std::nullopt;
  long long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double prod = (x[i] - x[j]) * (y[i] - y[j]);
      s += prod > 0 ? 1 : prod < 0 ? -1 : 0;
    }
  }
  const ld n = static_cast<ld>(x.size());
  const ld v0 = n * (n - 1) * (2 * n + 5);
  const ld var = (v0 - tie_term(x, 5) - tie_term(y, 5)) / 18 +
                 tie_term(x, 2) * tie_term(y, 2) / (9 * n * (n - 1) * (n - 2)) +
                 2 * tie_term(x, 0) * tie_term(y, 0) / (n * (n - 1));
  if (var <= 0) return std::nullopt;
  const ld z = static_cast<ld>(s) / std::sqrt(var);
  return static_cast<double>(std::erfc(std::fabs(z) / std::sqrt(2.0L)));
}

double cronbach_alpha(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.front().size();
  ld item_sum = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> col;
    for (const auto& r : rows) col.push_back(r[j]);
    item_sum += variance(col);
  }
  std::vector<double> totals;
  for (const auto& r : rows) {
    ld t = 0;
    for (double v : r) t += v;
    totals.push_back(static_cast<double>(t));
  }
  const ld kk = static_cast<ld>(k);
  return static_cast<double>(kk / (kk - 1) * (1 - item_sum / variance(totals)));
}

SummaryValues summarize(const std::vector<double>& xs) {
  return {xs.size(), mean(xs), median(xs), sample_sd(xs), skewness(xs)};
}

Pipeline pipeline(const sim::CohortTrace& trace) {
  Pipeline out;
  std::map<Stage, std::vector<double>> by_stage;
  std::vector<double> pooled, totals;

  struct Person {
    std::vector<double> session_times, stage_times;
    double completed = 0;
  };
  std::map<std::string, Person> people;

  double successes = 0, loc_total = 0, loc_correct = 0, first_total = 0, first_correct = 0;
  double inspect = 0, inspect_zero = 0, inspect_silent = 0, test = 0, test_zero = 0, test_one = 0;
  double self_judged = 0;
  for (const auto& s : trace.sessions) {
    Person& who = people[s.participant_id];
    for (const auto& st : s.stages) {
      const double dwell = static_cast<double>(st.exited_ms - st.entered_ms) / 1000.0;
      by_stage[st.stage].push_back(dwell);
      pooled.push_back(dwell);
      who.stage_times.push_back(dwell);
      if (st.stage == Stage::kInspectTheCode) {
        ++inspect;
        if (st.runs == 0) ++inspect_zero;
        if (!st.articulated_response) ++inspect_silent;
      }
      if (st.stage == Stage::kTest) {
        ++test;
        if (st.runs == 0) ++test_zero;
        if (st.runs == 1) ++test_one;
      }
    }
    const double total = static_cast<double>(s.last_ms - s.started_ms) / 1000.0;
    totals.push_back(total);
    who.session_times.push_back(total);
    if (s.success) {
      ++successes;
      ++who.completed;
    }
    if (s.challenge_id == "countdown") ++self_judged;
    for (bool c : s.selections) {
      ++loc_total;
      if (c) ++loc_correct;
    }
    if (!s.selections.empty()) {
      ++first_total;
      if (s.selections.front()) ++first_correct;
    }
  }
  for (auto& [stage, xs] : by_stage) out.per_stage[stage] = summarize(xs);
  out.all_stages = summarize(pooled);
  out.per_challenge = summarize(totals);

  auto rate = [](double a, double b) { return b == 0 ? std::optional<double>() : a / b; };
  const double attempts = static_cast<double>(trace.sessions.size());
  out.outcomes = {
      {"attempts", attempts},
      {"successes", successes},
      {"success_rate", rate(successes, attempts)},
      {"judged_by_self_report", self_judged},
      {"localisation_total", loc_total},
      {"localisation_correct", loc_correct},
      {"localisation_rate", rate(loc_correct, loc_total)},
      {"localisation_first_attempt_total", first_total},
      {"localisation_first_attempt_correct", first_correct},
      {"localisation_first_attempt_rate", rate(first_correct, first_total)},
      {"inspect_instances", inspect},
      {"inspect_zero_runs", inspect_zero},
      {"inspect_zero_run_fraction", rate(inspect_zero, inspect)},
      {"inspect_without_response", inspect_silent},
      {"inspect_without_response_fraction", rate(inspect_silent, inspect)},
      {"test_instances", test},
      {"test_zero_runs", test_zero},
      {"test_zero_run_fraction", rate(test_zero, test)},
      {"test_one_run", test_one},
      {"test_one_run_fraction", rate(test_one, test)},
  };

  const std::vector<std::string> restrictive = {"forced_articulation", "restricted_running",
                                                "restricted_editing", "forced_localisation"};
  out.variables = {"sifft_utility",       "restrictive_features_utility",
                   "mean_time_per_challenge", "mean_time_per_stage",
                   "completed_challenges", "attempted_challenges"};
  const std::size_t k = out.variables.size();
  std::vector<std::vector<std::optional<double>>> columns(k);
  std::vector<std::vector<double>> restrictive_rows, all_rows;
  for (const auto& row : trace.survey) {
    std::vector<double> r, a;
    for (const auto& item : restrictive) {
      if (auto v = row.items.at(item)) r.push_back(*v);
    }
    for (const auto& item : trace.survey_items) {
      if (auto v = row.items.at(item)) a.push_back(*v);
    }
    if (r.size() == restrictive.size()) restrictive_rows.push_back(r);
    if (a.size() == trace.survey_items.size()) all_rows.push_back(a);

    auto it = people.find(row.participant_id);
    if (it == people.end()) continue;
    const Person& who = it->second;
    const auto sifft = row.items.at("sifft_utility");
    columns[0].push_back(sifft ? std::optional<double>(*sifft) : std::nullopt);
    columns[1].push_back(r.empty() ? std::nullopt : std::optional<double>(mean(r)));
    columns[2].push_back(mean(who.session_times));
    columns[3].push_back(mean(who.stage_times));
    columns[4].push_back(who.completed);
    columns[5].push_back(static_cast<double>(who.session_times.size()));
  }
  out.restrictive_alpha = cronbach_alpha(restrictive_rows);
  out.all_items_alpha = cronbach_alpha(all_rows);

  out.tau.assign(k, std::vector<std::optional<double>>(k));
  out.p_value = out.tau;
  out.n.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      std::vector<double> x, y;
      for (std::size_t i = 0; i < columns[a].size(); ++i) {
        if (columns[a][i] && columns[b][i]) {
          x.push_back(*columns[a][i]);
          y.push_back(*columns[b][i]);
        }
      }
      out.n[a][b] = x.size();
      if (x.size() < 2) continue;
      out.tau[a][b] = tau_b(x, y);
      out.p_value[a][b] = tau_p_value(x, y);
    }
  }
  return out;
}

}  // namespace primmdebug::oracle
