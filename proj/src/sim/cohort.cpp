#include "primmdebug/sim/cohort.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>

#include "primmdebug/error.hpp"
#include "primmdebug/session_log/store.hpp"
#include "primmdebug/stages/machine.hpp"

namespace primmdebug::sim {
namespace {

// Engine output only; the std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool coin(double p) { return unit() < p; }
  int below(int n) { return static_cast<int>(unit() * n); }
  double normal() {
    const double u1 = 1.0 - unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  template <std::size_t N>
  int weighted(const std::array<double, N>& weights) {
    double r = unit();
    for (std::size_t i = 0; i < N; ++i) {
      if (r < weights[i]) return static_cast<int>(i);
      r -= weights[i];
    }
    return static_cast<int>(N - 1);
  }

 private:
  std::mt19937_64 engine_;
};

std::string replace_line(const std::string& program, int line, const std::string& text) {
  std::string out;
  int current = 1;
  std::size_t pos = 0;
  while (pos <= program.size()) {
    std::size_t end = program.find('\n', pos);
    const bool last = end == std::string::npos;
    if (last) end = program.size();
    if (current == line) {
      out += text;
    } else {
      out.append(program, pos, end - pos);
    }
    if (last) break;
    out += '\n';
    pos = end + 1;
    ++current;
  }
  return out;
}

std::string with_lines(const Challenge& c, std::initializer_list<std::pair<int, std::string>> edits) {
  std::string p = c.program;
  for (const auto& [line, text] : edits) p = replace_line(p, line, text);
  return p;
}

double median_dwell(Stage s) {
  switch (s) {
    case Stage::kPredict: return 40;
    case Stage::kRun: return 12;
    case Stage::kSpotTheDefect: return 30;
    case Stage::kInspectTheCode: return 35;
    case Stage::kFindTheError: return 20;
    case Stage::kFixTheError: return 55;
    case Stage::kTest: return 25;
    case Stage::kModify: return 80;
    case Stage::kMake: return 110;
  }
  return 30;
}

struct Participant {
  std::string id;
  double skill = 0.5;
  double speed = 1.0;
};

class Driver {
 public:
  Driver(const Challenge& challenge, EventStore& store, SessionTrace& trace, Rng& rng,
         const Participant& who, std::int64_t start_ms)
      : challenge_(challenge), store_(store), trace_(trace), rng_(rng), who_(who), t_(start_ms) {
    trace_.started_ms = start_ms;
    variants_ = fix_variants(challenge);
    for (const auto& v : variants_) pinned_.emplace(v.program, v.passes);
    pinned_.emplace(challenge.program, false);
  }

  void play() {
    apply_batch(begin_session(challenge_));
    for (int guard = 0; guard < 200 && !state_.finished; ++guard) {
      if (!step()) break;  // abandoned
    }
    for (auto& st : trace_.stages) {
      if (st.exited_ms < st.entered_ms) st.exited_ms = trace_.last_ms;
    }
    if (challenge_.test_cases.empty()) {
      trace_.success = last_self_report_;
    } else if (trace_.final_run_program) {
      auto it = pinned_.find(*trace_.final_run_program);
      if (it == pinned_.end()) throw Error(ErrorCode::kInvariant, "unpinned program in simulation");
      trace_.success = it->second;
    }
  }

 private:
  bool step() {
    const Stage stage = state_.stage;
    switch (stage) {
      case Stage::kPredict:
        wait(stage);
        apply(transition::SubmitResponse{text("I think it will print the numbers")});
        return true;
      case Stage::kRun: {
        wait(stage);
        std::vector<std::string> inputs;
        if (state_.test_case_cursor < challenge_.test_cases.size()) {
          inputs = challenge_.test_cases[state_.test_case_cursor].inputs;
        }
        run(inputs);
        return true;
      }
      case Stage::kSpotTheDefect:
        if (rng_.coin(0.04)) return false;
        wait(stage);
        if (challenge_.syntax_error_flag && rng_.coin(0.5)) {
          apply(transition::SkipInspect{text("There is a syntax error")});
        } else {
          apply(transition::SubmitResponse{text("The last number is missing")});
        }
        return true;
      case Stage::kInspectTheCode: {
        wait(stage);
        const int runs = rng_.weighted(std::array{0.68, 0.17, 0.1, 0.05});
        for (int i = 0; i < runs; ++i) explore_run();
        if (rng_.coin(0.03)) return false;
        apply(transition::SubmitResponse{rng_.coin(0.25) ? "" : text("Maybe the loop stops early")});
        return true;
      }
      case Stage::kFindTheError:
        wait(stage);
        if (!challenge_.error_spec.single_line) {
          apply(transition::SubmitResponse{text("Lines 3 and 4 overwrite the value")});
          return true;
        }
        if (state_.last_selection_incorrect && rng_.coin(0.3)) {
          apply(transition::ReturnToInspect{});
          return true;
        }
        apply(transition::SelectLine{pick_line()});
        return true;
      case Stage::kFixTheError: {
        wait(stage);
        const FixVariant& v = pick_variant();
        apply(transition::SubmitFix{v.program, text("Changed the faulty line")});
        return true;
      }
      case Stage::kTest: {
        wait(stage);
        const int runs = rng_.weighted(std::array{0.25, 0.45, 0.3});
        for (int i = 0; i < runs; ++i) test_run(i);
        if (rng_.coin(0.05)) return false;
        const auto it = pinned_.find(state_.working_program);
        const bool passes = it != pinned_.end() && it->second;
        const bool success = passes ? rng_.coin(0.95) : rng_.coin(0.2);
        last_self_report_ = success;
        if (success) {
          const int next = rng_.weighted(std::array{0.5, 0.2, 0.3});
          apply(transition::ReportOutcome{
              true, next == 0 ? NextStep::kModify : next == 1 ? NextStep::kMake : NextStep::kFinish,
              std::nullopt});
          return true;
        }
        apply(transition::ReportOutcome{false, rng_.coin(0.6) ? NextStep::kInspect : NextStep::kFix,
                                        std::nullopt});
        return state_.fix_attempts < 3;
      }
      case Stage::kModify: {
        wait(stage);
        const int runs = rng_.weighted(std::array{0.4, 0.4, 0.2});
        for (int i = 0; i < runs; ++i) explore_run();
        if (rng_.coin(0.5)) apply(transition::SubmitResponse{text("Now it counts to B")});
        if (rng_.coin(0.3)) return false;
        apply(transition::ChooseExtension{Extension::kMake});
        return true;
      }
      case Stage::kMake: {
        wait(stage);
        if (rng_.coin(0.5)) explore_run();
        if (rng_.coin(0.2)) return false;
        apply(transition::ChooseExtension{Extension::kFinish});
        return true;
      }
    }
    return false;
  }

  std::string text(const char* s) { return s; }

  int pick_line() {
    const int correct = challenge_.error_spec.line_numbers.front();
    if (rng_.coin(0.45 + 0.4 * who_.skill)) return correct;
    const int lines = line_count(challenge_.program);
    int line = 1 + rng_.below(lines - 1);
    if (line >= correct) ++line;
    return line;
  }

  const FixVariant& pick_variant() {
    std::vector<const FixVariant*> good, bad;
    for (const auto& v : variants_) (v.passes ? good : bad).push_back(&v);
    if (good.empty()) throw Error(ErrorCode::kInvariant, "no passing variant for " + challenge_.id);
    const bool want_good = bad.empty() || rng_.coin(0.45 + 0.4 * who_.skill);
    const auto& pool = want_good ? good : bad;
    return *pool[static_cast<std::size_t>(rng_.below(static_cast<int>(pool.size())))];
  }

  void explore_run() {
    wait_seconds(8);
    std::vector<std::string> inputs;
    if (!challenge_.test_cases.empty()) {
      const auto& tc = challenge_.test_cases[static_cast<std::size_t>(
          rng_.below(static_cast<int>(challenge_.test_cases.size())))];
      inputs = tc.inputs;
    }
    run(inputs);
  }

  void test_run(int i) {
    wait_seconds(6);
    std::vector<std::string> inputs;
    if (!challenge_.test_cases.empty()) {
      inputs = challenge_.test_cases[static_cast<std::size_t>(i) % challenge_.test_cases.size()].inputs;
    }
    run(inputs);
  }

  void run(const std::vector<std::string>& inputs) {
    RunSnapshot snap;
    snap.program = state_.working_program;
    snap.stdin_lines = inputs;
    snap.stdout_text = "simulated output\n";
    apply(transition::RunCompleted{std::move(snap)});
  }

  void wait(Stage s) { wait_seconds(median_dwell(s)); }

  void wait_seconds(double median) {
    const double seconds = median * who_.speed * std::exp(0.9 * rng_.normal());
    t_ += std::max<std::int64_t>(200, std::llround(seconds * 1000.0));
  }

  void apply(const TransitionEvent& ev) { apply_batch(advance(state_, ev, challenge_)); }

  void apply_batch(Transition t) {
    for (const auto& body : t.events) {
      store_.append(SessionEvent{trace_.session_id, trace_.participant_id, challenge_.id, t_, body});
      if (const auto* e = std::get_if<event::StageEntered>(&body)) {
        trace_.stages.push_back({e->stage, t_, -1, 0, false});
      } else if (std::holds_alternative<event::StageExited>(body)) {
        trace_.stages.back().exited_ms = t_;
      } else if (const auto* r = std::get_if<event::ProgramRun>(&body)) {
        ++trace_.stages.back().runs;
        trace_.final_run_program = r->snapshot.program;
      } else if (const auto* resp = std::get_if<event::ResponseSubmitted>(&body)) {
        if (validate_articulation(resp->text)) trace_.stages.back().articulated_response = true;
      } else if (const auto* sel = std::get_if<event::LineSelected>(&body)) {
        trace_.selections.push_back(sel->correct);
      }
    }
    trace_.last_ms = t_;
    state_ = std::move(t.state);
  }

  const Challenge& challenge_;
  EventStore& store_;
  SessionTrace& trace_;
  Rng& rng_;
  const Participant& who_;
  std::int64_t t_;
  SessionState state_;
  std::vector<FixVariant> variants_;
  std::map<std::string, bool> pinned_;
  bool last_self_report_ = false;
};

int likert(double x) { return static_cast<int>(std::clamp(std::lround(x), 1L, 5L)); }

}  // namespace

std::vector<FixVariant> fix_variants(const Challenge& c) {
  if (c.id == "number-timeline") {
    return {{with_lines(c, {{6, "    for number in range(A, B+1):"}}), true},
            {with_lines(c, {{6, "    for number in range(A+1, B+1):"}}), false}};
  }
  if (c.id == "pass-or-fail") {
    return {{with_lines(c, {{2, "if score >= 50:"}}), true},
            {with_lines(c, {{2, "if score > 49:"}}), true},
            {with_lines(c, {{2, "if score < 50:"}}), false}};
  }
  if (c.id == "greeting") {
    return {{with_lines(c, {{4, "else:"}}), true}, {with_lines(c, {{4, "else;"}}), false}};
  }
  if (c.id == "running-total") {
    return {{with_lines(c, {{4, "    total = total + number"}}), true},
            {with_lines(c, {{4, "    totl = totl + number"}}), false}};
  }
  if (c.id == "countdown") {
    return {{with_lines(c, {{2, "while count > 0:"}}), true}};
  }
  if (c.id == "swap-values") {
    return {{with_lines(c, {{3, "first, second = second, first"}, {4, ""}}), true},
            {with_lines(c, {{3, "second = first"}, {4, "first = second"}}), false}};
  }
  return {};
}

CohortTrace simulate_cohort(const CohortOptions& options, const ChallengeCatalog& challenges) {
  if (challenges.empty()) throw Error(ErrorCode::kPrecondition, "simulation needs challenges");
  if (options.participants < 1) throw Error(ErrorCode::kPrecondition, "no participants");
  Rng rng(options.seed);
  EventStore store(options.data_dir);

  std::vector<const Challenge*> order;
  for (const auto& [id, c] : challenges) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Challenge* a, const Challenge* b) {
    return std::tie(a->difficulty, a->id) < std::tie(b->difficulty, b->id);
  });

  std::vector<Participant> people;
  std::vector<int> session_counts;
  int total = 0;
  for (int p = 0; p < options.participants; ++p) {
    char id[16];
    std::snprintf(id, sizeof id, "p%02d", p + 1);
    people.push_back({id, rng.unit(), std::exp(0.3 * rng.normal())});
    session_counts.push_back(6 + rng.below(3));
    total += session_counts.back();
  }
  for (std::size_t p = 0; total < options.min_sessions; p = (p + 1) % people.size()) {
    ++session_counts[p];
    ++total;
  }

  CohortTrace trace;
  for (std::size_t p = 0; p < people.size(); ++p) {
    const std::int64_t base = options.start_ms + static_cast<std::int64_t>(p) * 86'400'000;
    const std::size_t offset = static_cast<std::size_t>(rng.below(static_cast<int>(order.size())));
    for (int s = 0; s < session_counts[p]; ++s) {
      const Challenge& c = *order[(offset + static_cast<std::size_t>(s)) % order.size()];
      char sid[32];
      std::snprintf(sid, sizeof sid, "sim-%s-s%02d", people[p].id.c_str(), s + 1);
      SessionTrace st;
      st.session_id = sid;
      st.participant_id = people[p].id;
      st.challenge_id = c.id;
      Driver(c, store, st, rng, people[p], base + static_cast<std::int64_t>(s) * 3'600'000).play();
      trace.sessions.push_back(std::move(st));
    }
  }

  trace.survey_items = {"sifft_utility",      "forced_articulation", "restricted_running",
                        "restricted_editing", "forced_localisation", "usability_1",
                        "usability_2",        "usability_3"};
  trace.survey_csv = "participant_id";
  for (const auto& item : trace.survey_items) trace.survey_csv += "," + item;
  trace.survey_csv += "\n";
  for (const auto& who : people) {
    SurveyRow row{who.id, {}};
    const double attitude = 1.5 + 3.0 * who.skill;
    trace.survey_csv += who.id;
    for (std::size_t i = 0; i < trace.survey_items.size(); ++i) {
      std::optional<int> v;
      const double noise = 0.7 * rng.normal();
      const bool missing = i > 0 && rng.coin(0.03);
      if (!missing) v = likert(attitude + noise);
      row.items[trace.survey_items[i]] = v;
      trace.survey_csv += "," + (v ? std::to_string(*v) : std::string());
    }
    trace.survey_csv += "\n";
    trace.survey.push_back(std::move(row));
  }
  return trace;
}

}  // namespace primmdebug::sim
