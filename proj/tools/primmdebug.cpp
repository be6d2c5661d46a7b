#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "primmdebug/analytics/report.hpp"
#include "primmdebug/error.hpp"
#include "primmdebug/runner/runner.hpp"
#include "primmdebug/service/config.hpp"
#include "primmdebug/service/http.hpp"
#include "primmdebug/service/session_service.hpp"
#include "primmdebug/sim/cohort.hpp"

namespace fs = std::filesystem;
using namespace primmdebug;

namespace {

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

int serve(const std::optional<fs::path>& config_file) {
  ServiceConfig config = load_config(config_file);
  SessionService service(config);
  const std::size_t restored = service.recover();
  for (const auto& w : service.warnings()) std::cerr << "warning: " << w << "\n";
  std::cerr << "loaded " << service.challenges().size() << " challenges, recovered " << restored
            << " sessions\n";

  httplib::Server server;
  bind_routes(server, service);
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  std::cerr << "listening on " << config.host << ":" << config.port << "\n";
  if (!server.listen(config.host, config.port)) {
    std::cerr << "error: cannot listen on " << config.host << ":" << config.port << "\n";
    return 1;
  }
  return 0;
}

int check(const fs::path& dir, bool run_programs) {
  const ChallengeIndex index = list_challenges(dir);
  int failures = 0;
  for (const auto& w : index.warnings) {
    std::cout << "INVALID " << w.path.string() << ": " << w.message << "\n";
    ++failures;
  }
  const ChallengeCatalog catalog = load_catalog(dir);
  RunRequest defaults;
  defaults.interpreter_command = interpreter_from_env();
  for (const auto& [id, c] : catalog) {
    if (!run_programs || c.test_cases.empty()) {
      std::cout << "OK      " << id << "\n";
      continue;
    }
    const ExposureReport report = verify_exposure(c, defaults);
    if (report.ok) {
      std::cout << "OK      " << id << "\n";
      continue;
    }
    ++failures;
    std::cout << "MISMATCH " << id << ":";
    for (const auto& ce : report.cases) {
      if (ce.annotated_exposes != ce.observed_exposes) {
        std::cout << " case " << ce.index << " annotated exposes_error="
                  << (ce.annotated_exposes ? "true" : "false") << " but buggy program "
                  << (ce.observed_exposes ? "fails" : "passes") << ";";
      }
    }
    if (!report.any_exposes) std::cout << " no case fails on the buggy program";
    std::cout << "\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PRIMMDebug engine, service and analytics"};
  app.require_subcommand(1);

  std::optional<std::string> config_file;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("-c,--config", config_file, "JSON config file");

  std::string data_dir, challenge_dir, out_dir = "analysis", format = "json";
  std::optional<std::string> survey;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute metrics from session logs");
  analyze_cmd->add_option("--data", data_dir, "Session log directory")->required();
  analyze_cmd->add_option("--challenges", challenge_dir, "Challenge directory")->required();
  analyze_cmd->add_option("--survey", survey, "Survey CSV");
  analyze_cmd->add_option("--out", out_dir, "Output directory");
  analyze_cmd->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string check_dir = "challenges";
  bool no_run = false;
  auto* check_cmd = app.add_subcommand("check", "Validate challenge files and test annotations");
  check_cmd->add_option("dir", check_dir, "Challenge directory");
  check_cmd->add_flag("--no-run", no_run, "Schema checks only");

  std::string sim_out, sim_challenges = "challenges";
  std::uint64_t seed = sim::CohortOptions{}.seed;
  int participants = 45, min_sessions = 300;
  auto* sim_cmd = app.add_subcommand("simulate", "Write a seeded synthetic cohort");
  sim_cmd->add_option("--out", sim_out, "Output directory (logs go to <out>/logs)")->required();
  sim_cmd->add_option("--challenges", sim_challenges, "Challenge directory");
  sim_cmd->add_option("--seed", seed, "Random seed");
  sim_cmd->add_option("--participants", participants, "Participant count");
  sim_cmd->add_option("--min-sessions", min_sessions, "Minimum session count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) {
      return serve(config_file ? std::optional<fs::path>(*config_file) : std::nullopt);
    }
    if (*analyze_cmd) {
      analytics::AnalysisOptions opts;
      opts.data_dir = data_dir;
      opts.challenge_dir = challenge_dir;
      if (survey) opts.survey = fs::path(*survey);
      opts.out_dir = out_dir;
      opts.format = format == "csv" ? analytics::OutputFormat::kCsv : analytics::OutputFormat::kJson;
      opts.harness_defaults.interpreter_command = interpreter_from_env();
      const auto result = analytics::run_analysis(opts);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cerr << result.sessions.size() << " sessions analysed\n";
      for (const auto& p : result.written) std::cout << p.string() << "\n";
      return 0;
    }
    if (*check_cmd) return check(check_dir, !no_run);
    if (*sim_cmd) {
      fs::create_directories(sim_out);
      sim::CohortOptions opts;
      opts.seed = seed;
      opts.participants = participants;
      opts.min_sessions = min_sessions;
      opts.data_dir = fs::path(sim_out) / "logs";
      if (fs::exists(opts.data_dir) && !fs::is_empty(opts.data_dir)) {
        std::cerr << "error: " << opts.data_dir.string() << " is not empty\n";
        return 1;
      }
      const auto trace = sim::simulate_cohort(opts, load_catalog(sim_challenges));
      std::ofstream(fs::path(sim_out) / "survey.csv", std::ios::binary) << trace.survey_csv;
      std::cout << trace.sessions.size() << " sessions written to " << opts.data_dir.string()
                << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
