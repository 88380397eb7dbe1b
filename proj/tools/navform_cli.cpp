#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "navform/navform_c.h"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kMonitor = 2, kNumeric = 3 };

struct ScenarioDeleter {
  void operator()(nf_scenario* s) const { nf_scenario_free(s); }
};
struct ResultDeleter {
  void operator()(nf_run_result* r) const { nf_run_result_free(r); }
};
using ScenarioPtr = std::unique_ptr<nf_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<nf_run_result, ResultDeleter>;

ScenarioPtr load(const std::string& path) {
  nf_scenario* raw = nullptr;
  if (nf_scenario_load_file(path.c_str(), &raw) != NF_OK) {
    std::fprintf(stderr, "error: %s\n", nf_last_error());
    return nullptr;
  }
  return ScenarioPtr(raw);
}

// Prints the violation list; true when there is none.
bool report_violations(nf_scenario* s) {
  const size_t n = nf_scenario_validate(s);
  for (size_t v = 0; v < n; ++v) std::fprintf(stderr, "violation: %s\n", nf_scenario_violation(s, v));
  return n == 0;
}

int exit_for(nf_status status) {
  switch (status) {
    case NF_OK:
      return kOk;
    case NF_ERR_MONITOR:
      return kMonitor;
    case NF_ERR_NUMERIC:
      return kNumeric;
    default:
      return kInvalid;
  }
}

struct RunArgs {
  std::string scenario;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::string on_violation = "continue";
  bool no_plots = false;
  std::size_t decimate = 10;
};

int cmd_run(const RunArgs& a) {
  ScenarioPtr s = load(a.scenario);
  if (!s) return kInvalid;
  if (a.seed) nf_scenario_set_seed(s.get(), *a.seed);
  if (!report_violations(s.get())) return kInvalid;

  nf_run_result* raw = nullptr;
  const nf_status status = nf_run(s.get(), a.on_violation == "abort" ? NF_ABORT : NF_FLAG_AND_CONTINUE, &raw);
  ResultPtr r(raw);
  if (status != NF_OK) std::fprintf(stderr, "error: %s\n", nf_last_error());
  if (!r) return exit_for(status);

  if (nf_result_write(r.get(), a.out.c_str(), a.decimate, a.no_plots ? 0 : 1) != NF_OK) {
    std::fprintf(stderr, "error: %s\n", nf_last_error());
    return kInvalid;
  }
  std::fputs(nf_result_summary(r.get()), stdout);
  if (status != NF_OK) return exit_for(status);
  return nf_result_passed(r.get()) ? kOk : kMonitor;
}

int cmd_validate(const std::string& path) {
  ScenarioPtr s = load(path);
  if (!s) return kInvalid;
  if (!report_violations(s.get())) return kInvalid;
  std::printf("%s: valid\n", nf_scenario_name(s.get()));
  return kOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::size_t trials) {
  char* text = nullptr;
  int ok = 0;
  if (nf_verify(suite.c_str(), seed, trials, &text, &ok) != NF_OK) {
    std::fprintf(stderr, "error: %s\n", nf_last_error());
    return kInvalid;
  }
  std::fputs(text, stdout);
  nf_string_free(text);
  return ok ? kOk : kInvalid;
}

struct SweepArgs {
  std::string scenario;
  std::string param;
  std::vector<double> values;
  std::optional<std::uint64_t> seed;
  double settle_tol = 0.5;
};

int cmd_sweep(const SweepArgs& a) {
  ScenarioPtr base = load(a.scenario);
  if (!base) return kInvalid;
  std::printf("%-10s %14s %14s %10s  %s\n", a.param.c_str(), "max_residual", "V_final", "t_settle", "monitors");
  int worst = kOk;
  for (double value : a.values) {
    nf_scenario* raw = nullptr;
    nf_scenario_clone(base.get(), &raw);
    ScenarioPtr s(raw);
    if (a.seed) nf_scenario_set_seed(s.get(), *a.seed);
    if (nf_scenario_set_param(s.get(), a.param.c_str(), value) != NF_OK) {
      std::fprintf(stderr, "error: %s\n", nf_last_error());
      return kInvalid;
    }
    if (!report_violations(s.get())) return kInvalid;
    nf_run_result* rr = nullptr;
    const nf_status status = nf_run(s.get(), NF_FLAG_AND_CONTINUE, &rr);
    ResultPtr r(rr);
    if (!r) {
      std::fprintf(stderr, "error: %s\n", nf_last_error());
      return exit_for(status);
    }
    const std::string failed = nf_result_failed_monitors(r.get());
    std::printf("%-10g %14.6e %14.6e %10.4g  %s\n", value, nf_result_final_residual(r.get()),
                nf_result_V(r.get(), nf_result_steps(r.get()) - 1), nf_result_settling_time(r.get(), a.settle_tol),
                failed.empty() ? "pass" : ("FAIL " + failed).c_str());
    if (!nf_result_passed(r.get())) worst = kMonitor;
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formation control with navigation functions under intermittent sensing"};
  app.require_subcommand(1);

  RunArgs run;
  std::uint64_t run_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write the log, summary and plots");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  auto* seed_opt = run_cmd->add_option("--seed", run_seed, "Override the failure seed");
  run_cmd->add_option("--on-violation", run.on_violation, "abort or continue")
      ->check(CLI::IsMember({"abort", "continue"}))
      ->capture_default_str();
  run_cmd->add_flag("--no-plots", run.no_plots, "Skip the SVG plots");
  run_cmd->add_option("--decimate", run.decimate, "Log every n-th step to CSV")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string suite = "all";
  std::uint64_t verify_seed = 42;
  std::size_t trials = 1000;
  auto* verify_cmd = app.add_subcommand("verify", "Randomized checks of gradients and analytic bounds");
  verify_cmd->add_option("suite", suite, "all, gradients, properties or bounds")
      ->check(CLI::IsMember({"all", "gradients", "properties", "bounds"}))
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed)->capture_default_str();
  verify_cmd->add_option("--trials", trials)->capture_default_str();

  SweepArgs sweep;
  std::uint64_t sweep_seed = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario once per parameter value");
  sweep_cmd->add_option("--scenario", sweep.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--param", sweep.param, "k, Gamma, p_fail or delta_2")
      ->required()
      ->check(CLI::IsMember({"k", "Gamma", "p_fail", "delta_2"}));
  sweep_cmd->add_option("--values", sweep.values, "Comma separated values")->delimiter(',');
  auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "Override the failure seed");
  sweep_cmd->add_option("--settle-tol", sweep.settle_tol, "Residual used for t_settle")->capture_default_str();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario against the model assumptions");
  validate_cmd->add_option("--scenario", validate_path, "Scenario file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  if (*run_cmd) {
    if (*seed_opt) run.seed = run_seed;
    return cmd_run(run);
  }
  if (*verify_cmd) return cmd_verify(suite, verify_seed, trials);
  if (*sweep_cmd) {
    if (*sweep_seed_opt) sweep.seed = sweep_seed;
    return cmd_sweep(sweep);
  }
  return cmd_validate(validate_path);
}
