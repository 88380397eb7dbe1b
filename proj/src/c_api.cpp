#include "navform/navform_c.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "navform/model.hpp"
#include "navform/report.hpp"
#include "navform/scenario_io.hpp"
#include "navform/sim.hpp"
#include "navform/verify.hpp"

struct nf_scenario {
  navform::Scenario scenario;
  std::vector<std::string> violations;
};

struct nf_run_result {
  navform::Scenario scenario;
  navform::RunResult result;
  std::string summary;
  std::string failed;
};

namespace {

thread_local std::string last_error;

nf_status fail(nf_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
nf_status guarded(F&& body) {
  try {
    return body();
  } catch (const navform::ScenarioParseError& e) {
    return fail(NF_ERR_PARSE, e.what());
  } catch (const navform::NumericalError& e) {
    return fail(NF_ERR_NUMERIC, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(NF_ERR_ARG, e.what());
  } catch (const std::exception& e) {
    return fail(NF_ERR_IO, e.what());
  }
}

std::string describe(const navform::Violation& v) {
  std::string where;
  if (v.i != 0 && v.j != 0) {
    where = fmt::format(" ({}, {})", v.i, v.j);
  } else if (v.i != 0) {
    where = fmt::format(" (agent {})", v.i);
  }
  return fmt::format("{}{}: {}", navform::to_string(v.kind), where, v.message);
}

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

extern "C" {

const char* nf_last_error(void) { return last_error.c_str(); }

nf_status nf_scenario_load_file(const char* path, nf_scenario** out) {
  if (path == nullptr || out == nullptr) return fail(NF_ERR_ARG, "null argument");
  *out = nullptr;
  if (!std::filesystem::exists(path)) return fail(NF_ERR_IO, fmt::format("cannot open '{}'", path));
  return guarded([&] {
    *out = new nf_scenario{navform::load_scenario_file(path), {}};
    return NF_OK;
  });
}

nf_status nf_scenario_load_string(const char* yaml, nf_scenario** out) {
  if (yaml == nullptr || out == nullptr) return fail(NF_ERR_ARG, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new nf_scenario{navform::parse_scenario(yaml), {}};
    return NF_OK;
  });
}

nf_status nf_scenario_clone(const nf_scenario* s, nf_scenario** out) {
  if (s == nullptr || out == nullptr) return fail(NF_ERR_ARG, "null argument");
  *out = new nf_scenario{s->scenario, s->violations};
  return NF_OK;
}

void nf_scenario_free(nf_scenario* s) { delete s; }

const char* nf_scenario_name(const nf_scenario* s) { return s ? s->scenario.name.c_str() : ""; }

size_t nf_scenario_agent_count(const nf_scenario* s) { return s ? s->scenario.agent_count() : 0; }

size_t nf_scenario_validate(nf_scenario* s) {
  if (s == nullptr) return 0;
  s->violations.clear();
  for (const auto& v : navform::validate_scenario(s->scenario)) s->violations.push_back(describe(v));
  return s->violations.size();
}

const char* nf_scenario_violation(const nf_scenario* s, size_t index) {
  if (s == nullptr || index >= s->violations.size()) return nullptr;
  return s->violations[index].c_str();
}

nf_status nf_scenario_set_param(nf_scenario* s, const char* name, double value) {
  if (s == nullptr || name == nullptr) return fail(NF_ERR_ARG, "null argument");
  navform::Scenario& sc = s->scenario;
  const std::string key = name;
  auto random_mode = [&]() -> navform::RandomFailureSpec& {
    if (sc.failures.mode != navform::LinkFailureModel::Mode::kRandom) {
      sc.failures.mode = navform::LinkFailureModel::Mode::kRandom;
      sc.failures.outages.clear();
    }
    return sc.failures.random;
  };
  if (key == "k") {
    sc.params.k = value;
  } else if (key == "Gamma") {
    sc.params.gain = value;
  } else if (key == "R_s") {
    sc.params.sensing_radius = value;
  } else if (key == "delta_1") {
    sc.params.delta1 = value;
  } else if (key == "delta_2") {
    sc.params.delta2 = value;
  } else if (key == "p_fail") {
    random_mode().p_fail = value;
  } else if (key == "tau") {
    random_mode().tau = value;
  } else if (key == "T") {
    random_mode().T = value;
  } else if (key == "dt") {
    sc.integration.dt = value;
  } else if (key == "t_final") {
    sc.integration.t_final = value;
  } else {
    return fail(NF_ERR_ARG, fmt::format("unknown parameter '{}'", key));
  }
  return NF_OK;
}

nf_status nf_scenario_set_seed(nf_scenario* s, uint64_t seed) {
  if (s == nullptr) return fail(NF_ERR_ARG, "null argument");
  s->scenario.integration.seed = seed;
  return NF_OK;
}

nf_status nf_scenario_set_position(nf_scenario* s, size_t agent, double x, double y) {
  if (s == nullptr) return fail(NF_ERR_ARG, "null argument");
  if (agent == 0 || agent > s->scenario.agent_count()) return fail(NF_ERR_ARG, fmt::format("no agent {}", agent));
  s->scenario.agents[agent - 1].q = navform::Vec2(x, y);
  return NF_OK;
}

nf_status nf_run(const nf_scenario* s, nf_violation_policy policy, nf_run_result** out) {
  if (s == nullptr || out == nullptr) return fail(NF_ERR_ARG, "null argument");
  *out = nullptr;
  const auto violations = navform::validate_scenario(s->scenario);
  if (!violations.empty()) {
    std::string text;
    for (const auto& v : violations) text += describe(v) + "\n";
    return fail(NF_ERR_INVALID, text);
  }
  return guarded([&] {
    navform::RunOptions options;
    options.on_violation =
        policy == NF_ABORT ? navform::ViolationPolicy::kAbort : navform::ViolationPolicy::kFlagAndContinue;
    auto* r = new nf_run_result{s->scenario, navform::Simulator(s->scenario).run(options), {}, {}};
    for (const auto& v : r->result.verdicts) {
      if (v.passed) continue;
      if (!r->failed.empty()) r->failed += ",";
      r->failed += v.name;
    }
    *out = r;
    if (r->result.aborted) return fail(NF_ERR_MONITOR, r->result.abort_reason);
    return NF_OK;
  });
}

void nf_run_result_free(nf_run_result* r) { delete r; }

int nf_result_passed(const nf_run_result* r) { return r && r->result.all_passed() ? 1 : 0; }
int nf_result_aborted(const nf_run_result* r) { return r && r->result.aborted ? 1 : 0; }
int nf_result_coverage(const nf_run_result* r) { return r && r->result.coverage ? 1 : 0; }
size_t nf_result_steps(const nf_run_result* r) { return r ? r->result.log.steps() : 0; }
size_t nf_result_switch_count(const nf_run_result* r) { return r ? r->result.switch_count : 0; }

double nf_result_final_residual(const nf_run_result* r) {
  if (r == nullptr || r->result.log.steps() == 0) return 0.0;
  const auto& log = r->result.log;
  return navform::max_formation_residual(log.positions_at(log.steps() - 1), r->scenario.formation);
}

double nf_result_V(const nf_run_result* r, size_t step) {
  if (r == nullptr || step >= r->result.log.V.size()) return 0.0;
  return r->result.log.V[step];
}

double nf_result_final_time(const nf_run_result* r) {
  if (r == nullptr || r->result.log.steps() == 0) return 0.0;
  return r->result.log.times.back();
}

double nf_result_settling_time(const nf_run_result* r, double tol) {
  if (r == nullptr) return -1.0;
  const auto& log = r->result.log;
  double settled = -1.0;
  for (std::size_t step = log.steps(); step-- > 0;) {
    if (navform::max_formation_residual(log.positions_at(step), r->scenario.formation) > tol) break;
    settled = log.times[step];
  }
  return settled;
}

nf_status nf_result_position(const nf_run_result* r, size_t step, size_t agent, double* x, double* y) {
  if (r == nullptr || x == nullptr || y == nullptr) return fail(NF_ERR_ARG, "null argument");
  const auto& log = r->result.log;
  if (step >= log.steps() || agent == 0 || agent > log.agent_count) return fail(NF_ERR_ARG, "index out of range");
  const auto& q = log.position(step, agent - 1);
  *x = q.x();
  *y = q.y();
  return NF_OK;
}

const char* nf_result_failed_monitors(const nf_run_result* r) { return r ? r->failed.c_str() : ""; }

const char* nf_result_summary(const nf_run_result* r) {
  if (r == nullptr) return "";
  auto* mut = const_cast<nf_run_result*>(r);
  if (mut->summary.empty()) mut->summary = navform::summary_report(r->scenario, r->result);
  return r->summary.c_str();
}

nf_status nf_result_write(const nf_run_result* r, const char* dir, size_t decimation, int plots) {
  if (r == nullptr || dir == nullptr) return fail(NF_ERR_ARG, "null argument");
  if (decimation == 0) return fail(NF_ERR_ARG, "decimation must be at least 1");
  return guarded([&] {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    std::ofstream csv(base / "trajectory.csv", std::ios::binary);
    navform::write_trajectory_csv(csv, r->result.log, decimation);
    if (!csv) return fail(NF_ERR_IO, "failed writing trajectory.csv");
    bool ok = write_file(base / "summary.txt", nf_result_summary(r));
    if (plots != 0) {
      ok = ok && write_file(base / "trajectory.svg", navform::trajectory_svg(r->scenario, r->result.log));
      ok = ok && write_file(base / "distances.svg", navform::distance_svg(r->scenario, r->result.log));
    }
    return ok ? NF_OK : fail(NF_ERR_IO, fmt::format("failed writing into '{}'", dir));
  });
}

nf_status nf_verify(const char* suite, uint64_t seed, size_t trials, char** report, int* ok) {
  if (suite == nullptr || report == nullptr || ok == nullptr) return fail(NF_ERR_ARG, "null argument");
  *report = nullptr;
  return guarded([&] {
    const auto result = navform::verify::run_suite(suite, seed, trials);
    const std::string text = result.text();
    *report = static_cast<char*>(std::malloc(text.size() + 1));
    std::memcpy(*report, text.c_str(), text.size() + 1);
    *ok = result.ok() ? 1 : 0;
    return NF_OK;
  });
}

void nf_string_free(char* s) { std::free(s); }

}  // extern "C"
