#include "navform/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace navform {

namespace {

void require_keys(const YAML::Node& node, std::string_view where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ScenarioParseError(fmt::format("{}: expected a mapping", where));
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ScenarioParseError(fmt::format("{}: unknown key '{}'", where, key));
  }
}

template <typename T>
T scalar(const YAML::Node& node, std::string_view where) {
  if (!node || !node.IsScalar()) throw ScenarioParseError(fmt::format("{}: expected a scalar", where));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioParseError(fmt::format("{}: cannot read '{}'", where, node.Scalar()));
  }
}

template <typename T>
T scalar_or(const YAML::Node& parent, const char* key, T fallback, std::string_view where) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  return scalar<T>(n, fmt::format("{}.{}", where, key));
}

Vec2 vec2(const YAML::Node& node, std::string_view where) {
  if (!node || !node.IsSequence() || node.size() != 2) {
    throw ScenarioParseError(fmt::format("{}: expected a two-element list", where));
  }
  return {scalar<double>(node[0], where), scalar<double>(node[1], where)};
}

std::pair<AgentIndex, AgentIndex> pair_ids(const YAML::Node& node, std::string_view where) {
  if (!node || !node.IsSequence() || node.size() != 2) {
    throw ScenarioParseError(fmt::format("{}: expected [i, j]", where));
  }
  const auto i = scalar<long long>(node[0], where);
  const auto j = scalar<long long>(node[1], where);
  if (i < 1 || j < 1) throw ScenarioParseError(fmt::format("{}: agent ids start at 1", where));
  return {static_cast<AgentIndex>(i - 1), static_cast<AgentIndex>(j - 1)};
}

const YAML::Node required(const YAML::Node& parent, const char* key, std::string_view where) {
  const YAML::Node n = parent[key];
  if (!n) throw ScenarioParseError(fmt::format("{}: missing key '{}'", where, key));
  return n;
}

LinkFailureModel parse_failures(const YAML::Node& node) {
  LinkFailureModel m;
  if (!node || node.IsNull()) return m;
  if (node.IsSequence()) {
    m.mode = LinkFailureModel::Mode::kSchedule;
    for (std::size_t k = 0; k < node.size(); ++k) {
      const std::string where = fmt::format("failures[{}]", k);
      require_keys(node[k], where, {"pair", "from", "to"});
      const auto [i, j] = pair_ids(required(node[k], "pair", where), where + ".pair");
      m.outages.push_back({i, j, scalar<double>(required(node[k], "from", where), where + ".from"),
                           scalar<double>(required(node[k], "to", where), where + ".to")});
    }
    return m;
  }
  require_keys(node, "failures", {"mode", "p_fail", "tau", "T"});
  const auto mode = scalar<std::string>(required(node, "mode", "failures"), "failures.mode");
  if (mode != "random") throw ScenarioParseError(fmt::format("failures.mode: unknown mode '{}'", mode));
  m.mode = LinkFailureModel::Mode::kRandom;
  m.random.p_fail = scalar<double>(required(node, "p_fail", "failures"), "failures.p_fail");
  m.random.tau = scalar<double>(required(node, "tau", "failures"), "failures.tau");
  m.random.T = scalar<double>(required(node, "T", "failures"), "failures.T");
  return m;
}

Scenario from_yaml(const YAML::Node& root) {
  require_keys(root, "scenario",
               {"name", "agents", "formation_edges", "obstacles", "params", "failures", "integration", "workspace",
                "monitors"});
  Scenario s;
  s.name = scalar_or<std::string>(root, "name", "", "scenario");

  const YAML::Node agents = required(root, "agents", "scenario");
  if (!agents.IsSequence()) throw ScenarioParseError("agents: expected a list");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string where = fmt::format("agents[{}]", k);
    require_keys(agents[k], where, {"id", "q"});
    const auto id = scalar<long long>(required(agents[k], "id", where), where + ".id");
    if (id < 1) throw ScenarioParseError(where + ".id: agent ids start at 1");
    s.agents.push_back({static_cast<AgentIndex>(id - 1), vec2(required(agents[k], "q", where), where + ".q")});
  }

  const YAML::Node edges = required(root, "formation_edges", "scenario");
  if (!edges.IsSequence()) throw ScenarioParseError("formation_edges: expected a list");
  std::vector<FormationEdge> declared;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = fmt::format("formation_edges[{}]", k);
    require_keys(edges[k], where, {"pair", "c"});
    const auto [i, j] = pair_ids(required(edges[k], "pair", where), where + ".pair");
    if (i >= s.agents.size() || j >= s.agents.size() || i == j) {
      throw ScenarioParseError(fmt::format("{}: pair [{}, {}] does not name two agents", where, i + 1, j + 1));
    }
    declared.push_back({i, j, vec2(required(edges[k], "c", where), where + ".c")});
  }
  s.formation = FormationSpec(s.agents.size(), std::move(declared));

  if (const YAML::Node obstacles = root["obstacles"]; obstacles && !obstacles.IsNull()) {
    if (!obstacles.IsSequence()) throw ScenarioParseError("obstacles: expected a list");
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
      s.obstacles.points.push_back(vec2(obstacles[k], fmt::format("obstacles[{}]", k)));
    }
  }

  const YAML::Node params = required(root, "params", "scenario");
  require_keys(params, "params", {"R_s", "delta_1", "delta_2", "k", "Gamma", "enforce_min_offset", "collision_requires_sensing"});
  s.params.sensing_radius = scalar<double>(required(params, "R_s", "params"), "params.R_s");
  s.params.delta1 = scalar<double>(required(params, "delta_1", "params"), "params.delta_1");
  s.params.delta2 = scalar<double>(required(params, "delta_2", "params"), "params.delta_2");
  s.params.k = scalar<double>(required(params, "k", "params"), "params.k");
  s.params.gain = scalar<double>(required(params, "Gamma", "params"), "params.Gamma");
  s.params.enforce_min_offset = scalar_or<bool>(params, "enforce_min_offset", true, "params");
  s.params.collision_requires_sensing =
      scalar_or<bool>(params, "collision_requires_sensing", false, "params");

  s.failures = parse_failures(root["failures"]);

  const YAML::Node integ = required(root, "integration", "scenario");
  require_keys(integ, "integration", {"dt", "t_final", "seed", "stage_recompute"});
  s.integration.dt = scalar_or<double>(integ, "dt", 1e-3, "integration");
  s.integration.t_final = scalar<double>(required(integ, "t_final", "integration"), "integration.t_final");
  s.integration.seed = scalar_or<std::uint64_t>(integ, "seed", 0, "integration");
  s.integration.stage_recompute = scalar_or<bool>(integ, "stage_recompute", true, "integration");

  if (const YAML::Node ws = root["workspace"]; ws && !ws.IsNull()) {
    require_keys(ws, "workspace", {"min", "max"});
    s.workspace = Workspace{vec2(required(ws, "min", "workspace"), "workspace.min"),
                            vec2(required(ws, "max", "workspace"), "workspace.max")};
  }

  if (const YAML::Node mon = root["monitors"]; mon && !mon.IsNull()) {
    require_keys(mon, "monitors", {"eps_col", "c_eta", "eps_V", "bounds"});
    s.monitors.collision_clearance = scalar_or<double>(mon, "eps_col", 1e-3, "monitors");
    s.monitors.lyapunov_slack_coeff = scalar_or<double>(mon, "c_eta", 1.0, "monitors");
    s.monitors.residual_epsilon = scalar_or<double>(mon, "eps_V", 1e-2, "monitors");
    if (const YAML::Node b = mon["bounds"]; b && !b.IsNull()) {
      require_keys(b, "monitors.bounds", {"rho1_bar", "rho2_bar", "beta_under"});
      s.monitors.bounds = BoundInputs{
          scalar<double>(required(b, "rho1_bar", "monitors.bounds"), "monitors.bounds.rho1_bar"),
          scalar<double>(required(b, "rho2_bar", "monitors.bounds"), "monitors.bounds.rho2_bar"),
          scalar<double>(required(b, "beta_under", "monitors.bounds"), "monitors.bounds.beta_under")};
    }
  }
  return s;
}

void emit_vec(YAML::Emitter& out, const Vec2& v) {
  out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << YAML::EndSeq;
}

void emit_pair(YAML::Emitter& out, AgentIndex i, AgentIndex j) {
  out << YAML::Flow << YAML::BeginSeq << (i + 1) << (j + 1) << YAML::EndSeq;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ScenarioParseError(fmt::format("malformed YAML: {}", e.what()));
  }
  try {
    return from_yaml(root);
  } catch (const YAML::Exception& e) {
    throw ScenarioParseError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(e.what());
  }
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError(fmt::format("cannot open scenario file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  out << YAML::BeginMap;
  if (!s.name.empty()) out << YAML::Key << "name" << YAML::Value << s.name;

  out << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : s.agents) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << (a.id + 1) << YAML::Key << "q"
        << YAML::Value;
    emit_vec(out, a.q);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "formation_edges" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : s.formation.declared_edges()) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "pair" << YAML::Value;
    emit_pair(out, e.i, e.j);
    out << YAML::Key << "c" << YAML::Value;
    emit_vec(out, e.offset);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
  for (const auto& o : s.obstacles.points) emit_vec(out, o);
  out << YAML::EndSeq;

  const Params& p = s.params;
  out << YAML::Key << "params" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "R_s" << YAML::Value << p.sensing_radius;
  out << YAML::Key << "delta_1" << YAML::Value << p.delta1;
  out << YAML::Key << "delta_2" << YAML::Value << p.delta2;
  out << YAML::Key << "k" << YAML::Value << p.k;
  out << YAML::Key << "Gamma" << YAML::Value << p.gain;
  out << YAML::Key << "enforce_min_offset" << YAML::Value << p.enforce_min_offset;
  if (p.collision_requires_sensing) out << YAML::Key << "collision_requires_sensing" << YAML::Value << true;
  out << YAML::EndMap;

  out << YAML::Key << "failures" << YAML::Value;
  if (s.failures.mode == LinkFailureModel::Mode::kRandom) {
    const auto& r = s.failures.random;
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "mode" << YAML::Value << "random" << YAML::Key << "p_fail"
        << YAML::Value << r.p_fail << YAML::Key << "tau" << YAML::Value << r.tau << YAML::Key << "T" << YAML::Value
        << r.T << YAML::EndMap;
  } else {
    out << YAML::BeginSeq;
    for (const auto& o : s.failures.outages) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "pair" << YAML::Value;
      emit_pair(out, o.i, o.j);
      out << YAML::Key << "from" << YAML::Value << o.from << YAML::Key << "to" << YAML::Value << o.to
          << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  const Integration& in = s.integration;
  out << YAML::Key << "integration" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << in.dt;
  out << YAML::Key << "t_final" << YAML::Value << in.t_final;
  out << YAML::Key << "seed" << YAML::Value << in.seed;
  out << YAML::Key << "stage_recompute" << YAML::Value << in.stage_recompute;
  out << YAML::EndMap;

  if (s.workspace) {
    out << YAML::Key << "workspace" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "min"
        << YAML::Value;
    emit_vec(out, s.workspace->min);
    out << YAML::Key << "max" << YAML::Value;
    emit_vec(out, s.workspace->max);
    out << YAML::EndMap;
  }

  const MonitorSettings& m = s.monitors;
  out << YAML::Key << "monitors" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "eps_col" << YAML::Value << m.collision_clearance;
  out << YAML::Key << "c_eta" << YAML::Value << m.lyapunov_slack_coeff;
  out << YAML::Key << "eps_V" << YAML::Value << m.residual_epsilon;
  if (m.bounds) {
    out << YAML::Key << "bounds" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "rho1_bar"
        << YAML::Value << m.bounds->rho1_bar << YAML::Key << "rho2_bar" << YAML::Value << m.bounds->rho2_bar
        << YAML::Key << "beta_under" << YAML::Value << m.bounds->beta_under << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace navform
