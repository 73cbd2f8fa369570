#include "tel/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "tel/graphml.hpp"
#include "tel/rng.hpp"

namespace tel {

namespace {

TrafficClass parse_class(const std::string& s) {
  if (s == "responsive") return TrafficClass::responsive;
  if (s == "non-responsive" || s == "non_responsive")
    return TrafficClass::non_responsive;
  throw ScenarioError("unknown traffic class: " + s);
}

double get_delay(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return j[key].get<double>();
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.topology = j.value("topology", std::string("simple"));
  if (j.contains("defaults")) {
    const auto& d = j["defaults"];
    s.defaults.bandwidth_bps = d.value("bandwidth_bps", s.defaults.bandwidth_bps);
    s.defaults.delay_ms = d.value("delay_ms", s.defaults.delay_ms);
    s.defaults.cost = d.value("cost", s.defaults.cost);
  }
  s.attach_hosts = j.value("attach_hosts", s.topology != "simple");

  if (j.contains("demands")) {
    const auto& d = j["demands"];
    if (d.contains("explicit")) {
      for (const auto& e : d["explicit"]) {
        DemandSpec::Explicit x;
        x.src = e.at("src").get<std::string>();
        x.dst = e.at("dst").get<std::string>();
        x.rate_bps = e.at("rate_bps").get<double>();
        x.max_delay_ms = get_delay(e, "max_delay_ms", kUnboundedDelayMs);
        x.traffic_class = e.value("class", std::string("non-responsive"));
        x.size_bytes = e.value("size_bytes", 0.0);
        s.demands.explicit_demands.push_back(std::move(x));
      }
    }
    if (d.contains("random")) {
      const auto& r = d["random"];
      s.demands.random_count = r.at("count").get<int>();
      if (s.demands.random_count <= 0)
        throw ScenarioError("demands.random.count must be positive");
      s.demands.random_rate_bps = r.value("rate_bps", s.demands.random_rate_bps);
      s.demands.random_max_delay_ms = get_delay(r, "max_delay_ms", kUnboundedDelayMs);
      s.demands.random_traffic_class = r.value("class", std::string("non-responsive"));
      s.demands.random_size_bytes = r.value("size_bytes", 0.0);
      s.demands.max_flows_per_host = r.value("max_flows_per_host", 0);
    }
  }
  if (s.demands.explicit_demands.empty() && !s.demands.is_random())
    throw ScenarioError("scenario defines no demands");

  if (j.contains("solver")) {
    const auto& v = j["solver"];
    s.solver.iterations = v.value("iterations", s.solver.iterations);
    s.solver.seed = v.value("seed", s.solver.seed);
    s.solver.reward_a = v.value("reward_a", s.solver.reward_a);
    s.solver.penalty_b = v.value("penalty_b", s.solver.penalty_b);
    s.solver.capacity.mu = v.value("mu", s.solver.capacity.mu);
    if (v.contains("coefficients")) {
      const auto& c = v["coefficients"];
      s.solver.coefficients.alpha = c.value("alpha", 1.0);
      s.solver.coefficients.lambda = c.value("lambda", 1.0);
      s.solver.coefficients.zeta = c.value("zeta", 1.0);
      s.solver.coefficients.beta = c.value("beta", 1.0);
      s.solver.coefficients.theta = c.value("theta", 1.0);
    }
  }
  if (s.solver.iterations < 1) throw ScenarioError("solver.iterations must be >= 1");
  if (s.solver.capacity.mu <= 0.0 || s.solver.capacity.mu > 1.0)
    throw ScenarioError("solver.mu must be in (0, 1]");

  if (j.contains("failures")) {
    for (const auto& f : j["failures"]) {
      FailureSpec spec;
      if (f.contains("link"))
        spec.link = std::make_pair(f["link"].at(0).get<std::string>(),
                                   f["link"].at(1).get<std::string>());
      if (f.contains("plan")) spec.plan_index = f["plan"].get<int>();
      if (!spec.link && !spec.plan_index)
        throw ScenarioError("failure entry needs either \"link\" or \"plan\"");
      spec.time_ms = f.value("time_ms", 0.0);
      if (f.contains("detection_delay_ms"))
        spec.detection_delay_ms = f["detection_delay_ms"].get<double>();
      s.failures.push_back(std::move(spec));
    }
  }

  if (j.contains("sim")) {
    const auto& v = j["sim"];
    s.sim.duration_ms = v.value("duration_ms", s.sim.duration_ms);
    s.sim.tick_ms = v.value("tick_ms", s.sim.tick_ms);
    s.sim.report_interval_ms = v.value("report_interval_ms", s.sim.report_interval_ms);
    s.sim.probe_interval_ms = v.value("probe_interval_ms", s.sim.probe_interval_ms);
    s.sim.control_plane_delay_ms =
        v.value("control_plane_delay_ms", s.sim.control_plane_delay_ms);
    double detect = v.value("detection_delay_ms", 50.0);
    for (FailureSpec& f : s.failures)
      if (!f.detection_delay_ms) f.detection_delay_ms = detect;
  } else {
    for (FailureSpec& f : s.failures)
      if (!f.detection_delay_ms) f.detection_delay_ms = 50.0;
  }

  s.replicas = j.value("replicas", 1);
  if (s.replicas < 1) throw ScenarioError("replicas must be >= 1");
  s.output_dir = j.value("output_dir", std::string("out"));
  s.flow_set_max_width_bits = j.value("flow_set_max_width_bits", 0);
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["topology"] = s.topology;
  j["defaults"] = {{"bandwidth_bps", s.defaults.bandwidth_bps},
                   {"delay_ms", s.defaults.delay_ms},
                   {"cost", s.defaults.cost}};
  j["attach_hosts"] = s.attach_hosts;

  nlohmann::json demands;
  if (!s.demands.explicit_demands.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : s.demands.explicit_demands) {
      nlohmann::json d = {{"src", e.src},
                          {"dst", e.dst},
                          {"rate_bps", e.rate_bps},
                          {"class", e.traffic_class},
                          {"size_bytes", e.size_bytes}};
      if (std::isfinite(e.max_delay_ms)) d["max_delay_ms"] = e.max_delay_ms;
      arr.push_back(std::move(d));
    }
    demands["explicit"] = std::move(arr);
  }
  if (s.demands.is_random()) {
    nlohmann::json r = {{"count", s.demands.random_count},
                        {"rate_bps", s.demands.random_rate_bps},
                        {"class", s.demands.random_traffic_class},
                        {"size_bytes", s.demands.random_size_bytes},
                        {"max_flows_per_host", s.demands.max_flows_per_host}};
    if (std::isfinite(s.demands.random_max_delay_ms))
      r["max_delay_ms"] = s.demands.random_max_delay_ms;
    demands["random"] = std::move(r);
  }
  j["demands"] = std::move(demands);

  j["solver"] = {{"iterations", s.solver.iterations},
                 {"seed", s.solver.seed},
                 {"reward_a", s.solver.reward_a},
                 {"penalty_b", s.solver.penalty_b},
                 {"mu", s.solver.capacity.mu},
                 {"coefficients",
                  {{"alpha", s.solver.coefficients.alpha},
                   {"lambda", s.solver.coefficients.lambda},
                   {"zeta", s.solver.coefficients.zeta},
                   {"beta", s.solver.coefficients.beta},
                   {"theta", s.solver.coefficients.theta}}}};

  j["failures"] = nlohmann::json::array();
  for (const FailureSpec& f : s.failures) {
    nlohmann::json e;
    if (f.link) e["link"] = {f.link->first, f.link->second};
    if (f.plan_index) e["plan"] = *f.plan_index;
    e["time_ms"] = f.time_ms;
    if (f.detection_delay_ms) e["detection_delay_ms"] = *f.detection_delay_ms;
    j["failures"].push_back(std::move(e));
  }

  j["sim"] = {{"duration_ms", s.sim.duration_ms},
              {"tick_ms", s.sim.tick_ms},
              {"report_interval_ms", s.sim.report_interval_ms},
              {"probe_interval_ms", s.sim.probe_interval_ms},
              {"control_plane_delay_ms", s.sim.control_plane_delay_ms},
              {"detection_delay_ms", s.failures.empty()
                                         ? 50.0
                                         : s.failures.front().detection_delay_ms.value_or(50.0)}};
  j["replicas"] = s.replicas;
  j["output_dir"] = s.output_dir;
  if (s.flow_set_max_width_bits > 0)
    j["flow_set_max_width_bits"] = s.flow_set_max_width_bits;
  return j;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("scenario parse failure in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

NetworkGraph build_scenario_graph(const Scenario& s) {
  NetworkGraph g;
  if (s.topology == "simple") {
    g = build_simple_topology();
  } else {
    g = load_graphml_file(s.topology, s.defaults);
    if (s.attach_hosts) attach_hosts(g, s.defaults);
  }
  return g;
}

std::vector<FlowDemand> build_demands(const Scenario& s, const NetworkGraph& graph,
                                      std::uint64_t seed) {
  std::vector<FlowDemand> out;
  for (const auto& e : s.demands.explicit_demands) {
    FlowDemand d;
    d.src = graph.index_of(e.src);
    d.dst = graph.index_of(e.dst);
    d.rate_bps = e.rate_bps;
    d.max_delay_ms = e.max_delay_ms;
    d.traffic_class = parse_class(e.traffic_class);
    d.size_bytes = e.size_bytes;
    out.push_back(d);
  }
  if (!s.demands.is_random()) return out;

  std::vector<NodeIndex> hosts;
  for (NodeIndex i = 0; i < static_cast<NodeIndex>(graph.node_count()); ++i)
    if (graph.node(i).is_host) hosts.push_back(i);
  if (hosts.size() < 2)
    throw ScenarioError("random demands need at least two hosts in the topology");

  std::size_t distinct_pairs = hosts.size() * (hosts.size() - 1);
  if (static_cast<std::size_t>(s.demands.random_count) > distinct_pairs)
    throw ScenarioError("demand count exceeds the number of distinct host pairs");

  Rng rng(seed);
  std::set<std::pair<NodeIndex, NodeIndex>> used;
  std::map<NodeIndex, int> per_host;
  const int cap = s.demands.max_flows_per_host;
  std::size_t guard = 0;
  while (out.size() < s.demands.explicit_demands.size() +
                          static_cast<std::size_t>(s.demands.random_count)) {
    if (++guard > 100'000 * static_cast<std::size_t>(s.demands.random_count))
      throw ScenarioError("random demand generation failed to find enough host pairs");
    NodeIndex a = hosts[rng.next_below(hosts.size())];
    NodeIndex b = hosts[rng.next_below(hosts.size())];
    if (a == b || used.count({a, b})) continue;
    if (cap > 0 && (per_host[a] >= cap || per_host[b] >= cap)) continue;
    used.insert({a, b});
    ++per_host[a];
    ++per_host[b];
    FlowDemand d;
    d.src = a;
    d.dst = b;
    d.rate_bps = s.demands.random_rate_bps;
    d.max_delay_ms = s.demands.random_max_delay_ms;
    d.traffic_class = parse_class(s.demands.random_traffic_class);
    d.size_bytes = s.demands.random_size_bytes;
    out.push_back(d);
  }
  return out;
}

std::vector<FailureEvent> resolve_failures(const Scenario& s, const NetworkGraph& graph,
                                           const std::vector<PathPlan>& plans) {
  std::vector<FailureEvent> out;
  for (const FailureSpec& spec : s.failures) {
    FailureEvent ev;
    ev.time_ms = spec.time_ms;
    ev.detection_delay_ms = spec.detection_delay_ms.value_or(50.0);
    if (spec.link) {
      ev.u = graph.index_of(spec.link->first);
      ev.v = graph.index_of(spec.link->second);
    } else {
      int idx = *spec.plan_index;
      if (idx < 0 || static_cast<std::size_t>(idx) >= plans.size())
        throw ScenarioError("failure plan index out of range: " + std::to_string(idx));
      const auto& nodes = plans[static_cast<std::size_t>(idx)].primary.nodes;
      bool found = false;
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (graph.node(nodes[i]).is_host || graph.node(nodes[i + 1]).is_host) continue;
        ev.u = nodes[i];
        ev.v = nodes[i + 1];
        found = true;
        break;
      }
      if (!found)
        throw ScenarioError("plan " + std::to_string(idx) +
                            " has no inter-switch link to fail");
    }
    out.push_back(ev);
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failure on " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace tel
