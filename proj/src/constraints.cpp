#include "tel/constraints.hpp"

#include <set>

#include <nlohmann/json.hpp>

namespace tel {

void Placement::add_path(int flow_id, const PathCandidate& path, double rate_bps) {
  Flow f;
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
    f.links.emplace_back(path.nodes[i], path.nodes[i + 1]);
  f.rate_bps = rate_bps;
  if (!path.nodes.empty()) {
    f.src = path.nodes.front();
    f.dst = path.nodes.back();
  }
  flows[flow_id] = std::move(f);
}

Placement placement_from_plans(const std::vector<PathPlan>& plans) {
  Placement p;
  int next = 0;
  for (const PathPlan& plan : plans) {
    int id = plan.flow_set_id >= 0 ? plan.flow_set_id : next;
    p.add_path(id, plan.primary, plan.demand.rate_bps);
    ++next;
  }
  return p;
}

std::vector<CapacityViolation> check_link_capacity(const NetworkGraph& graph,
                                                   const Placement& placement,
                                                   const CapacityPolicy& policy) {
  std::map<std::pair<NodeIndex, NodeIndex>, double> load;
  for (const auto& [id, flow] : placement.flows)
    for (const auto& l : flow.links) load[l] += flow.rate_bps;

  std::vector<CapacityViolation> out;
  for (const auto& [l, bps] : load) {
    double bound = policy.mu * graph.link(l.first, l.second).bandwidth_bps;
    if (bps > bound + 1e-6)
      out.push_back({l.first, l.second, bps, bound});
  }
  return out;
}

std::vector<ConservationViolation> check_flow_conservation(const NetworkGraph& graph,
                                                           const Placement& placement) {
  (void)graph;
  std::vector<ConservationViolation> out;
  for (const auto& [id, flow] : placement.flows) {
    std::map<NodeIndex, int> net;
    for (const auto& [a, b] : flow.links) {
      net[a] += 1;
      net[b] -= 1;
    }
    // Nodes with zero net degree that are not endpoints are conserved.
    net.try_emplace(flow.src, 0);
    net.try_emplace(flow.dst, 0);
    for (const auto& [node, degree] : net) {
      int expected = node == flow.src ? 1 : node == flow.dst ? -1 : 0;
      if (degree != expected) out.push_back({id, node, degree, expected});
    }
  }
  return out;
}

DelayCheck check_delay(const NetworkGraph& graph, const PathCandidate& path,
                       double t_max_ms) {
  DelayCheck r;
  r.total_ms = path_delay_ms(graph, path.nodes);
  r.pass = r.total_ms <= t_max_ms;
  return r;
}

std::vector<LinkOnceViolation> check_link_once(const Placement& placement) {
  std::vector<LinkOnceViolation> out;
  for (const auto& [id, flow] : placement.flows) {
    std::map<NodeIndex, int> out_degree;
    std::set<std::pair<NodeIndex, NodeIndex>> seen;
    for (const auto& [a, b] : flow.links) {
      if (!seen.insert({a, b}).second) out.push_back({id, a, b});
      out_degree[a] += 1;
    }
    for (const auto& [node, deg] : out_degree)
      if (deg > 1) out.push_back({id, node, kInvalidNode});
  }
  return out;
}

nlohmann::json violations_to_json(const NetworkGraph& graph,
                                  const std::vector<CapacityViolation>& capacity,
                                  const std::vector<ConservationViolation>& conservation,
                                  const std::vector<LinkOnceViolation>& link_once) {
  nlohmann::json j;
  j["capacity"] = nlohmann::json::array();
  for (const auto& v : capacity)
    j["capacity"].push_back({{"src", graph.node(v.from).name},
                             {"dst", graph.node(v.to).name},
                             {"load_bps", v.load_bps},
                             {"bound_bps", v.bound_bps}});
  j["conservation"] = nlohmann::json::array();
  for (const auto& v : conservation)
    j["conservation"].push_back({{"flow", v.flow_id},
                                 {"node", graph.node(v.node).name},
                                 {"net_degree", v.net_degree},
                                 {"expected", v.expected_degree}});
  j["link_once"] = nlohmann::json::array();
  for (const auto& v : link_once) {
    nlohmann::json e = {{"flow", v.flow_id}, {"node", graph.node(v.node).name}};
    if (v.repeated_to != kInvalidNode)
      e["repeated_link_to"] = graph.node(v.repeated_to).name;
    j["link_once"].push_back(e);
  }
  j["total"] = capacity.size() + conservation.size() + link_once.size();
  return j;
}

}  // namespace tel
