#include "tel/rulegen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

namespace tel {

int flow_set_width_bits(std::size_t plan_count) {
  int bits = 1;
  while ((std::size_t{1} << bits) < plan_count) ++bits;
  return bits;
}

std::string node_address(const NetworkGraph& graph, NodeIndex n) {
  (void)graph;
  return "10.0." + std::to_string(n / 256) + "." + std::to_string(n % 256);
}

std::uint64_t node_mac(NodeIndex n) {
  return 0x020000000000ULL | static_cast<std::uint64_t>(static_cast<std::uint32_t>(n));
}

int egress_port(const NetworkGraph& graph, NodeIndex sw, NodeIndex neighbor) {
  const auto& adj = graph.neighbors(sw);
  auto it = std::find(adj.begin(), adj.end(), neighbor);
  if (it == adj.end())
    throw GraphError("egress_port: " + graph.node(neighbor).name +
                     " is not adjacent to " + graph.node(sw).name);
  return static_cast<int>(it - adj.begin()) + 1;
}

bool TableEntry::operator<(const TableEntry& other) const {
  return std::tie(table, match_src, match_dst, match_flow_set, match_status) <
         std::tie(other.table, other.match_src, other.match_dst, other.match_flow_set,
                  other.match_status);
}

bool TableEntry::operator==(const TableEntry& other) const {
  return std::tie(table, match_src, match_dst, match_flow_set, match_status,
                  set_flow_set, action_egress_port, action_next_hop_mac) ==
         std::tie(other.table, other.match_src, other.match_dst, other.match_flow_set,
                  other.match_status, other.set_flow_set, other.action_egress_port,
                  other.action_next_hop_mac);
}

void assign_flow_set_ids(std::vector<PathPlan>& plans, int max_width_bits) {
  if (plans.empty()) throw std::invalid_argument("assign_flow_set_ids: no plans");
  int width = flow_set_width_bits(plans.size());
  if (max_width_bits > 0 && width > max_width_bits)
    throw std::length_error("plan count " + std::to_string(plans.size()) +
                            " exceeds configured flow_set width of " +
                            std::to_string(max_width_bits) + " bits");
  for (std::size_t i = 0; i < plans.size(); ++i)
    plans[i].flow_set_id = static_cast<int>(i);
}

namespace {

void emit_path_rules(const NetworkGraph& graph, const PathPlan& plan,
                     const std::vector<NodeIndex>& path, int status,
                     std::map<NodeIndex, SwitchRuleSet>& per_switch) {
  const std::string src_addr = node_address(graph, plan.demand.src);
  const std::string dst_addr = node_address(graph, plan.demand.dst);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    NodeIndex sw = path[i];
    if (graph.node(sw).is_host) continue;
    NodeIndex next = path[i + 1];
    if (!graph.has_link(sw, next))
      throw GraphError("generate_rules: next hop " + graph.node(next).name +
                       " not adjacent to " + graph.node(sw).name);
    SwitchRuleSet& rules = per_switch[sw];
    rules.sw = sw;

    TableEntry t1;
    t1.table = 1;
    t1.match_src = src_addr;
    t1.match_dst = dst_addr;
    t1.set_flow_set = plan.flow_set_id;
    if (std::find(rules.entries.begin(), rules.entries.end(), t1) == rules.entries.end())
      rules.entries.push_back(t1);

    TableEntry t2;
    t2.table = 2;
    t2.match_flow_set = plan.flow_set_id;
    t2.match_status = status;
    t2.action_egress_port = egress_port(graph, sw, next);
    t2.action_next_hop_mac = node_mac(next);
    t2.next_hop = next;
    rules.entries.push_back(t2);

    rules.path_status.emplace(plan.flow_set_id, 0);
  }
}

}  // namespace

std::vector<SwitchRuleSet> generate_rules(const NetworkGraph& graph,
                                          const PathPlan& plan) {
  if (plan.flow_set_id < 0)
    throw std::invalid_argument("generate_rules: plan has no flow_set id");
  std::map<NodeIndex, SwitchRuleSet> per_switch;
  emit_path_rules(graph, plan, plan.primary.nodes, 0, per_switch);
  if (plan.backup) emit_path_rules(graph, plan, plan.backup->nodes, 1, per_switch);

  std::vector<SwitchRuleSet> out;
  for (auto& [sw, rules] : per_switch) {
    std::sort(rules.entries.begin(), rules.entries.end());
    out.push_back(std::move(rules));
  }
  return out;
}

std::map<NodeIndex, SwitchRuleSet> compile_rules(const NetworkGraph& graph,
                                                 const std::vector<PathPlan>& plans) {
  std::map<NodeIndex, SwitchRuleSet> merged;
  for (const PathPlan& plan : plans) {
    for (SwitchRuleSet& rules : generate_rules(graph, plan)) {
      SwitchRuleSet& dst = merged[rules.sw];
      dst.sw = rules.sw;
      dst.entries.insert(dst.entries.end(), rules.entries.begin(), rules.entries.end());
      dst.path_status.insert(rules.path_status.begin(), rules.path_status.end());
    }
  }
  for (auto& [sw, rules] : merged)
    std::sort(rules.entries.begin(), rules.entries.end());
  return merged;
}

std::map<NodeIndex, SwitchRuleSet> apply_failure_to_rules(
    std::map<NodeIndex, SwitchRuleSet> rulesets, const std::set<int>& failed_plan_ids) {
  for (int id : failed_plan_ids) {
    bool found = false;
    for (auto& [sw, rules] : rulesets) {
      auto it = rules.path_status.find(id);
      if (it != rules.path_status.end()) {
        it->second = 1;
        found = true;
      }
    }
    if (!found)
      throw std::out_of_range("apply_failure_to_rules: unknown flow_set id " +
                              std::to_string(id));
  }
  return rulesets;
}

std::set<NodeIndex> failure_affected_switches(const PathPlan& plan) {
  std::set<NodeIndex> out;
  if (!plan.backup) return out;
  const auto& p = plan.primary.nodes;
  const auto& b = plan.backup->nodes;
  // Forward divergence: last node of the common prefix.
  std::size_t i = 0;
  while (i < p.size() && i < b.size() && p[i] == b[i]) ++i;
  if (i > 0) out.insert(p[i - 1]);
  // Reverse divergence: first node of the common suffix.
  std::size_t j = 0;
  while (j < p.size() && j < b.size() && p[p.size() - 1 - j] == b[b.size() - 1 - j]) ++j;
  if (j > 0) out.insert(p[p.size() - j]);
  return out;
}

MemoryReport memory_cost(const NetworkGraph& graph, const std::vector<PathPlan>& plans,
                         const std::vector<std::pair<NodeIndex, NodeIndex>>& failures) {
  MemoryReport report;
  report.width_bits = flow_set_width_bits(plans.size());
  const int base = report.width_bits + 1;

  std::map<NodeIndex, int> extra;
  for (const auto& [u, v] : failures) {
    std::set<NodeIndex> affected;
    for (const PathPlan& plan : plans) {
      if (!plan.primary.uses_link(u, v)) continue;
      for (NodeIndex sw : failure_affected_switches(plan)) affected.insert(sw);
    }
    for (NodeIndex sw : affected) extra[sw] += 9 + 48;
    report.affected_per_failure.push_back(static_cast<int>(affected.size()));
  }

  for (NodeIndex n = 0; n < static_cast<NodeIndex>(graph.node_count()); ++n) {
    if (graph.node(n).is_host) continue;
    auto it = extra.find(n);
    report.switches.push_back({n, base, it == extra.end() ? 0 : it->second});
  }
  return report;
}

std::string MemoryReport::to_csv(const NetworkGraph& graph) const {
  std::ostringstream out;
  out << "switch,base_bits,extra_bits\n";
  for (const SwitchMemory& m : switches)
    out << graph.node(m.sw).name << "," << m.base_bits << "," << m.extra_bits << "\n";
  return out.str();
}

nlohmann::json entry_to_json(const NetworkGraph& graph, NodeIndex sw,
                             const TableEntry& entry) {
  nlohmann::json j;
  j["switch"] = graph.node(sw).name;
  j["table"] = entry.table;
  if (entry.table == 1) {
    j["match"] = {{"src", entry.match_src}, {"dst", entry.match_dst}};
    j["action"] = {{"set_flow_set", entry.set_flow_set}};
  } else {
    j["match"] = {{"flow_set", entry.match_flow_set}, {"status", entry.match_status}};
    std::ostringstream mac;
    mac << std::hex << entry.action_next_hop_mac;
    j["action"] = {{"egress_port", entry.action_egress_port},
                   {"next_hop_mac", mac.str()}};
  }
  return j;
}

std::string register_image_hex(const SwitchRuleSet& rules, std::size_t plan_count) {
  std::vector<std::uint8_t> bytes((plan_count + 7) / 8, 0);
  for (const auto& [id, bit] : rules.path_status)
    if (bit) bytes[static_cast<std::size_t>(id) / 8] |= std::uint8_t(1u << (id % 8));
  std::ostringstream out;
  out << std::hex;
  for (auto it = bytes.rbegin(); it != bytes.rend(); ++it)
    out << ((*it >> 4) & 0xF) << (*it & 0xF);
  return out.str();
}

}  // namespace tel
