#ifndef TEL_RULEGEN_HPP
#define TEL_RULEGEN_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tel/dla.hpp"
#include "tel/graph.hpp"

namespace tel {

/// Per-plan identifier matched by the second table. Width is
/// ceil(log2(plan count)) bits with a floor of one bit.
int flow_set_width_bits(std::size_t plan_count);

/// Synthetic IPv4-style address derived from the node index.
std::string node_address(const NetworkGraph& graph, NodeIndex n);

/// Synthetic 48-bit MAC derived from the node index; only the width
/// matters for memory accounting.
std::uint64_t node_mac(NodeIndex n);

/// 1-based position of the neighbor in the node's sorted adjacency.
int egress_port(const NetworkGraph& graph, NodeIndex sw, NodeIndex neighbor);

struct TableEntry {
  int table = 1;  // 1 or 2
  // table 1 match
  std::string match_src;
  std::string match_dst;
  // table 2 match
  int match_flow_set = -1;
  int match_status = 0;
  // table 1 action
  int set_flow_set = -1;
  // table 2 action
  int action_egress_port = 0;        // 9-bit
  std::uint64_t action_next_hop_mac = 0;  // 48-bit
  NodeIndex next_hop = kInvalidNode;

  bool operator<(const TableEntry& other) const;
  bool operator==(const TableEntry& other) const;
};

struct SwitchRuleSet {
  NodeIndex sw = kInvalidNode;
  std::vector<TableEntry> entries;            // canonical order
  std::map<int, int> path_status;             // flow_set id -> 0/1
};

/// Assigns sequential ids 0..k-1 and records the shared width. Throws
/// when the count exceeds an explicitly configured width.
void assign_flow_set_ids(std::vector<PathPlan>& plans, int max_width_bits = 0);

/// Rules for one plan: table-1 (src,dst) -> flow_set on every switch of
/// either path, table-2 (flow_set, 0) -> primary next hop, and
/// (flow_set, 1) -> backup next hop. Both families are emitted up front.
std::vector<SwitchRuleSet> generate_rules(const NetworkGraph& graph,
                                          const PathPlan& plan);

/// Merged per-switch rules for a whole plan set, canonically ordered.
std::map<NodeIndex, SwitchRuleSet> compile_rules(const NetworkGraph& graph,
                                                 const std::vector<PathPlan>& plans);

/// Sets the path_status bit to 1 for each failed plan id on every switch
/// that holds it.
std::map<NodeIndex, SwitchRuleSet> apply_failure_to_rules(
    std::map<NodeIndex, SwitchRuleSet> rulesets, const std::set<int>& failed_plan_ids);

struct SwitchMemory {
  NodeIndex sw;
  int base_bits;   // flow_set width + 1 status bit
  int extra_bits;  // 9-bit egress port + 48-bit MAC per handled failure
};

struct MemoryReport {
  int width_bits = 0;
  std::vector<SwitchMemory> switches;
  /// Switch count affected by each failure scenario, in input order.
  std::vector<int> affected_per_failure;

  std::string to_csv(const NetworkGraph& graph) const;
};

/// Switches that must steer a plan around a failed link: the divergence
/// points of primary vs backup in each direction of the bi-directed
/// path.
std::set<NodeIndex> failure_affected_switches(const PathPlan& plan);

MemoryReport memory_cost(const NetworkGraph& graph, const std::vector<PathPlan>& plans,
                         const std::vector<std::pair<NodeIndex, NodeIndex>>& failures);

nlohmann::json entry_to_json(const NetworkGraph& graph, NodeIndex sw,
                             const TableEntry& entry);
std::string register_image_hex(const SwitchRuleSet& rules, std::size_t plan_count);

}  // namespace tel

#endif  // TEL_RULEGEN_HPP
