#ifndef TEL_GRAPH_HPP
#define TEL_GRAPH_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace tel {

using NodeIndex = std::int32_t;
inline constexpr NodeIndex kInvalidNode = -1;

/// Directed link state. Capacity is consumed per direction.
struct LinkAttr {
  double bandwidth_bps = 0.0;
  double residual_bps = 0.0;
  double delay_ms = 0.0;
  double cost = 0.0;
};

/// Attribute values applied to edges that do not carry their own.
struct LinkDefaults {
  double bandwidth_bps = 4'500'000.0;
  double delay_ms = 1.0;
  double cost = 1.0;
};

/// Admissible fraction of each link's capacity for engineered traffic.
struct CapacityPolicy {
  double mu = 1.0;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bi-directed network graph. Every undirected edge is stored as two
/// directed links with independent residuals. Neighbor lists are kept
/// sorted by node name so traversal order is deterministic.
class NetworkGraph {
 public:
  struct Node {
    std::string name;
    bool is_host = false;
  };

  NodeIndex add_node(std::string name, bool is_host = false);
  /// Adds both directions; rejects self-loops and duplicate links.
  void add_link(NodeIndex a, NodeIndex b, const LinkDefaults& attrs);
  void add_link(NodeIndex a, NodeIndex b, const LinkAttr& attrs);

  bool has_node(std::string_view name) const;
  NodeIndex index_of(std::string_view name) const;
  const Node& node(NodeIndex i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t switch_count() const;
  std::size_t host_count() const;
  bool hosts_attached() const { return host_count() > 0; }

  bool has_link(NodeIndex a, NodeIndex b) const;
  LinkAttr& link(NodeIndex a, NodeIndex b);
  const LinkAttr& link(NodeIndex a, NodeIndex b) const;
  const std::vector<NodeIndex>& neighbors(NodeIndex i) const;

  std::size_t directed_link_count() const { return links_.size(); }
  std::size_t undirected_link_count() const { return links_.size() / 2; }

  /// (bandwidth - residual) / bandwidth, in [0, 1].
  double utilization(NodeIndex a, NodeIndex b) const;

  /// Visits each directed link once, in (name_a, name_b) order.
  template <typename F>
  void for_each_link(F&& f) const {
    for (NodeIndex a = 0; a < static_cast<NodeIndex>(nodes_.size()); ++a) {
      for (NodeIndex b : neighbors(a)) f(a, b, link(a, b));
    }
  }

  nlohmann::json summary_json() const;

 private:
  static std::uint64_t key(NodeIndex a, NodeIndex b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  std::vector<Node> nodes_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::vector<NodeIndex>> adj_;
  std::unordered_map<std::uint64_t, LinkAttr> links_;
};

/// The five-switch evaluation topology: S1..S5, hosts H1 at S1 and H2 at
/// S5, three two-hop switch paths S1-S2-S5 / S1-S3-S5 / S1-S4-S5, every
/// link 12 Mbps.
NetworkGraph build_simple_topology();

/// Attaches one host per switch over a link with link_spec attributes.
/// Rejects graphs that already contain hosts.
void attach_hosts(NetworkGraph& graph, const LinkDefaults& link_spec);

}  // namespace tel

#endif  // TEL_GRAPH_HPP
