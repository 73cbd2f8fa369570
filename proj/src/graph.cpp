#include "tel/graph.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace tel {

NodeIndex NetworkGraph::add_node(std::string name, bool is_host) {
  if (name.empty()) throw GraphError("node name must not be empty");
  if (index_.count(name)) throw GraphError("duplicate node id: " + name);
  NodeIndex i = static_cast<NodeIndex>(nodes_.size());
  index_.emplace(name, i);
  nodes_.push_back(Node{std::move(name), is_host});
  adj_.emplace_back();
  return i;
}

bool NetworkGraph::has_node(std::string_view name) const {
  return index_.count(std::string(name)) > 0;
}

NodeIndex NetworkGraph::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw GraphError("unknown node: " + std::string(name));
  return it->second;
}

std::size_t NetworkGraph::switch_count() const {
  std::size_t n = 0;
  for (const auto& nd : nodes_)
    if (!nd.is_host) ++n;
  return n;
}

std::size_t NetworkGraph::host_count() const {
  return nodes_.size() - switch_count();
}

void NetworkGraph::add_link(NodeIndex a, NodeIndex b, const LinkDefaults& attrs) {
  LinkAttr la;
  la.bandwidth_bps = attrs.bandwidth_bps;
  la.residual_bps = attrs.bandwidth_bps;
  la.delay_ms = attrs.delay_ms;
  la.cost = attrs.cost;
  add_link(a, b, la);
}

void NetworkGraph::add_link(NodeIndex a, NodeIndex b, const LinkAttr& attrs) {
  if (a == b) throw GraphError("self-loop rejected: " + node(a).name);
  if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= nodes_.size() ||
      static_cast<std::size_t>(b) >= nodes_.size())
    throw GraphError("link endpoint out of range");
  if (links_.count(key(a, b))) throw GraphError("duplicate link: " + node(a).name + " - " + node(b).name);
  links_.emplace(key(a, b), attrs);
  links_.emplace(key(b, a), attrs);
  auto insert_sorted = [this](NodeIndex from, NodeIndex to) {
    auto& v = adj_[static_cast<std::size_t>(from)];
    auto pos = std::lower_bound(v.begin(), v.end(), to, [this](NodeIndex x, NodeIndex y) {
      return nodes_[static_cast<std::size_t>(x)].name < nodes_[static_cast<std::size_t>(y)].name;
    });
    v.insert(pos, to);
  };
  insert_sorted(a, b);
  insert_sorted(b, a);
}

bool NetworkGraph::has_link(NodeIndex a, NodeIndex b) const {
  return links_.count(key(a, b)) > 0;
}

LinkAttr& NetworkGraph::link(NodeIndex a, NodeIndex b) {
  auto it = links_.find(key(a, b));
  if (it == links_.end())
    throw GraphError("unknown link: " + node(a).name + " -> " + node(b).name);
  return it->second;
}

const LinkAttr& NetworkGraph::link(NodeIndex a, NodeIndex b) const {
  return const_cast<NetworkGraph*>(this)->link(a, b);
}

const std::vector<NodeIndex>& NetworkGraph::neighbors(NodeIndex i) const {
  return adj_.at(static_cast<std::size_t>(i));
}

double NetworkGraph::utilization(NodeIndex a, NodeIndex b) const {
  const LinkAttr& l = link(a, b);
  if (l.bandwidth_bps <= 0.0) return 0.0;
  return (l.bandwidth_bps - l.residual_bps) / l.bandwidth_bps;
}

nlohmann::json NetworkGraph::summary_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_)
    nodes.push_back({{"id", n.name}, {"host", n.is_host}});
  nlohmann::json links = nlohmann::json::array();
  for_each_link([&](NodeIndex a, NodeIndex b, const LinkAttr& l) {
    links.push_back({{"src", node(a).name},
                     {"dst", node(b).name},
                     {"bw_bps", l.bandwidth_bps},
                     {"delay_ms", l.delay_ms},
                     {"cost", l.cost}});
  });
  return {{"nodes", nodes}, {"links", links}};
}

NetworkGraph build_simple_topology() {
  NetworkGraph g;
  LinkDefaults link;
  link.bandwidth_bps = 12'000'000.0;
  link.delay_ms = 1.0;
  link.cost = 1.0;
  NodeIndex s1 = g.add_node("S1");
  NodeIndex s2 = g.add_node("S2");
  NodeIndex s3 = g.add_node("S3");
  NodeIndex s4 = g.add_node("S4");
  NodeIndex s5 = g.add_node("S5");
  NodeIndex h1 = g.add_node("H1", true);
  NodeIndex h2 = g.add_node("H2", true);
  g.add_link(s1, s2, link);
  g.add_link(s1, s3, link);
  g.add_link(s1, s4, link);
  g.add_link(s2, s5, link);
  g.add_link(s3, s5, link);
  g.add_link(s4, s5, link);
  g.add_link(h1, s1, link);
  g.add_link(h2, s5, link);
  return g;
}

void attach_hosts(NetworkGraph& graph, const LinkDefaults& link_spec) {
  if (graph.hosts_attached())
    throw GraphError("graph already has hosts attached");
  std::size_t n = graph.node_count();
  for (NodeIndex i = 0; i < static_cast<NodeIndex>(n); ++i) {
    NodeIndex h = graph.add_node("host_" + graph.node(i).name, true);
    graph.add_link(i, h, link_spec);
  }
}

}  // namespace tel
