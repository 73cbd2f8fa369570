#include "tel/baseline.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace tel::baseline {

namespace {

std::vector<std::string> path_names(const NetworkGraph& g,
                                    const std::vector<NodeIndex>& nodes) {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (NodeIndex n : nodes) out.push_back(g.node(n).name);
  return out;
}

std::optional<PathCandidate> dijkstra(
    const NetworkGraph& graph, const std::set<std::pair<NodeIndex, NodeIndex>>* failed,
    NodeIndex s, NodeIndex d, Metric metric) {
  const std::size_t n = graph.node_count();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::vector<NodeIndex>> best_path(n);

  auto link_down = [&](NodeIndex a, NodeIndex b) {
    if (!failed) return false;
    return failed->count({a, b}) > 0 || failed->count({b, a}) > 0;
  };

  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[static_cast<std::size_t>(s)] = 0.0;
  best_path[static_cast<std::size_t>(s)] = {s};
  queue.push({0.0, s});

  while (!queue.empty()) {
    auto [cur_dist, cur] = queue.top();
    queue.pop();
    if (cur_dist > dist[static_cast<std::size_t>(cur)]) continue;
    for (NodeIndex to : graph.neighbors(cur)) {
      if (link_down(cur, to)) continue;
      double w = metric == Metric::hop_count ? 1.0 : graph.link(cur, to).delay_ms;
      double cand = cur_dist + w;
      auto& cur_best = best_path[static_cast<std::size_t>(to)];
      std::vector<NodeIndex> cand_path = best_path[static_cast<std::size_t>(cur)];
      cand_path.push_back(to);
      bool better = cand < dist[static_cast<std::size_t>(to)] - 1e-12;
      bool tie = std::abs(cand - dist[static_cast<std::size_t>(to)]) <= 1e-12;
      if (tie && path_names(graph, cand_path) < path_names(graph, cur_best))
        better = true;
      if (better) {
        dist[static_cast<std::size_t>(to)] = cand;
        cur_best = std::move(cand_path);
        queue.push({cand, to});
      }
    }
  }

  if (!std::isfinite(dist[static_cast<std::size_t>(d)])) return std::nullopt;
  PathCandidate out;
  out.nodes = best_path[static_cast<std::size_t>(d)];
  out.value = dist[static_cast<std::size_t>(d)];
  return out;
}

}  // namespace

std::optional<PathCandidate> shortest_path(const NetworkGraph& graph, NodeIndex s,
                                           NodeIndex d, Metric metric) {
  return dijkstra(graph, nullptr, s, d, metric);
}

std::optional<PathCandidate> reroute_after_failure(
    const NetworkGraph& graph, const std::set<std::pair<NodeIndex, NodeIndex>>& failed,
    NodeIndex s, NodeIndex d, Metric metric) {
  return dijkstra(graph, &failed, s, d, metric);
}

}  // namespace tel::baseline
