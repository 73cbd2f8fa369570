#ifndef TEL_BASELINE_HPP
#define TEL_BASELINE_HPP

#include <optional>
#include <set>
#include <utility>

#include "tel/dla.hpp"
#include "tel/graph.hpp"

namespace tel::baseline {

enum class Metric { hop_count, delay_weighted };

struct BaselineConfig {
  Metric metric = Metric::hop_count;
  double control_plane_delay_ms = 1000.0;
};

/// Minimal-metric simple path; equal-cost candidates are broken by
/// lexicographic node-name order of the full path.
std::optional<PathCandidate> shortest_path(const NetworkGraph& graph, NodeIndex s,
                                           NodeIndex d, Metric metric);

/// Shortest path on the graph with failed links removed. The simulator
/// applies the control-plane delay before activating the result.
std::optional<PathCandidate> reroute_after_failure(
    const NetworkGraph& graph, const std::set<std::pair<NodeIndex, NodeIndex>>& failed,
    NodeIndex s, NodeIndex d, Metric metric);

}  // namespace tel::baseline

#endif  // TEL_BASELINE_HPP
