#ifndef TEL_DLA_HPP
#define TEL_DLA_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tel/graph.hpp"
#include "tel/rng.hpp"

namespace tel {

inline constexpr double kUnboundedDelayMs = std::numeric_limits<double>::infinity();

/// Weights of the per-link cost terms: alpha scales utilization, lambda
/// the steering cost, zeta the propagation delay. beta/theta are the
/// objective-level delay/cost weights; with alpha = 0 the link cost
/// reduces to the objective's inner sum (beta = zeta, theta = lambda).
struct CostCoefficients {
  double alpha = 1.0;
  double lambda = 1.0;
  double zeta = 1.0;
  double beta = 1.0;
  double theta = 1.0;
};

enum class TrafficClass { responsive, non_responsive };

struct FlowDemand {
  NodeIndex src = kInvalidNode;
  NodeIndex dst = kInvalidNode;
  double rate_bps = 0.0;
  double max_delay_ms = kUnboundedDelayMs;
  TrafficClass traffic_class = TrafficClass::non_responsive;
  double size_bytes = 0.0;  // 0 = unbounded flow, no completion time
};

struct PathCandidate {
  std::vector<NodeIndex> nodes;
  double value = 0.0;

  std::size_t hop_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  bool same_route(const PathCandidate& other) const { return nodes == other.nodes; }
  bool uses_link(NodeIndex a, NodeIndex b) const;
  /// True when the two paths share no directed link. Host access links
  /// can be excluded: for host-to-host demands they are unavoidable.
  bool link_disjoint(const PathCandidate& other, const NetworkGraph& graph,
                     bool ignore_host_links) const;
};

struct PathPlan {
  FlowDemand demand;
  PathCandidate primary;
  std::optional<PathCandidate> backup;
  /// Distinct explored candidates, ascending value, front() == primary.
  std::vector<PathCandidate> exploration_log;
  int flow_set_id = -1;
};

struct LearningAutomaton {
  std::vector<NodeIndex> actions;  // outgoing neighbors, name order
  std::vector<double> probabilities;
  std::vector<char> enabled;
};

struct DlaGraph {
  std::vector<LearningAutomaton> automata;
};

struct SolverConfig {
  int iterations = 500;
  std::uint64_t seed = 1;
  double reward_a = 0.2;
  double penalty_b = 0.2;  // reserved for penalty schemes, unused by the
                           // reward-only update
  CostCoefficients coefficients;
  CapacityPolicy capacity;
};

struct SolveResult {
  std::vector<std::optional<PathPlan>> plans;  // one slot per demand
  std::uint64_t exploration_steps = 0;

  bool all_feasible() const;
  std::vector<PathPlan> feasible_plans() const;
};

/// One automaton per node; one action per outgoing neighbor, each with
/// initial probability 1/|actions|, all enabled.
DlaGraph init_dla(const NetworkGraph& graph);

/// Rewards the action chosen at every non-terminal node of the path:
/// p_i += a(1-p_i), other enabled actions decay by (1-a); disabled
/// actions keep their probability and the enabled mass is renormalized
/// so the vector still sums to 1.
void reward_path(DlaGraph& dla, const NetworkGraph& graph, const PathCandidate& path,
                 double a);

/// Sum over path links of alpha*utilization + lambda*cost + zeta*delay.
/// Lower is better.
double evaluate_path(const NetworkGraph& graph, const std::vector<NodeIndex>& nodes,
                     const CostCoefficients& coeffs);

double path_delay_ms(const NetworkGraph& graph, const std::vector<NodeIndex>& nodes);

struct ExploreStats {
  std::uint64_t steps = 0;
};

/// One guided random walk from s to d. Walk-visited nodes are never
/// re-entered, traversed actions are disabled for the iteration, links
/// with residual below rate_bps are skipped, and nodes with no usable
/// action are backtracked out of the walk. Returns nullopt on dead end
/// or when the step cap (node count squared) is exceeded.
std::optional<PathCandidate> explore_path(DlaGraph& dla, const NetworkGraph& graph,
                                          NodeIndex s, NodeIndex d, double rate_bps,
                                          Rng& rng, ExploreStats* stats = nullptr);

/// Runs the full path-selection loop for each demand in input order:
/// iterate exploration, keep the incumbent under <= comparison, reward
/// improving candidates, filter by the delay bound, then pick a backup
/// from the exploration log and commit the demand's rate to the graph
/// before the next demand is solved. Infeasible demands leave an empty
/// slot; the rest are still solved.
SolveResult select_paths(NetworkGraph& graph, const std::vector<FlowDemand>& demands,
                         const SolverConfig& cfg);

/// Best-ranked logged candidate that is link-disjoint from the primary
/// (host access links excluded); failing that, the best-ranked one that
/// differs in at least one link.
std::optional<PathCandidate> choose_backup(const std::vector<PathCandidate>& log,
                                           const NetworkGraph& graph);

/// Subtracts rate from the residual of every directed link on the path.
void update_bandwidth(NetworkGraph& graph, const PathCandidate& path, double rate_bps);

nlohmann::json plan_to_json(const NetworkGraph& graph, const PathPlan& plan);
nlohmann::json path_to_json(const NetworkGraph& graph, const PathCandidate& path);

}  // namespace tel

#endif  // TEL_DLA_HPP
