#ifndef TEL_DATAPLANE_HPP
#define TEL_DATAPLANE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tel/baseline.hpp"
#include "tel/dla.hpp"
#include "tel/graph.hpp"
#include "tel/rulegen.hpp"

namespace tel {

struct FailureEvent {
  NodeIndex u = kInvalidNode;
  NodeIndex v = kInvalidNode;
  double time_ms = 0.0;
  double detection_delay_ms = 50.0;
};

struct SimConfig {
  double duration_ms = 10'000.0;
  double tick_ms = 10.0;
  double report_interval_ms = 100.0;
  double probe_interval_ms = 1'000.0;
  double control_plane_delay_ms = 1'000.0;  // baseline recovery only
  bool baseline_mode = false;
  baseline::Metric baseline_metric = baseline::Metric::hop_count;
};

struct EgressDecision {
  bool drop = true;
  NodeIndex next_hop = kInvalidNode;
  int port = 0;
};

/// Two-stage lookup: table 1 maps (src,dst) to a flow_set id, the
/// path_status register supplies the bit, table 2 maps (flow_set, bit)
/// to the egress. A miss in either table is a drop decision.
EgressDecision forward(const SwitchRuleSet& rules, const std::string& src_addr,
                       const std::string& dst_addr);

/// Hop-by-hop route from src to dst over installed rules; nullopt when a
/// lookup drops or a forwarding loop is detected. Hosts relay to their
/// single attached switch.
std::optional<std::vector<NodeIndex>> resolve_route(
    const NetworkGraph& graph, const std::map<NodeIndex, SwitchRuleSet>& rules,
    NodeIndex src, NodeIndex dst);

struct ProbeRecord {
  NodeIndex u, v;
  double bytes_since_last = 0.0;
  double previous_timestamp_ms = 0.0;
  double current_timestamp_ms = 0.0;
};

struct ProbeEstimate {
  ProbeRecord record;
  bool valid = false;
  double rate_bps = 0.0;
  double utilization = 0.0;
};

struct FlowMetrics {
  std::vector<double> interval_bps;  // one sample per report interval
  double delivered_bytes = 0.0;
  double offered_bytes = 0.0;
  double lost_bytes = 0.0;       // non-responsive excess over the fair share
  double fct_ms = -1.0;          // finite-size flows only
  bool disconnected = false;
};

struct UtilizationSample {
  double time_ms;
  NodeIndex u, v;
  double rate_bps;
  double utilization;
};

struct SimMetrics {
  std::vector<FlowMetrics> flows;
  double delivered_bytes_total = 0.0;
  std::vector<UtilizationSample> link_utilization;
  double report_interval_ms = 100.0;
};

/// Deterministic fluid flow-level simulation over compiled rules. Per
/// tick the active routes are resolved, rates assigned by max-min fair
/// progressive filling, and failures recovered either by local register
/// flips (detection delay only) or, in baseline mode, by shortest-path
/// recomputation after detection plus the control-plane delay.
class FlowSim {
 public:
  FlowSim(const NetworkGraph& graph, std::vector<PathPlan> plans,
          std::map<NodeIndex, SwitchRuleSet> rules, std::vector<FailureEvent> failures,
          SimConfig cfg);

  SimMetrics run();

  /// Register-flip failure handling applied once a failure is detected.
  void inject_failure(const FailureEvent& event);

  /// Byte-counter probe for one directed link. The first cycle only
  /// initializes the counters; zero elapsed time skips the estimate.
  ProbeEstimate probe_cycle(NodeIndex u, NodeIndex v, double now_ms);

  const std::map<NodeIndex, SwitchRuleSet>& rules() const { return rules_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  struct LinkCounter {
    double bytes = 0.0;
    double last_probe_ms = 0.0;
    bool probed_once = false;
  };
  struct FlowState {
    std::optional<std::vector<NodeIndex>> route;
    double route_valid_from_ms = 0.0;  // baseline recomputation gate
    double delivered_bytes = 0.0;
    bool done = false;
    bool disconnected = false;
  };

  bool link_down(NodeIndex a, NodeIndex b) const;
  bool route_crosses_down(const std::vector<NodeIndex>& route) const;
  void apply_events(double now_ms);
  void refresh_tel_routes();

  NetworkGraph graph_;
  std::vector<PathPlan> plans_;
  std::map<NodeIndex, SwitchRuleSet> rules_;
  std::vector<FailureEvent> failures_;
  SimConfig cfg_;

  std::set<std::pair<NodeIndex, NodeIndex>> down_links_;
  std::vector<FlowState> flows_;
  std::map<std::pair<NodeIndex, NodeIndex>, LinkCounter> counters_;
  std::vector<std::string> warnings_;
  std::size_t next_fail_down_ = 0;
  std::size_t next_fail_detect_ = 0;
};

SimMetrics run_flow_sim(const NetworkGraph& graph, const std::vector<PathPlan>& plans,
                        const std::map<NodeIndex, SwitchRuleSet>& rules,
                        const std::vector<FailureEvent>& failures, const SimConfig& cfg);

}  // namespace tel

#endif  // TEL_DATAPLANE_HPP
