#ifndef TEL_SCENARIO_HPP
#define TEL_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tel/dataplane.hpp"
#include "tel/dla.hpp"
#include "tel/graph.hpp"

namespace tel {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DemandSpec {
  struct Explicit {
    std::string src, dst;
    double rate_bps = 0.0;
    double max_delay_ms = kUnboundedDelayMs;
    std::string traffic_class = "non-responsive";
    double size_bytes = 0.0;
  };
  std::vector<Explicit> explicit_demands;

  // Random generation over distinct host pairs.
  int random_count = 0;
  double random_rate_bps = 1'000'000.0;
  double random_max_delay_ms = kUnboundedDelayMs;
  std::string random_traffic_class = "non-responsive";
  double random_size_bytes = 0.0;
  int max_flows_per_host = 0;  // 0 = unlimited

  bool is_random() const { return random_count > 0; }
};

/// A failure names either a concrete link or a plan index, in which
/// case the first inter-switch link of that plan's primary fails.
struct FailureSpec {
  std::optional<std::pair<std::string, std::string>> link;
  std::optional<int> plan_index;
  double time_ms = 0.0;
  std::optional<double> detection_delay_ms;  // falls back to sim default
};

struct Scenario {
  std::string topology = "simple";  // "simple" or a GraphML path
  LinkDefaults defaults;
  bool attach_hosts = false;
  DemandSpec demands;
  SolverConfig solver;
  std::vector<FailureSpec> failures;
  SimConfig sim;
  int replicas = 1;
  std::string output_dir = "out";
  int flow_set_max_width_bits = 0;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario_file(const std::string& path);

/// Builds the scenario's graph: "simple" or GraphML with defaults, with
/// hosts attached when requested.
NetworkGraph build_scenario_graph(const Scenario& s);

/// Explicit demands resolved against the graph, or seeded random
/// distinct host pairs with an optional per-host usage cap.
std::vector<FlowDemand> build_demands(const Scenario& s, const NetworkGraph& graph,
                                      std::uint64_t seed);

/// Failure specs resolved to concrete events; plan-indexed entries pick
/// the first inter-switch link of the referenced plan's primary.
std::vector<FailureEvent> resolve_failures(const Scenario& s, const NetworkGraph& graph,
                                           const std::vector<PathPlan>& plans);

/// Writes via a temp file and rename so partial runs never corrupt
/// result files.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace tel

#endif  // TEL_SCENARIO_HPP
