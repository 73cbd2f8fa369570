#ifndef TEL_CONSTRAINTS_HPP
#define TEL_CONSTRAINTS_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tel/dla.hpp"
#include "tel/graph.hpp"

namespace tel {

/// A set of flow assignments to validate. Links are stored explicitly
/// so deliberately broken assignments (gaps, branches, repeats) can be
/// injected in tests.
struct Placement {
  struct Flow {
    std::vector<std::pair<NodeIndex, NodeIndex>> links;
    double rate_bps = 0.0;
    NodeIndex src = kInvalidNode;
    NodeIndex dst = kInvalidNode;
  };
  std::map<int, Flow> flows;

  void add_path(int flow_id, const PathCandidate& path, double rate_bps);
};

Placement placement_from_plans(const std::vector<PathPlan>& plans);

struct CapacityViolation {
  NodeIndex from, to;
  double load_bps;
  double bound_bps;
};

struct ConservationViolation {
  int flow_id;
  NodeIndex node;
  int net_degree;       // out minus in
  int expected_degree;  // +1 at source, -1 at destination, 0 elsewhere
};

struct LinkOnceViolation {
  int flow_id;
  NodeIndex node;           // branching node, or link head for repeats
  NodeIndex repeated_to;    // kInvalidNode for branch violations
};

struct DelayCheck {
  bool pass = false;
  double total_ms = 0.0;
};

/// Per directed link: sum of assigned rates must stay within mu * bandwidth.
std::vector<CapacityViolation> check_link_capacity(const NetworkGraph& graph,
                                                   const Placement& placement,
                                                   const CapacityPolicy& policy);

/// Per flow: net out-degree is +1 at the source, -1 at the destination,
/// 0 elsewhere.
std::vector<ConservationViolation> check_flow_conservation(const NetworkGraph& graph,
                                                           const Placement& placement);

/// Total path delay within t_max (inclusive); the total is reported
/// either way.
DelayCheck check_delay(const NetworkGraph& graph, const PathCandidate& path,
                       double t_max_ms);

/// Per flow: no node forwards over more than one link, no directed link
/// repeats.
std::vector<LinkOnceViolation> check_link_once(const Placement& placement);

nlohmann::json violations_to_json(const NetworkGraph& graph,
                                  const std::vector<CapacityViolation>& capacity,
                                  const std::vector<ConservationViolation>& conservation,
                                  const std::vector<LinkOnceViolation>& link_once);

}  // namespace tel

#endif  // TEL_CONSTRAINTS_HPP
