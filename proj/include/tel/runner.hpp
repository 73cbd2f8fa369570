#ifndef TEL_RUNNER_HPP
#define TEL_RUNNER_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tel/constraints.hpp"
#include "tel/dataplane.hpp"
#include "tel/scenario.hpp"

namespace tel {

struct SolveOutput {
  NetworkGraph graph;            // residuals reflect the placement
  std::vector<FlowDemand> demands;
  SolveResult result;
  std::vector<PathPlan> plans;   // feasible plans with flow_set ids
  std::vector<FailureEvent> failures;

  nlohmann::json plans_json() const;
};

SolveOutput run_solve(const Scenario& scenario, std::uint64_t seed);

struct ReplicaMetrics {
  std::uint64_t seed;
  SimMetrics tel;
  SimMetrics baseline;
};

struct SimulateOutput {
  std::vector<ReplicaMetrics> replicas;
  double report_interval_ms = 100.0;

  std::string throughput_csv(bool tel_mode, bool baseline_mode) const;
  std::string fct_csv() const;
  nlohmann::json summary_json() const;
};

/// Solves and simulates each replica over its derived seed. Replicas
/// are independent; they run through parallel_for and the aggregation
/// is keyed by seed, so serial and parallel execution agree exactly.
SimulateOutput run_simulate(const Scenario& scenario, bool run_tel, bool run_baseline,
                            bool force_serial = false);

struct RulesOutput {
  std::map<NodeIndex, SwitchRuleSet> rules;
  MemoryReport memory;
  std::string rules_jsonl(const NetworkGraph& graph, std::size_t plan_count) const;
};

RulesOutput run_rules(const SolveOutput& solved);

struct HopsRow {
  std::string topology;
  std::size_t links = 0;
  double mean_primary_hops = 0.0;
  double mean_backup_hops = 0.0;
  double mean_baseline_hops = 0.0;
  int pairs = 0;
  int pairs_with_backup = 0;
};

struct HopsConfig {
  std::size_t min_links = 5;
  std::size_t max_links = 250;
  int max_pairs = 40;          // seeded sample above this many host pairs
  std::uint64_t seed = 1;
  int iterations = 500;
  LinkDefaults defaults;
  std::vector<std::string> skipped;  // unreadable topologies, with reason
};

/// Per-topology mean hop counts for primaries, backups, and the
/// shortest-path baseline over sampled host pairs. Pairs run through
/// parallel_for on independent graph copies.
std::vector<HopsRow> run_hops(const std::string& topology_dir, HopsConfig& cfg,
                              bool force_serial = false);

std::string hops_csv(const std::vector<HopsRow>& rows);

struct ValidateOutput {
  std::vector<CapacityViolation> capacity;
  std::vector<ConservationViolation> conservation;
  std::vector<LinkOnceViolation> link_once;
  std::vector<std::pair<int, DelayCheck>> delay_failures;
  bool clean() const {
    return capacity.empty() && conservation.empty() && link_once.empty() &&
           delay_failures.empty();
  }
};

ValidateOutput run_validate(const SolveOutput& solved, const CapacityPolicy& policy);

}  // namespace tel

#endif  // TEL_RUNNER_HPP
