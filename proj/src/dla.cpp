#include "tel/dla.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace tel {

namespace {
constexpr double kRateEps = 1e-6;
}

bool PathCandidate::uses_link(NodeIndex a, NodeIndex b) const {
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if ((nodes[i] == a && nodes[i + 1] == b) || (nodes[i] == b && nodes[i + 1] == a))
      return true;
  return false;
}

bool PathCandidate::link_disjoint(const PathCandidate& other, const NetworkGraph& graph,
                                  bool ignore_host_links) const {
  std::set<std::pair<NodeIndex, NodeIndex>> mine;
  auto is_host_link = [&](NodeIndex a, NodeIndex b) {
    return graph.node(a).is_host || graph.node(b).is_host;
  };
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (ignore_host_links && is_host_link(nodes[i], nodes[i + 1])) continue;
    mine.emplace(nodes[i], nodes[i + 1]);
  }
  for (std::size_t i = 0; i + 1 < other.nodes.size(); ++i) {
    if (ignore_host_links && is_host_link(other.nodes[i], other.nodes[i + 1])) continue;
    if (mine.count({other.nodes[i], other.nodes[i + 1]})) return false;
  }
  return true;
}

bool SolveResult::all_feasible() const {
  return std::all_of(plans.begin(), plans.end(),
                     [](const auto& p) { return p.has_value(); });
}

std::vector<PathPlan> SolveResult::feasible_plans() const {
  std::vector<PathPlan> out;
  for (const auto& p : plans)
    if (p) out.push_back(*p);
  return out;
}

DlaGraph init_dla(const NetworkGraph& graph) {
  if (graph.node_count() == 0) throw GraphError("init_dla on empty graph");
  DlaGraph dla;
  dla.automata.resize(graph.node_count());
  for (NodeIndex i = 0; i < static_cast<NodeIndex>(graph.node_count()); ++i) {
    LearningAutomaton& la = dla.automata[static_cast<std::size_t>(i)];
    la.actions = graph.neighbors(i);
    std::size_t n = la.actions.size();
    la.probabilities.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
    la.enabled.assign(n, 1);
  }
  return dla;
}

void reward_path(DlaGraph& dla, const NetworkGraph& graph, const PathCandidate& path,
                 double a) {
  (void)graph;
  for (std::size_t h = 0; h + 1 < path.nodes.size(); ++h) {
    LearningAutomaton& la = dla.automata.at(static_cast<std::size_t>(path.nodes[h]));
    auto it = std::find(la.actions.begin(), la.actions.end(), path.nodes[h + 1]);
    if (it == la.actions.end())
      throw GraphError("reward_path: chosen action not in automaton");
    std::size_t chosen = static_cast<std::size_t>(it - la.actions.begin());

    double frozen_mass = 0.0;
    for (std::size_t j = 0; j < la.actions.size(); ++j)
      if (j != chosen && !la.enabled[j]) frozen_mass += la.probabilities[j];

    double updated_mass = 0.0;
    for (std::size_t j = 0; j < la.actions.size(); ++j) {
      if (j == chosen)
        la.probabilities[j] += a * (1.0 - la.probabilities[j]);
      else if (la.enabled[j])
        la.probabilities[j] *= (1.0 - a);
      else
        continue;
      updated_mass += la.probabilities[j];
    }
    // Renormalize the non-frozen mass; a no-op when nothing is frozen
    // since the update itself preserves the total.
    double target = 1.0 - frozen_mass;
    if (updated_mass > 0.0 && target > 0.0) {
      double scale = target / updated_mass;
      for (std::size_t j = 0; j < la.actions.size(); ++j)
        if (j == chosen || la.enabled[j]) la.probabilities[j] *= scale;
    }
  }
}

double evaluate_path(const NetworkGraph& graph, const std::vector<NodeIndex>& nodes,
                     const CostCoefficients& coeffs) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const LinkAttr& l = graph.link(nodes[i], nodes[i + 1]);
    total += coeffs.alpha * graph.utilization(nodes[i], nodes[i + 1]) +
             coeffs.lambda * l.cost + coeffs.zeta * l.delay_ms;
  }
  return total;
}

double path_delay_ms(const NetworkGraph& graph, const std::vector<NodeIndex>& nodes) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    total += graph.link(nodes[i], nodes[i + 1]).delay_ms;
  return total;
}

std::optional<PathCandidate> explore_path(DlaGraph& dla, const NetworkGraph& graph,
                                          NodeIndex s, NodeIndex d, double rate_bps,
                                          Rng& rng, ExploreStats* stats) {
  const std::size_t n = graph.node_count();
  const std::uint64_t step_cap = static_cast<std::uint64_t>(n) * n;

  std::vector<char> on_walk(n, 0);
  std::vector<std::vector<char>> traversed(n);
  std::vector<NodeIndex> walk{s};
  on_walk[static_cast<std::size_t>(s)] = 1;

  std::uint64_t steps = 0;
  std::vector<double> weights;
  while (!walk.empty()) {
    if (++steps > step_cap) break;
    NodeIndex cur = walk.back();
    LearningAutomaton& la = dla.automata[static_cast<std::size_t>(cur)];
    auto& used = traversed[static_cast<std::size_t>(cur)];
    if (used.empty()) used.assign(la.actions.size(), 0);

    weights.assign(la.actions.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < la.actions.size(); ++i) {
      if (!la.enabled[i] || used[i]) continue;
      NodeIndex to = la.actions[i];
      if (on_walk[static_cast<std::size_t>(to)]) continue;
      if (graph.link(cur, to).residual_bps + kRateEps < rate_bps) continue;
      weights[i] = la.probabilities[i];
      total += weights[i];
    }

    if (total <= 0.0) {
      // Dead end: drop the node from the walk and back up.
      on_walk[static_cast<std::size_t>(cur)] = 0;
      walk.pop_back();
      continue;
    }

    double r = rng.next_double() * total;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      pick = i;
      r -= weights[i];
      if (r <= 0.0) break;
    }
    used[pick] = 1;
    NodeIndex to = la.actions[pick];
    walk.push_back(to);
    on_walk[static_cast<std::size_t>(to)] = 1;
    if (to == d) {
      if (stats) stats->steps += steps;
      return PathCandidate{std::move(walk), 0.0};
    }
  }
  if (stats) stats->steps += steps;
  return std::nullopt;
}

std::optional<PathCandidate> choose_backup(const std::vector<PathCandidate>& log,
                                           const NetworkGraph& graph) {
  if (log.size() < 2) return std::nullopt;
  const PathCandidate& primary = log.front();
  for (std::size_t i = 1; i < log.size(); ++i)
    if (log[i].link_disjoint(primary, graph, /*ignore_host_links=*/true))
      return log[i];
  for (std::size_t i = 1; i < log.size(); ++i)
    if (!log[i].same_route(primary)) return log[i];
  return std::nullopt;
}

void update_bandwidth(NetworkGraph& graph, const PathCandidate& path, double rate_bps) {
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    LinkAttr& l = graph.link(path.nodes[i], path.nodes[i + 1]);
    if (l.residual_bps + kRateEps < rate_bps)
      throw GraphError("update_bandwidth: residual underflow on " +
                       graph.node(path.nodes[i]).name + " -> " +
                       graph.node(path.nodes[i + 1]).name);
    l.residual_bps = std::max(0.0, l.residual_bps - rate_bps);
  }
}

SolveResult select_paths(NetworkGraph& graph, const std::vector<FlowDemand>& demands,
                         const SolverConfig& cfg) {
  if (cfg.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  SolveResult result;
  result.plans.resize(demands.size());
  Rng rng(cfg.seed);
  ExploreStats stats;

  for (std::size_t di = 0; di < demands.size(); ++di) {
    const FlowDemand& demand = demands[di];
    if (demand.src == demand.dst || demand.rate_bps <= 0.0)
      throw std::invalid_argument("invalid demand: src == dst or non-positive rate");

    // Fresh automata per demand; actions over links that cannot carry
    // the demand stay disabled for the whole solve.
    DlaGraph dla = init_dla(graph);
    for (NodeIndex n = 0; n < static_cast<NodeIndex>(graph.node_count()); ++n) {
      LearningAutomaton& la = dla.automata[static_cast<std::size_t>(n)];
      for (std::size_t i = 0; i < la.actions.size(); ++i)
        if (graph.link(n, la.actions[i]).residual_bps + kRateEps < demand.rate_bps)
          la.enabled[i] = 0;
    }

    std::optional<PathCandidate> best;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<PathCandidate> log;

    for (int iter = 0; iter < cfg.iterations; ++iter) {
      auto cand = explore_path(dla, graph, demand.src, demand.dst, demand.rate_bps,
                               rng, &stats);
      if (!cand) continue;
      if (path_delay_ms(graph, cand->nodes) > demand.max_delay_ms) continue;
      cand->value = evaluate_path(graph, cand->nodes, cfg.coefficients);
      bool seen = std::any_of(log.begin(), log.end(),
                              [&](const PathCandidate& p) { return p.same_route(*cand); });
      if (!seen) log.push_back(*cand);
      if (cand->value <= best_value) {
        // Routes are rewarded once per improvement; re-finding the
        // incumbent adds nothing and would starve exploration.
        if (!seen || cand->value < best_value)
          reward_path(dla, graph, *cand, cfg.reward_a);
        best_value = cand->value;
        best = *cand;
      }
    }

    if (!best) continue;  // demand infeasible, slot stays empty

    std::stable_sort(log.begin(), log.end(),
                     [](const PathCandidate& x, const PathCandidate& y) {
                       return x.value < y.value;
                     });
    // The incumbent is the most recent minimum-value route; put it first.
    auto it = std::find_if(log.begin(), log.end(),
                           [&](const PathCandidate& p) { return p.same_route(*best); });
    if (it != log.begin()) std::rotate(log.begin(), it, it + 1);

    PathPlan plan;
    plan.demand = demand;
    plan.primary = *best;
    plan.exploration_log = log;
    plan.backup = choose_backup(log, graph);
    update_bandwidth(graph, plan.primary, demand.rate_bps);
    result.plans[di] = std::move(plan);
  }
  result.exploration_steps = stats.steps;
  return result;
}

nlohmann::json path_to_json(const NetworkGraph& graph, const PathCandidate& path) {
  nlohmann::json names = nlohmann::json::array();
  for (NodeIndex n : path.nodes) names.push_back(graph.node(n).name);
  return {{"nodes", names}, {"value", path.value}};
}

nlohmann::json plan_to_json(const NetworkGraph& graph, const PathPlan& plan) {
  nlohmann::json j;
  j["demand"] = {{"src", graph.node(plan.demand.src).name},
                 {"dst", graph.node(plan.demand.dst).name},
                 {"rate_bps", plan.demand.rate_bps}};
  if (std::isfinite(plan.demand.max_delay_ms))
    j["demand"]["max_delay_ms"] = plan.demand.max_delay_ms;
  j["primary"] = path_to_json(graph, plan.primary);
  j["backup"] = plan.backup ? path_to_json(graph, *plan.backup) : nlohmann::json();
  j["log_size"] = plan.exploration_log.size();
  j["flow_set_id"] = plan.flow_set_id;
  return j;
}

}  // namespace tel
