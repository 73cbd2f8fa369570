#include "tel/dataplane.hpp"

#include <algorithm>
#include <cmath>

#include "tel/maxmin.hpp"

namespace tel {

EgressDecision forward(const SwitchRuleSet& rules, const std::string& src_addr,
                       const std::string& dst_addr) {
  const TableEntry* t1 = nullptr;
  for (const TableEntry& e : rules.entries)
    if (e.table == 1 && e.match_src == src_addr && e.match_dst == dst_addr) {
      t1 = &e;
      break;
    }
  if (!t1) return {};  // table-1 miss

  int flow_set = t1->set_flow_set;
  auto bit_it = rules.path_status.find(flow_set);
  int bit = bit_it == rules.path_status.end() ? 0 : bit_it->second;

  for (const TableEntry& e : rules.entries)
    if (e.table == 2 && e.match_flow_set == flow_set && e.match_status == bit)
      return {false, e.next_hop, e.action_egress_port};
  return {};  // table-2 miss
}

std::optional<std::vector<NodeIndex>> resolve_route(
    const NetworkGraph& graph, const std::map<NodeIndex, SwitchRuleSet>& rules,
    NodeIndex src, NodeIndex dst) {
  std::string src_addr = node_address(graph, src);
  std::string dst_addr = node_address(graph, dst);
  std::vector<NodeIndex> route{src};
  std::vector<char> visited(graph.node_count(), 0);
  visited[static_cast<std::size_t>(src)] = 1;

  NodeIndex cur = src;
  if (graph.node(cur).is_host) {
    const auto& adj = graph.neighbors(cur);
    if (adj.empty()) return std::nullopt;
    cur = adj.front();
    route.push_back(cur);
    visited[static_cast<std::size_t>(cur)] = 1;
  }
  while (cur != dst) {
    auto it = rules.find(cur);
    if (it == rules.end()) return std::nullopt;
    EgressDecision d = forward(it->second, src_addr, dst_addr);
    if (d.drop) return std::nullopt;
    cur = d.next_hop;
    if (visited[static_cast<std::size_t>(cur)]) return std::nullopt;  // loop
    visited[static_cast<std::size_t>(cur)] = 1;
    route.push_back(cur);
  }
  return route;
}

FlowSim::FlowSim(const NetworkGraph& graph, std::vector<PathPlan> plans,
                 std::map<NodeIndex, SwitchRuleSet> rules,
                 std::vector<FailureEvent> failures, SimConfig cfg)
    : graph_(graph),
      plans_(std::move(plans)),
      rules_(std::move(rules)),
      failures_(std::move(failures)),
      cfg_(cfg) {
  std::stable_sort(failures_.begin(), failures_.end(),
                   [](const FailureEvent& a, const FailureEvent& b) {
                     return a.time_ms < b.time_ms;
                   });
  flows_.resize(plans_.size());
  if (cfg_.baseline_mode) {
    for (std::size_t f = 0; f < plans_.size(); ++f) {
      auto sp = baseline::shortest_path(graph_, plans_[f].demand.src,
                                        plans_[f].demand.dst, cfg_.baseline_metric);
      if (sp)
        flows_[f].route = sp->nodes;
      else
        flows_[f].disconnected = true;
    }
  } else {
    refresh_tel_routes();
  }
}

bool FlowSim::link_down(NodeIndex a, NodeIndex b) const {
  return down_links_.count({a, b}) > 0 || down_links_.count({b, a}) > 0;
}

bool FlowSim::route_crosses_down(const std::vector<NodeIndex>& route) const {
  for (std::size_t i = 0; i + 1 < route.size(); ++i)
    if (link_down(route[i], route[i + 1])) return true;
  return false;
}

void FlowSim::refresh_tel_routes() {
  for (std::size_t f = 0; f < flows_.size(); ++f) {
    if (flows_[f].disconnected) continue;
    flows_[f].route =
        resolve_route(graph_, rules_, plans_[f].demand.src, plans_[f].demand.dst);
  }
}

void FlowSim::inject_failure(const FailureEvent& event) {
  // Flip the status bit of every plan whose primary traverses the link.
  std::set<int> to_flip;
  for (const PathPlan& plan : plans_)
    if (plan.primary.uses_link(event.u, event.v) && plan.flow_set_id >= 0)
      to_flip.insert(plan.flow_set_id);
  if (!to_flip.empty()) rules_ = apply_failure_to_rules(std::move(rules_), to_flip);

  refresh_tel_routes();
  for (std::size_t f = 0; f < flows_.size(); ++f) {
    FlowState& fs = flows_[f];
    if (fs.disconnected) continue;
    if (!fs.route) {
      fs.disconnected = true;
      continue;
    }
    if (!route_crosses_down(*fs.route)) continue;
    auto bit_holder = rules_.find((*fs.route)[graph_.node((*fs.route)[0]).is_host ? 1 : 0]);
    int bit = 0;
    if (bit_holder != rules_.end()) {
      auto it = bit_holder->second.path_status.find(plans_[f].flow_set_id);
      if (it != bit_holder->second.path_status.end()) bit = it->second;
    }
    // Route still dead after the local flip had its chance: no second
    // backup exists, the flow stays down.
    if (bit == 1) fs.disconnected = true;
  }
}

void FlowSim::apply_events(double now_ms) {
  // Link-down events.
  while (next_fail_down_ < failures_.size() &&
         failures_[next_fail_down_].time_ms <= now_ms + 1e-9) {
    const FailureEvent& ev = failures_[next_fail_down_++];
    if (link_down(ev.u, ev.v)) {
      warnings_.push_back("link already failed: " + graph_.node(ev.u).name + "-" +
                          graph_.node(ev.v).name);
      continue;
    }
    down_links_.insert({ev.u, ev.v});
    down_links_.insert({ev.v, ev.u});
    if (cfg_.baseline_mode) {
      for (std::size_t f = 0; f < flows_.size(); ++f) {
        FlowState& fs = flows_[f];
        if (fs.disconnected || !fs.route) continue;
        if (route_crosses_down(*fs.route)) {
          fs.route_valid_from_ms =
              ev.time_ms + ev.detection_delay_ms + cfg_.control_plane_delay_ms;
          fs.route.reset();  // recomputed when the control plane answers
        }
      }
    }
  }

  if (cfg_.baseline_mode) {
    for (std::size_t f = 0; f < flows_.size(); ++f) {
      FlowState& fs = flows_[f];
      if (fs.disconnected || fs.route) continue;
      if (now_ms + 1e-9 < fs.route_valid_from_ms) continue;
      auto sp = baseline::reroute_after_failure(graph_, down_links_, plans_[f].demand.src,
                                                plans_[f].demand.dst, cfg_.baseline_metric);
      if (sp)
        fs.route = sp->nodes;
      else
        fs.disconnected = true;
    }
    return;
  }

  // Detection events: the local agent flips registers.
  while (next_fail_detect_ < failures_.size()) {
    // Detection follows the down event of the same failure.
    const FailureEvent& ev = failures_[next_fail_detect_];
    if (ev.time_ms + ev.detection_delay_ms > now_ms + 1e-9) break;
    ++next_fail_detect_;
    inject_failure(ev);
  }
}

ProbeEstimate FlowSim::probe_cycle(NodeIndex u, NodeIndex v, double now_ms) {
  LinkCounter& c = counters_[{u, v}];
  ProbeEstimate est;
  est.record = {u, v, c.bytes, c.last_probe_ms, now_ms};
  double elapsed_ms = now_ms - c.last_probe_ms;
  if (c.probed_once && elapsed_ms > 0.0) {
    est.valid = true;
    est.rate_bps = c.bytes * 8.0 / (elapsed_ms / 1000.0);
    double bw = graph_.link(u, v).bandwidth_bps;
    est.utilization = bw > 0.0 ? est.rate_bps / bw : 0.0;
  }
  c.bytes = 0.0;
  c.last_probe_ms = now_ms;
  c.probed_once = true;
  return est;
}

SimMetrics FlowSim::run() {
  SimMetrics metrics;
  metrics.report_interval_ms = cfg_.report_interval_ms;
  metrics.flows.resize(flows_.size());
  std::size_t intervals = static_cast<std::size_t>(
      std::ceil(cfg_.duration_ms / cfg_.report_interval_ms));
  std::vector<std::vector<double>> interval_bits(flows_.size(),
                                                 std::vector<double>(intervals, 0.0));

  // Directed link index for the allocator.
  std::map<std::pair<NodeIndex, NodeIndex>, int> link_index;
  std::vector<double> capacity;
  graph_.for_each_link([&](NodeIndex a, NodeIndex b, const LinkAttr& l) {
    link_index[{a, b}] = static_cast<int>(capacity.size());
    capacity.push_back(l.bandwidth_bps);
  });

  for (double t = 0.0; t < cfg_.duration_ms - 1e-9; t += cfg_.tick_ms) {
    apply_events(t);
    if (!cfg_.baseline_mode) refresh_tel_routes();

    std::vector<std::size_t> active;
    std::vector<std::vector<int>> flow_links;
    std::vector<double> demand;
    for (std::size_t f = 0; f < flows_.size(); ++f) {
      FlowState& fs = flows_[f];
      if (fs.done || fs.disconnected || !fs.route) continue;
      if (cfg_.baseline_mode && t + 1e-9 < fs.route_valid_from_ms) continue;
      if (route_crosses_down(*fs.route)) continue;
      active.push_back(f);
      std::vector<int> links;
      for (std::size_t i = 0; i + 1 < fs.route->size(); ++i)
        links.push_back(link_index.at({(*fs.route)[i], (*fs.route)[i + 1]}));
      flow_links.push_back(std::move(links));
      demand.push_back(plans_[f].demand.rate_bps);
    }

    std::vector<double> rates = max_min_allocate(capacity, flow_links, demand);

    const double tick_s = cfg_.tick_ms / 1000.0;
    std::size_t interval = std::min(
        intervals - 1, static_cast<std::size_t>(t / cfg_.report_interval_ms));

    for (std::size_t f = 0; f < flows_.size(); ++f) {
      FlowMetrics& fm = metrics.flows[f];
      const FlowDemand& d = plans_[f].demand;
      bool offering = !flows_[f].done && !flows_[f].disconnected;
      if (offering && d.traffic_class == TrafficClass::non_responsive)
        fm.offered_bytes += d.rate_bps * tick_s / 8.0;
    }

    for (std::size_t k = 0; k < active.size(); ++k) {
      std::size_t f = active[k];
      FlowState& fs = flows_[f];
      FlowMetrics& fm = metrics.flows[f];
      const FlowDemand& d = plans_[f].demand;
      double rate = rates[k];
      double tick_bytes = rate * tick_s / 8.0;
      double effective_ms = cfg_.tick_ms;

      if (d.size_bytes > 0.0) {
        double remaining = d.size_bytes - fs.delivered_bytes;
        if (tick_bytes >= remaining - 1e-12) {
          effective_ms = rate > 0.0 ? remaining * 8.0 / rate * 1000.0 : cfg_.tick_ms;
          tick_bytes = remaining;
          fs.done = true;
          fm.fct_ms = t + effective_ms;
        }
      }
      fs.delivered_bytes += tick_bytes;
      fm.delivered_bytes += tick_bytes;
      if (d.traffic_class == TrafficClass::responsive)
        fm.offered_bytes += tick_bytes;
      else
        fm.lost_bytes += std::max(0.0, d.rate_bps - rate) * tick_s / 8.0;
      interval_bits[f][interval] += tick_bytes * 8.0;

      for (std::size_t i = 0; i + 1 < fs.route->size(); ++i)
        counters_[{(*fs.route)[i], (*fs.route)[i + 1]}].bytes += tick_bytes;
    }

    double next = t + cfg_.tick_ms;
    if (std::fmod(next + 1e-9, cfg_.probe_interval_ms) < 1e-6 ||
        std::abs(std::fmod(next, cfg_.probe_interval_ms)) < 1e-6) {
      graph_.for_each_link([&](NodeIndex a, NodeIndex b, const LinkAttr&) {
        ProbeEstimate est = probe_cycle(a, b, next);
        if (est.valid)
          metrics.link_utilization.push_back(
              {next, a, b, est.rate_bps, est.utilization});
      });
    }
  }

  for (std::size_t f = 0; f < flows_.size(); ++f) {
    FlowMetrics& fm = metrics.flows[f];
    fm.disconnected = flows_[f].disconnected;
    fm.interval_bps.resize(intervals);
    for (std::size_t i = 0; i < intervals; ++i)
      fm.interval_bps[i] = interval_bits[f][i] / (cfg_.report_interval_ms / 1000.0);
    metrics.delivered_bytes_total += fm.delivered_bytes;
  }
  return metrics;
}

SimMetrics run_flow_sim(const NetworkGraph& graph, const std::vector<PathPlan>& plans,
                        const std::map<NodeIndex, SwitchRuleSet>& rules,
                        const std::vector<FailureEvent>& failures, const SimConfig& cfg) {
  FlowSim sim(graph, plans, rules, failures, cfg);
  return sim.run();
}

}  // namespace tel
