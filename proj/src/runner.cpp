#include "tel/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tel/graphml.hpp"
#include "tel/parallel.hpp"
#include "tel/rng.hpp"

namespace tel {

SolveOutput run_solve(const Scenario& scenario, std::uint64_t seed) {
  SolveOutput out;
  out.graph = build_scenario_graph(scenario);
  out.demands = build_demands(scenario, out.graph, seed);
  if (out.demands.empty()) throw ScenarioError("scenario produced no demands");

  SolverConfig cfg = scenario.solver;
  cfg.seed = seed;
  out.result = select_paths(out.graph, out.demands, cfg);
  out.plans = out.result.feasible_plans();
  if (!out.plans.empty())
    assign_flow_set_ids(out.plans, scenario.flow_set_max_width_bits);
  out.failures = resolve_failures(scenario, out.graph, out.plans);
  return out;
}

nlohmann::json SolveOutput::plans_json() const {
  nlohmann::json arr = nlohmann::json::array();
  std::size_t next_feasible = 0;
  for (std::size_t i = 0; i < result.plans.size(); ++i) {
    if (result.plans[i]) {
      arr.push_back(plan_to_json(graph, plans[next_feasible++]));
    } else {
      arr.push_back({{"demand",
                      {{"src", graph.node(demands[i].src).name},
                       {"dst", graph.node(demands[i].dst).name},
                       {"rate_bps", demands[i].rate_bps}}},
                     {"infeasible", true}});
    }
  }
  return {{"plans", arr},
          {"feasible", plans.size()},
          {"infeasible", result.plans.size() - plans.size()}};
}

SimulateOutput run_simulate(const Scenario& scenario, bool run_tel, bool run_baseline,
                            bool force_serial) {
  SimulateOutput out;
  out.report_interval_ms = scenario.sim.report_interval_ms;
  out.replicas.resize(static_cast<std::size_t>(scenario.replicas));

  parallel_for(
      out.replicas.size(),
      [&](std::size_t r) {
        std::uint64_t seed = Rng::derive(scenario.solver.seed, r);
        SolveOutput solved = run_solve(scenario, seed);
        ReplicaMetrics& rm = out.replicas[r];
        rm.seed = seed;
        auto rules = compile_rules(solved.graph, solved.plans);
        if (run_tel) {
          SimConfig cfg = scenario.sim;
          cfg.baseline_mode = false;
          rm.tel = run_flow_sim(solved.graph, solved.plans, rules, solved.failures, cfg);
        }
        if (run_baseline) {
          SimConfig cfg = scenario.sim;
          cfg.baseline_mode = true;
          rm.baseline =
              run_flow_sim(solved.graph, solved.plans, rules, solved.failures, cfg);
        }
      },
      force_serial);
  return out;
}

std::string SimulateOutput::throughput_csv(bool tel_mode, bool baseline_mode) const {
  std::ostringstream csv;
  csv << "mode,replica,time_ms,flow_id,bps\n";
  auto emit = [&](const char* mode, std::size_t r, const SimMetrics& m) {
    for (std::size_t f = 0; f < m.flows.size(); ++f)
      for (std::size_t i = 0; i < m.flows[f].interval_bps.size(); ++i)
        csv << mode << "," << r << "," << (static_cast<double>(i) * m.report_interval_ms)
            << "," << f << "," << m.flows[f].interval_bps[i] << "\n";
  };
  for (std::size_t r = 0; r < replicas.size(); ++r) {
    if (tel_mode) emit("tel", r, replicas[r].tel);
    if (baseline_mode) emit("baseline", r, replicas[r].baseline);
  }
  return csv.str();
}

std::string SimulateOutput::fct_csv() const {
  std::ostringstream csv;
  csv << "mode,replica,flow_id,fct_ms\n";
  auto emit = [&](const char* mode, std::size_t r, const SimMetrics& m) {
    for (std::size_t f = 0; f < m.flows.size(); ++f)
      if (m.flows[f].fct_ms >= 0.0)
        csv << mode << "," << r << "," << f << "," << m.flows[f].fct_ms << "\n";
  };
  for (std::size_t r = 0; r < replicas.size(); ++r) {
    emit("tel", r, replicas[r].tel);
    emit("baseline", r, replicas[r].baseline);
  }
  return csv.str();
}

namespace {

nlohmann::json mode_summary(const std::vector<ReplicaMetrics>& replicas,
                            bool use_baseline) {
  double delivered = 0.0;
  double fct_sum = 0.0;
  std::size_t fct_count = 0;
  std::size_t disconnected = 0;
  for (const ReplicaMetrics& r : replicas) {
    const SimMetrics& m = use_baseline ? r.baseline : r.tel;
    delivered += m.delivered_bytes_total;
    for (const FlowMetrics& f : m.flows) {
      if (f.fct_ms >= 0.0) {
        fct_sum += f.fct_ms;
        ++fct_count;
      }
      if (f.disconnected) ++disconnected;
    }
  }
  std::size_t n = replicas.empty() ? 1 : replicas.size();
  nlohmann::json j;
  j["delivered_bytes_mean"] = delivered / static_cast<double>(n);
  if (fct_count)
    j["fct_ms_mean"] = fct_sum / static_cast<double>(fct_count);
  else
    j["fct_ms_mean"] = nullptr;
  j["disconnected_flows"] = disconnected;
  return j;
}

}  // namespace

nlohmann::json SimulateOutput::summary_json() const {
  nlohmann::json seeds = nlohmann::json::array();
  for (const ReplicaMetrics& r : replicas) seeds.push_back(r.seed);
  return {{"replicas", replicas.size()},
          {"seeds", seeds},
          {"tel", mode_summary(replicas, false)},
          {"baseline", mode_summary(replicas, true)}};
}

RulesOutput run_rules(const SolveOutput& solved) {
  RulesOutput out;
  out.rules = compile_rules(solved.graph, solved.plans);
  std::vector<std::pair<NodeIndex, NodeIndex>> failure_links;
  for (const FailureEvent& ev : solved.failures) failure_links.push_back({ev.u, ev.v});
  out.memory = memory_cost(solved.graph, solved.plans, failure_links);
  return out;
}

std::string RulesOutput::rules_jsonl(const NetworkGraph& graph,
                                     std::size_t plan_count) const {
  std::ostringstream lines;
  for (const auto& [sw, ruleset] : rules) {
    for (const TableEntry& e : ruleset.entries)
      lines << entry_to_json(graph, sw, e).dump() << "\n";
    lines << nlohmann::json{{"switch", graph.node(sw).name},
                            {"register", register_image_hex(ruleset, plan_count)}}
                 .dump()
          << "\n";
  }
  return lines.str();
}

std::vector<HopsRow> run_hops(const std::string& topology_dir, HopsConfig& cfg,
                              bool force_serial) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(topology_dir))
    if (entry.path().extension() == ".graphml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<HopsRow> rows;
  for (const fs::path& file : files) {
    NetworkGraph base;
    try {
      base = load_graphml_file(file.string(), cfg.defaults);
    } catch (const std::exception& e) {
      cfg.skipped.push_back(file.filename().string() + ": " + e.what());
      continue;
    }
    if (base.undirected_link_count() < cfg.min_links ||
        base.undirected_link_count() > cfg.max_links)
      continue;

    HopsRow row;
    row.topology = file.stem().string();
    row.links = base.undirected_link_count();
    attach_hosts(base, cfg.defaults);

    std::vector<NodeIndex> hosts;
    for (NodeIndex i = 0; i < static_cast<NodeIndex>(base.node_count()); ++i)
      if (base.node(i).is_host) hosts.push_back(i);

    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (NodeIndex a : hosts)
      for (NodeIndex b : hosts)
        if (a != b) pairs.emplace_back(a, b);
    if (static_cast<int>(pairs.size()) > cfg.max_pairs) {
      Rng rng(Rng::derive(cfg.seed, std::hash<std::string>{}(row.topology)));
      // Seeded sample without replacement.
      for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
        std::size_t j = i + rng.next_below(pairs.size() - i);
        std::swap(pairs[i], pairs[j]);
      }
      pairs.resize(static_cast<std::size_t>(cfg.max_pairs));
    }

    struct PairResult {
      int primary_hops = 0;
      int backup_hops = -1;
      int baseline_hops = 0;
      bool ok = false;
    };
    std::vector<PairResult> results(pairs.size());

    parallel_for(
        pairs.size(),
        [&](std::size_t p) {
          NetworkGraph g = base;  // each pair solves on a fresh copy
          FlowDemand demand;
          demand.src = pairs[p].first;
          demand.dst = pairs[p].second;
          demand.rate_bps = 1.0;
          SolverConfig scfg;
          scfg.iterations = cfg.iterations;
          scfg.seed = Rng::derive(cfg.seed, p);
          auto solved = select_paths(g, {demand}, scfg);
          auto sp = baseline::shortest_path(base, demand.src, demand.dst,
                                            baseline::Metric::hop_count);
          if (!solved.plans[0] || !sp) return;
          PairResult& r = results[p];
          r.ok = true;
          r.primary_hops = static_cast<int>(solved.plans[0]->primary.hop_count());
          if (solved.plans[0]->backup)
            r.backup_hops = static_cast<int>(solved.plans[0]->backup->hop_count());
          r.baseline_hops = static_cast<int>(sp->hop_count());
        },
        force_serial);

    double primary_sum = 0.0, backup_sum = 0.0, baseline_sum = 0.0;
    for (const PairResult& r : results) {
      if (!r.ok) continue;
      ++row.pairs;
      primary_sum += r.primary_hops;
      baseline_sum += r.baseline_hops;
      if (r.backup_hops >= 0) {
        ++row.pairs_with_backup;
        backup_sum += r.backup_hops;
      }
    }
    if (row.pairs == 0) {
      cfg.skipped.push_back(row.topology + ": no solvable host pairs");
      continue;
    }
    row.mean_primary_hops = primary_sum / row.pairs;
    row.mean_baseline_hops = baseline_sum / row.pairs;
    row.mean_backup_hops =
        row.pairs_with_backup ? backup_sum / row.pairs_with_backup : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string hops_csv(const std::vector<HopsRow>& rows) {
  std::ostringstream csv;
  csv << "topology,links,pairs,mean_primary_hops,mean_backup_hops,mean_baseline_hops,"
         "primary_over_baseline\n";
  for (const HopsRow& r : rows)
    csv << r.topology << "," << r.links << "," << r.pairs << "," << r.mean_primary_hops
        << "," << r.mean_backup_hops << "," << r.mean_baseline_hops << ","
        << (r.mean_baseline_hops > 0 ? r.mean_primary_hops / r.mean_baseline_hops : 0.0)
        << "\n";
  return csv.str();
}

ValidateOutput run_validate(const SolveOutput& solved, const CapacityPolicy& policy) {
  ValidateOutput out;
  Placement placement = placement_from_plans(solved.plans);
  out.capacity = check_link_capacity(solved.graph, placement, policy);
  out.conservation = check_flow_conservation(solved.graph, placement);
  out.link_once = check_link_once(placement);
  for (std::size_t i = 0; i < solved.plans.size(); ++i) {
    const PathPlan& plan = solved.plans[i];
    DelayCheck dc = check_delay(solved.graph, plan.primary, plan.demand.max_delay_ms);
    if (!dc.pass) out.delay_failures.emplace_back(static_cast<int>(i), dc);
  }
  return out;
}

}  // namespace tel
