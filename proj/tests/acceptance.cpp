// Acceptance harness: one line of output per criterion, non-zero exit
// when any check fails. Tolerances are pinned here, not configurable.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tel/baseline.hpp"
#include "tel/constraints.hpp"
#include "tel/dataplane.hpp"
#include "tel/dla.hpp"
#include "tel/graph.hpp"
#include "tel/parallel.hpp"
#include "tel/rng.hpp"
#include "tel/rulegen.hpp"
#include "tel/runner.hpp"
#include "tel/scenario.hpp"

using namespace tel;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s: criterion %d %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++g_failures;
}

LinkDefaults uniform_link() {
  LinkDefaults d;
  d.bandwidth_bps = 10e6;
  d.delay_ms = 1.0;
  d.cost = 1.0;
  return d;
}

NetworkGraph random_connected_graph(Rng& rng, int n) {
  NetworkGraph g;
  for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i));
  for (int i = 1; i < n; ++i) {
    LinkDefaults d = uniform_link();
    d.delay_ms = 0.5 + rng.next_double() * 4.0;
    d.cost = 0.5 + rng.next_double() * 2.0;
    g.add_link(static_cast<NodeIndex>(i),
               static_cast<NodeIndex>(rng.next_below(static_cast<std::uint64_t>(i))), d);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.has_link(i, j) && rng.next_double() < 0.3) {
        LinkDefaults d = uniform_link();
        d.delay_ms = 0.5 + rng.next_double() * 4.0;
        d.cost = 0.5 + rng.next_double() * 2.0;
        g.add_link(i, j, d);
      }
  return g;
}

void enumerate(const NetworkGraph& g, NodeIndex cur, NodeIndex dst,
               std::vector<NodeIndex>& walk, std::vector<char>& visited,
               double value, const CostCoefficients& coeffs, double& best) {
  if (cur == dst) {
    best = std::min(best, value);
    return;
  }
  for (NodeIndex to : g.neighbors(cur)) {
    if (visited[static_cast<std::size_t>(to)]) continue;
    const LinkAttr& l = g.link(cur, to);
    double util = (l.bandwidth_bps - l.residual_bps) / l.bandwidth_bps;
    double step = coeffs.alpha * util + coeffs.lambda * l.cost + coeffs.zeta * l.delay_ms;
    visited[static_cast<std::size_t>(to)] = 1;
    walk.push_back(to);
    enumerate(g, to, dst, walk, visited, value + step, coeffs, best);
    walk.pop_back();
    visited[static_cast<std::size_t>(to)] = 0;
  }
}

double optimum_value(const NetworkGraph& g, NodeIndex s, NodeIndex d,
                     const CostCoefficients& coeffs) {
  std::vector<NodeIndex> walk{s};
  std::vector<char> visited(g.node_count(), 0);
  visited[static_cast<std::size_t>(s)] = 1;
  double best = 1e300;
  enumerate(g, s, d, walk, visited, 0.0, coeffs, best);
  return best;
}

bool placement_clean(const NetworkGraph& graph, const std::vector<PathPlan>& plans,
                     std::string& why) {
  Placement placement = placement_from_plans(plans);
  if (!check_link_capacity(graph, placement, CapacityPolicy{1.0}).empty()) {
    why = "capacity";
    return false;
  }
  if (!check_flow_conservation(graph, placement).empty()) {
    why = "conservation";
    return false;
  }
  if (!check_link_once(placement).empty()) {
    why = "link-once";
    return false;
  }
  for (const PathPlan& plan : plans)
    if (!check_delay(graph, plan.primary, plan.demand.max_delay_ms).pass) {
      why = "delay";
      return false;
    }
  return true;
}

bool rules_sound(const NetworkGraph& graph, const std::vector<PathPlan>& plans,
                 std::string& why) {
  auto rules = compile_rules(graph, plans);
  for (const PathPlan& plan : plans) {
    auto primary = resolve_route(graph, rules, plan.demand.src, plan.demand.dst);
    if (!primary || *primary != plan.primary.nodes) {
      why = "primary mismatch for flow_set " + std::to_string(plan.flow_set_id);
      return false;
    }
    if (!plan.backup) continue;
    auto flipped = apply_failure_to_rules(rules, {plan.flow_set_id});
    auto backup = resolve_route(graph, flipped, plan.demand.src, plan.demand.dst);
    if (!backup || *backup != plan.backup->nodes) {
      why = "backup mismatch for flow_set " + std::to_string(plan.flow_set_id);
      return false;
    }
  }
  return true;
}

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

// ---- criterion 1: learning automaton mechanics ----

void criterion_1() {
  NetworkGraph g;
  NodeIndex c = g.add_node("c");
  std::vector<NodeIndex> spokes;
  for (int i = 0; i < 6; ++i) {
    NodeIndex s = g.add_node("s" + std::to_string(i));
    g.add_link(c, s, uniform_link());
    spokes.push_back(s);
  }
  DlaGraph dla = init_dla(g);
  LearningAutomaton& la = dla.automata[static_cast<std::size_t>(c)];
  Rng rng(2024);

  double max_err = 0.0;
  double max_simplex_err = 0.0;
  bool negative = false;
  for (int step = 0; step < 10'000; ++step) {
    if (step % 500 == 0) {
      // Re-seed the vector with a random point on the simplex.
      double sum = 0.0;
      for (double& p : la.probabilities) {
        p = 1e-6 + rng.next_double();
        sum += p;
      }
      for (double& p : la.probabilities) p /= sum;
    }
    std::size_t pick = rng.next_below(la.actions.size());
    double a = 1e-9 + rng.next_double() * (1.0 - 1e-9);  // a in (0, 1]
    std::vector<double> expected = la.probabilities;
    for (std::size_t i = 0; i < expected.size(); ++i)
      expected[i] = i == pick ? expected[i] + a * (1.0 - expected[i])
                              : expected[i] * (1.0 - a);
    PathCandidate path;
    path.nodes = {c, la.actions[pick]};
    reward_path(dla, g, path, a);

    double sum = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      max_err = std::max(max_err, std::abs(la.probabilities[i] - expected[i]));
      if (la.probabilities[i] < 0.0) negative = true;
      sum += la.probabilities[i];
    }
    max_simplex_err = std::max(max_simplex_err, std::abs(sum - 1.0));
  }
  bool pass = max_err <= 1e-12 && max_simplex_err <= 1e-9 && !negative;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "(LA update: max deviation %.2e, simplex drift %.2e over 10000 rewards)",
                max_err, max_simplex_err);
  report(1, pass, buf);
}

// ---- criteria 2 and part of 5/9: solver optimality on random graphs ----

struct OptimalityResult {
  int graphs_ok = 0;
  int worst_hits = 100;
  bool never_below = true;
  bool constraints_clean = true;
  bool rules_ok = true;
};

OptimalityResult criterion_2_5_9_random(int graph_count) {
  OptimalityResult res;
  std::vector<int> hits(static_cast<std::size_t>(graph_count), 0);
  std::vector<char> below(static_cast<std::size_t>(graph_count), 0);
  std::vector<char> unclean(static_cast<std::size_t>(graph_count), 0);
  std::vector<char> unsound(static_cast<std::size_t>(graph_count), 0);

  parallel_for(static_cast<std::size_t>(graph_count), [&](std::size_t gi) {
    Rng graph_rng(Rng::derive(4242, gi));
    int n = 6 + static_cast<int>(graph_rng.next_below(5));
    NetworkGraph base = random_connected_graph(graph_rng, n);
    NodeIndex s = 0;
    NodeIndex d = static_cast<NodeIndex>(n - 1);
    CostCoefficients coeffs;
    double optimum = optimum_value(base, s, d, coeffs);

    for (std::uint64_t run = 0; run < 100; ++run) {
      NetworkGraph g = base;
      FlowDemand demand;
      demand.src = s;
      demand.dst = d;
      demand.rate_bps = 1.0;
      SolverConfig cfg;
      cfg.iterations = 500;
      cfg.seed = Rng::derive(gi + 1, run);
      auto solved = select_paths(g, {demand}, cfg);
      if (!solved.plans[0]) continue;
      double v = solved.plans[0]->primary.value;
      if (v < optimum - 1e-9) below[gi] = 1;
      if (v <= optimum + 1e-9) ++hits[gi];

      if (run == 0) {
        std::vector<PathPlan> plans{*solved.plans[0]};
        assign_flow_set_ids(plans);
        std::string why;
        if (!placement_clean(base, plans, why)) unclean[gi] = 1;
        if (!rules_sound(base, plans, why)) unsound[gi] = 1;
      }
    }
  });

  for (int gi = 0; gi < graph_count; ++gi) {
    std::size_t i = static_cast<std::size_t>(gi);
    if (hits[i] >= 90) ++res.graphs_ok;
    res.worst_hits = std::min(res.worst_hits, hits[i]);
    if (below[i]) res.never_below = false;
    if (unclean[i]) res.constraints_clean = false;
    if (unsound[i]) res.rules_ok = false;
  }
  return res;
}

// ---- criterion 3: simple-topology failover timing ----

struct FailoverResult {
  bool pass = false;
  std::string detail;
  bool constraints_clean = false;
  bool rules_ok = false;
};

FailoverResult criterion_3() {
  FailoverResult res;
  Scenario sc;
  sc.topology = "simple";
  DemandSpec::Explicit e;
  e.src = "H1";
  e.dst = "H2";
  e.rate_bps = 1e6;
  sc.demands.explicit_demands.push_back(e);
  sc.solver.iterations = 300;
  FailureSpec fs;
  fs.link = std::make_pair(std::string("S1"), std::string("S2"));
  fs.time_ms = 5000.0;
  fs.detection_delay_ms = 50.0;
  sc.failures.push_back(fs);
  sc.sim.duration_ms = 10'000.0;
  sc.sim.report_interval_ms = 10.0;  // tick resolution for exact timing
  sc.sim.control_plane_delay_ms = 1'000.0;

  // The three 2-hop paths tie on value, so the solver's pick is
  // seed-dependent; take a seed whose primary crosses (S1, S2), the
  // link both the failure and the baseline shortest path use.
  SolveOutput solved;
  for (std::uint64_t seed = 1; seed <= 64; ++seed) {
    sc.solver.seed = seed;
    solved = run_solve(sc, seed);
    if (solved.plans.size() == 1 && solved.plans[0].primary.uses_link(
                                        solved.graph.index_of("S1"),
                                        solved.graph.index_of("S2")))
      break;
  }
  if (solved.plans.size() != 1 || !solved.plans[0].backup) {
    res.detail = "(no plan with backup)";
    return res;
  }
  const PathPlan& plan = solved.plans[0];
  // Switch-level paths are H, S1, mid, S5, H: two switch hops.
  bool shape = plan.primary.nodes.size() == 5 && plan.backup->nodes.size() == 5 &&
               plan.primary.nodes[2] != plan.backup->nodes[2];

  auto rules = compile_rules(solved.graph, solved.plans);
  SimConfig tel_cfg = sc.sim;
  SimMetrics tel = run_flow_sim(solved.graph, solved.plans, rules, solved.failures, tel_cfg);
  SimConfig base_cfg = sc.sim;
  base_cfg.baseline_mode = true;
  SimMetrics base =
      run_flow_sim(solved.graph, solved.plans, rules, solved.failures, base_cfg);

  auto first_recovery_ms = [&](const SimMetrics& m) {
    const auto& bps = m.flows[0].interval_bps;
    for (std::size_t i = 500; i < bps.size(); ++i)
      if (bps[i] > 0.0) return static_cast<double>(i) * 10.0;
    return -1.0;
  };
  double tel_rec = first_recovery_ms(tel);
  double base_rec = first_recovery_ms(base);
  bool timing = std::abs(tel_rec - 5050.0) < 1e-9 &&
                std::abs(base_rec - (5050.0 + base_cfg.control_plane_delay_ms)) < 1e-9;
  bool delivered = tel.flows[0].delivered_bytes > base.flows[0].delivered_bytes;

  res.pass = shape && timing && delivered;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "(failover: TEL back at %.0f ms, baseline at %.0f ms, delivered %.0f vs "
                "%.0f bytes)",
                tel_rec, base_rec, tel.flows[0].delivered_bytes,
                base.flows[0].delivered_bytes);
  res.detail = buf;

  std::string why;
  res.constraints_clean = placement_clean(solved.graph, solved.plans, why);
  res.rules_ok = rules_sound(solved.graph, solved.plans, why);
  return res;
}

// ---- criteria 4 and 8: finite-flow quantiles and degradation trend ----

Scenario corpus_scenario(const std::string& file, int failure_count, double rate_bps,
                         double size_bytes, double duration_ms) {
  Scenario sc;
  sc.topology = std::string(TEL_DATA_DIR) + "/topologies/" + file;
  sc.attach_hosts = true;
  sc.demands.random_count = 25;
  sc.demands.random_rate_bps = rate_bps;
  sc.demands.random_size_bytes = size_bytes;
  sc.solver.iterations = 400;
  sc.solver.seed = 71;
  for (int f = 0; f < failure_count; ++f) {
    FailureSpec fs;
    fs.plan_index = f;
    fs.time_ms = 500.0;
    fs.detection_delay_ms = 50.0;
    sc.failures.push_back(fs);
  }
  sc.sim.duration_ms = duration_ms;
  sc.sim.control_plane_delay_ms = 1'000.0;  // >= 500 ms per the FCT bound
  return sc;
}

struct CorpusChecks {
  bool fct_ok = true;
  bool constraints_clean = true;
  bool rules_ok = true;
  bool trend_ok = true;
  std::string detail;
};

CorpusChecks criterion_4_8(const std::string& file) {
  CorpusChecks res;
  std::string detail;

  // FCT quantile dominance with 1 and 2 failures, 25 x 4.5 KByte flows
  // at 36 kbps (1 s nominal completion, straddling the 500 ms failure).
  for (int failures : {1, 2}) {
    Scenario sc = corpus_scenario(file, failures, 36'000.0, 4'500.0, 4'000.0);
    SolveOutput solved = run_solve(sc, sc.solver.seed);
    std::string why;
    if (!placement_clean(solved.graph, solved.plans, why)) res.constraints_clean = false;
    if (!rules_sound(solved.graph, solved.plans, why)) res.rules_ok = false;

    auto rules = compile_rules(solved.graph, solved.plans);
    SimConfig tel_cfg = sc.sim;
    SimMetrics tel =
        run_flow_sim(solved.graph, solved.plans, rules, solved.failures, tel_cfg);
    SimConfig base_cfg = sc.sim;
    base_cfg.baseline_mode = true;
    SimMetrics base =
        run_flow_sim(solved.graph, solved.plans, rules, solved.failures, base_cfg);

    auto fcts = [&](const SimMetrics& m) {
      std::vector<double> out;
      for (const FlowMetrics& f : m.flows)
        out.push_back(f.fct_ms >= 0.0 ? f.fct_ms : sc.sim.duration_ms);
      return out;
    };
    std::vector<double> tel_fct = fcts(tel), base_fct = fcts(base);
    for (int q = 10; q <= 90; q += 10) {
      double tq = quantile(tel_fct, q / 100.0);
      double bq = quantile(base_fct, q / 100.0);
      if (tq > bq + 1e-9) {
        res.fct_ok = false;
        detail += " q" + std::to_string(q) + "@" + std::to_string(failures) + "f:" +
                  std::to_string(tq) + ">" + std::to_string(bq);
      }
    }
  }

  // Degradation trend: long-lived flows, mean per-path throughput must
  // not increase with the failure count.
  double prev_mean = -1.0;
  for (int failures : {0, 1, 2}) {
    Scenario sc = corpus_scenario(file, failures, 500'000.0, 0.0, 2'000.0);
    SolveOutput solved = run_solve(sc, sc.solver.seed);
    auto rules = compile_rules(solved.graph, solved.plans);
    SimMetrics tel =
        run_flow_sim(solved.graph, solved.plans, rules, solved.failures, sc.sim);
    double mean = 0.0;
    for (const FlowMetrics& f : tel.flows)
      mean += f.delivered_bytes * 8.0 / (sc.sim.duration_ms / 1000.0);
    mean /= static_cast<double>(tel.flows.size());
    if (prev_mean >= 0.0 && mean > prev_mean * 1.01) {
      res.trend_ok = false;
      detail += " trend@" + std::to_string(failures) + "f";
    }
    prev_mean = mean;
  }
  res.detail = detail.empty() ? "(all quantiles and trends in order)" : "(" + detail + ")";
  return res;
}

// ---- criterion 6: memory accounting ----

void criterion_6() {
  NetworkGraph g;
  for (const char* n : {"A", "B", "C", "D"}) g.add_node(n);
  LinkDefaults attrs;
  g.add_link(g.index_of("A"), g.index_of("B"), attrs);
  g.add_link(g.index_of("B"), g.index_of("D"), attrs);
  g.add_link(g.index_of("A"), g.index_of("C"), attrs);
  g.add_link(g.index_of("C"), g.index_of("D"), attrs);

  PathPlan plan;
  plan.demand.src = g.index_of("A");
  plan.demand.dst = g.index_of("D");
  plan.primary.nodes = {g.index_of("A"), g.index_of("B"), g.index_of("D")};
  plan.backup = PathCandidate{{g.index_of("A"), g.index_of("C"), g.index_of("D")}, 0.0};

  std::vector<PathPlan> plans;
  for (int i = 0; i < 128; ++i) {
    plans.push_back(plan);
    plans.back().flow_set_id = i;
  }
  auto report_mem = memory_cost(g, plans, {{g.index_of("A"), g.index_of("B")}});

  bool pass = report_mem.width_bits == 7;
  int affected_total = 0;
  for (const SwitchMemory& m : report_mem.switches) {
    if (m.base_bits != 8) pass = false;
    if (m.sw == g.index_of("A") || m.sw == g.index_of("D")) {
      ++affected_total;
      if (m.extra_bits != 57 || m.base_bits + m.extra_bits != 65) pass = false;
    } else if (m.extra_bits != 0) {
      pass = false;
    }
  }
  if (affected_total != 2) pass = false;

  // Two additional table entries per backup on the steering-only switch.
  auto rules = generate_rules(g, plans[0]);
  int c_entries = -1;
  for (const SwitchRuleSet& r : rules)
    if (r.sw == g.index_of("C")) c_entries = static_cast<int>(r.entries.size());
  if (c_entries != 2) pass = false;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "(memory: width 7 -> 8 base bits, 57 extra, 65 on %d affected switches, "
                "%d backup rules)",
                affected_total, c_entries);
  report(6, pass, buf);
}

// ---- criterion 7: hop parity over the topology corpus ----

void criterion_7() {
  HopsConfig cfg;
  cfg.seed = 13;
  cfg.iterations = 700;
  std::vector<HopsRow> rows = run_hops(std::string(TEL_DATA_DIR) + "/topologies", cfg);

  bool pass = rows.size() >= 10;
  std::string worst;
  double worst_ratio = 0.0;
  double worst_gap = 0.0;
  for (const HopsRow& r : rows) {
    double ratio = r.mean_primary_hops / r.mean_baseline_hops;
    double gap = std::abs(r.mean_backup_hops - r.mean_primary_hops);
    if (ratio > 1.2 + 1e-9 || (r.pairs_with_backup > 0 && gap > 2.0 + 1e-9)) {
      pass = false;
      worst += " " + r.topology;
    }
    worst_ratio = std::max(worst_ratio, ratio);
    if (r.pairs_with_backup > 0) worst_gap = std::max(worst_gap, gap);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "(hop parity over %zu topologies: worst ratio %.3f, worst backup gap "
                "%.2f%s)",
                rows.size(), worst_ratio, worst_gap,
                worst.empty() ? "" : (", offenders:" + worst).c_str());
  report(7, pass, buf);
}

}  // namespace

int main() {
  criterion_1();

  OptimalityResult opt = criterion_2_5_9_random(20);
  {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "(optimum hit on %d/20 graphs, worst 90-of-100 score %d, never below "
                  "optimum: %s)",
                  opt.graphs_ok, opt.worst_hits, opt.never_below ? "yes" : "no");
    report(2, opt.graphs_ok == 20 && opt.never_below, buf);
  }

  FailoverResult fo = criterion_3();
  report(3, fo.pass, fo.detail);

  CorpusChecks att = criterion_4_8("AttMpls.graphml");
  CorpusChecks good = criterion_4_8("Goodnet.graphml");
  report(4, att.fct_ok && good.fct_ok,
         "(FCT quantiles: AttMpls " + att.detail + ", Goodnet " + good.detail + ")");

  bool c5 = opt.constraints_clean && fo.constraints_clean && att.constraints_clean &&
            good.constraints_clean;
  report(5, c5, "(constraint checks clean across criteria 2-4 scenarios)");

  criterion_6();
  criterion_7();

  report(8, att.trend_ok && good.trend_ok,
         "(mean per-path throughput non-increasing in failures on both corpora)");

  bool c9 = opt.rules_ok && fo.rules_ok && att.rules_ok && good.rules_ok;
  report(9, c9, "(rule forwarding reproduces primary and backup paths exactly)");

  return g_failures == 0 ? 0 : 1;
}
