#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "tel/graph.hpp"
#include "tel/rulegen.hpp"

using namespace tel;

namespace {

// A - B - D with an A - C - D detour.
NetworkGraph diamond_graph() {
  NetworkGraph g;
  for (const char* n : {"A", "B", "C", "D"}) g.add_node(n);
  LinkDefaults attrs;
  g.add_link(g.index_of("A"), g.index_of("B"), attrs);
  g.add_link(g.index_of("B"), g.index_of("D"), attrs);
  g.add_link(g.index_of("A"), g.index_of("C"), attrs);
  g.add_link(g.index_of("C"), g.index_of("D"), attrs);
  return g;
}

PathPlan diamond_plan(const NetworkGraph& g, int id = 0) {
  PathPlan plan;
  plan.demand.src = g.index_of("A");
  plan.demand.dst = g.index_of("D");
  plan.demand.rate_bps = 1e6;
  plan.primary.nodes = {g.index_of("A"), g.index_of("B"), g.index_of("D")};
  plan.backup = PathCandidate{{g.index_of("A"), g.index_of("C"), g.index_of("D")}, 0.0};
  plan.flow_set_id = id;
  return plan;
}

const TableEntry* find_t2(const SwitchRuleSet& rules, int flow_set, int status) {
  for (const TableEntry& e : rules.entries)
    if (e.table == 2 && e.match_flow_set == flow_set && e.match_status == status)
      return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("flow_set width") {
  CHECK(flow_set_width_bits(1) == 1);
  CHECK(flow_set_width_bits(2) == 1);
  CHECK(flow_set_width_bits(3) == 2);
  CHECK(flow_set_width_bits(35) == 6);
  CHECK(flow_set_width_bits(64) == 6);
  CHECK(flow_set_width_bits(65) == 7);
  CHECK(flow_set_width_bits(128) == 7);
  CHECK(flow_set_width_bits(129) == 8);
}

TEST_CASE("assign_flow_set_ids is sequential and bounded") {
  NetworkGraph g = diamond_graph();
  std::vector<PathPlan> plans(5, diamond_plan(g, -1));
  assign_flow_set_ids(plans);
  for (int i = 0; i < 5; ++i) CHECK(plans[i].flow_set_id == i);

  CHECK_THROWS_AS(assign_flow_set_ids(plans, 2), std::length_error);  // 5 needs 3 bits
  assign_flow_set_ids(plans, 3);

  std::vector<PathPlan> none;
  CHECK_THROWS_AS(assign_flow_set_ids(none), std::invalid_argument);
}

TEST_CASE("egress ports follow the sorted adjacency") {
  NetworkGraph g = build_simple_topology();
  NodeIndex s1 = g.index_of("S1");
  // S1 neighbors in name order: H1, S2, S3, S4.
  CHECK(egress_port(g, s1, g.index_of("H1")) == 1);
  CHECK(egress_port(g, s1, g.index_of("S2")) == 2);
  CHECK(egress_port(g, s1, g.index_of("S4")) == 4);
  CHECK_THROWS_AS(egress_port(g, s1, g.index_of("S5")), GraphError);
}

TEST_CASE("generate_rules emits both families up front") {
  NetworkGraph g = diamond_graph();
  PathPlan plan = diamond_plan(g);
  auto rules = generate_rules(g, plan);
  REQUIRE(rules.size() == 3);  // A, B, C; D only receives

  for (const SwitchRuleSet& r : rules) {
    int t1 = 0;
    for (const TableEntry& e : r.entries)
      if (e.table == 1) {
        ++t1;
        CHECK(e.match_src == node_address(g, plan.demand.src));
        CHECK(e.match_dst == node_address(g, plan.demand.dst));
        CHECK(e.set_flow_set == 0);
      }
    CHECK(t1 == 1);
    CHECK(r.path_status.at(0) == 0);
  }

  SwitchRuleSet a = rules[0];
  REQUIRE(a.sw == g.index_of("A"));
  const TableEntry* primary = find_t2(a, 0, 0);
  const TableEntry* backup = find_t2(a, 0, 1);
  REQUIRE(primary != nullptr);
  REQUIRE(backup != nullptr);
  CHECK(primary->next_hop == g.index_of("B"));
  CHECK(backup->next_hop == g.index_of("C"));
  CHECK(primary->action_egress_port == egress_port(g, a.sw, g.index_of("B")));
  CHECK(backup->action_next_hop_mac == node_mac(g.index_of("C")));

  SUBCASE("a backup-only switch carries exactly two additional rules") {
    SwitchRuleSet c = rules[2];
    REQUIRE(c.sw == g.index_of("C"));
    CHECK(c.entries.size() == 2);
    CHECK(find_t2(c, 0, 1) != nullptr);
    CHECK(find_t2(c, 0, 0) == nullptr);
  }
  SUBCASE("unassigned plan is rejected") {
    PathPlan bad = diamond_plan(g, -1);
    CHECK_THROWS_AS(generate_rules(g, bad), std::invalid_argument);
  }
}

TEST_CASE("hosts never hold rules") {
  NetworkGraph g = build_simple_topology();
  PathPlan plan;
  plan.demand.src = g.index_of("H1");
  plan.demand.dst = g.index_of("H2");
  plan.demand.rate_bps = 1e6;
  plan.primary.nodes = {g.index_of("H1"), g.index_of("S1"), g.index_of("S2"),
                        g.index_of("S5"), g.index_of("H2")};
  plan.flow_set_id = 0;
  auto rules = generate_rules(g, plan);
  for (const SwitchRuleSet& r : rules) CHECK_FALSE(g.node(r.sw).is_host);
  // S5 forwards to H2, so all of S1, S2, S5 hold rules.
  CHECK(rules.size() == 3);
}

TEST_CASE("compile_rules merges plans per switch in canonical order") {
  NetworkGraph g = diamond_graph();
  std::vector<PathPlan> plans{diamond_plan(g, 0), diamond_plan(g, 1)};
  // Second plan runs the other way around the diamond.
  std::swap(plans[1].primary.nodes, plans[1].backup->nodes);
  plans[1].demand.src = g.index_of("D");
  plans[1].demand.dst = g.index_of("A");
  std::reverse(plans[1].primary.nodes.begin(), plans[1].primary.nodes.end());
  std::reverse(plans[1].backup->nodes.begin(), plans[1].backup->nodes.end());

  auto merged = compile_rules(g, plans);
  CHECK(merged.size() == 4);  // now every switch forwards something
  // B and C forward for both plans; A only forwards plan 0.
  CHECK(merged.at(g.index_of("B")).path_status.size() == 2);
  CHECK(merged.at(g.index_of("C")).path_status.size() == 2);
  const SwitchRuleSet& a = merged.at(g.index_of("A"));
  CHECK(a.path_status.size() == 1);
  CHECK(std::is_sorted(a.entries.begin(), a.entries.end()));

  SUBCASE("compilation is deterministic") {
    auto again = compile_rules(g, plans);
    REQUIRE(again.size() == merged.size());
    for (const auto& [sw, rules] : merged) {
      const SwitchRuleSet& other = again.at(sw);
      REQUIRE(other.entries.size() == rules.entries.size());
      for (std::size_t i = 0; i < rules.entries.size(); ++i)
        CHECK(other.entries[i] == rules.entries[i]);
    }
  }
}

TEST_CASE("apply_failure_to_rules flips only the failed plan's bit") {
  NetworkGraph g = diamond_graph();
  std::vector<PathPlan> plans{diamond_plan(g, 0), diamond_plan(g, 1)};
  auto merged = compile_rules(g, plans);
  auto flipped = apply_failure_to_rules(merged, {1});
  for (const auto& [sw, rules] : flipped) {
    CHECK(rules.path_status.at(0) == 0);
    CHECK(rules.path_status.at(1) == 1);
  }
  CHECK_THROWS_AS(apply_failure_to_rules(merged, {7}), std::out_of_range);
}

TEST_CASE("failure_affected_switches finds the divergence points") {
  NetworkGraph g = diamond_graph();
  PathPlan plan = diamond_plan(g);
  std::set<NodeIndex> affected = failure_affected_switches(plan);
  CHECK(affected == std::set<NodeIndex>{g.index_of("A"), g.index_of("D")});

  SUBCASE("no backup, nothing to steer") {
    plan.backup.reset();
    CHECK(failure_affected_switches(plan).empty());
  }
  SUBCASE("longer shared prefix moves the divergence inward") {
    // primary A-B-D, backup A-B-?-D is impossible on the diamond; use a
    // path pair sharing the first hop on a 5-node graph instead.
    NetworkGraph g2;
    for (const char* n : {"a", "b", "c", "d", "e"}) g2.add_node(n);
    LinkDefaults attrs;
    g2.add_link(g2.index_of("a"), g2.index_of("b"), attrs);
    g2.add_link(g2.index_of("b"), g2.index_of("c"), attrs);
    g2.add_link(g2.index_of("c"), g2.index_of("e"), attrs);
    g2.add_link(g2.index_of("b"), g2.index_of("d"), attrs);
    g2.add_link(g2.index_of("d"), g2.index_of("e"), attrs);
    PathPlan p2;
    p2.primary.nodes = {g2.index_of("a"), g2.index_of("b"), g2.index_of("c"),
                        g2.index_of("e")};
    p2.backup = PathCandidate{
        {g2.index_of("a"), g2.index_of("b"), g2.index_of("d"), g2.index_of("e")}, 0.0};
    CHECK(failure_affected_switches(p2) ==
          std::set<NodeIndex>{g2.index_of("b"), g2.index_of("e")});
  }
}

TEST_CASE("memory cost for the diamond at full table width") {
  NetworkGraph g = diamond_graph();
  std::vector<PathPlan> plans;
  for (int i = 0; i < 128; ++i) plans.push_back(diamond_plan(g, i));
  auto report = memory_cost(g, plans, {{g.index_of("A"), g.index_of("B")}});
  CHECK(report.width_bits == 7);
  REQUIRE(report.affected_per_failure == std::vector<int>{2});
  for (const SwitchMemory& m : report.switches) {
    CHECK(m.base_bits == 8);
    if (m.sw == g.index_of("A") || m.sw == g.index_of("D")) {
      CHECK(m.extra_bits == 57);
      CHECK(m.base_bits + m.extra_bits == 65);
    } else {
      CHECK(m.extra_bits == 0);
    }
  }

  SUBCASE("failures off the primary cost nothing") {
    auto r2 = memory_cost(g, plans, {{g.index_of("A"), g.index_of("C")}});
    CHECK(r2.affected_per_failure == std::vector<int>{0});
    for (const SwitchMemory& m : r2.switches) CHECK(m.extra_bits == 0);
  }
  SUBCASE("csv lists every switch") {
    std::string csv = report.to_csv(g);
    CHECK(csv.find("switch,base_bits,extra_bits") == 0);
    CHECK(csv.find("A,8,57") != std::string::npos);
    CHECK(csv.find("B,8,0") != std::string::npos);
  }
}

TEST_CASE("memory cost base bits for a single plan") {
  NetworkGraph g = diamond_graph();
  std::vector<PathPlan> plans{diamond_plan(g, 0)};
  auto report = memory_cost(g, plans, {});
  CHECK(report.width_bits == 1);
  for (const SwitchMemory& m : report.switches) CHECK(m.base_bits == 2);
}

TEST_CASE("register image packs status bits little-endian") {
  SwitchRuleSet rules;
  for (int i = 0; i < 9; ++i) rules.path_status[i] = 0;
  CHECK(register_image_hex(rules, 9) == "0000");
  rules.path_status[0] = 1;
  CHECK(register_image_hex(rules, 9) == "0001");
  rules.path_status[8] = 1;
  CHECK(register_image_hex(rules, 9) == "0101");
  rules.path_status[4] = 1;
  CHECK(register_image_hex(rules, 9) == "0111");
}
