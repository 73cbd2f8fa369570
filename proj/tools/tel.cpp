// Scenario-driven front end. Exit codes: 0 success, 1 usage or parse
// failure, 2 infeasible demand, 3 validation failure.
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tel/runner.hpp"
#include "tel/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInfeasible = 2, kInvariant = 3 };

int log_level() {
  const char* env = std::getenv("TEL_LAB_LOG");
  if (!env) return 1;
  std::string v(env);
  if (v == "quiet" || v == "0") return 0;
  if (v == "debug" || v == "2") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "tel: " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "tel: " << msg << "\n";
}

struct CommonOpts {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicas;
  std::optional<std::string> out_dir;
  std::string mode = "both";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_scenario = true) {
  auto* s = cmd->add_option("--scenario", opts.scenario_path, "Scenario JSON file");
  if (needs_scenario) s->required();
  cmd->add_option("--seed", opts.seed, "Override the scenario's solver seed");
  cmd->add_option("--replicas", opts.replicas, "Override the scenario's replica count");
  cmd->add_option("--out", opts.out_dir, "Output directory (overrides the scenario)");
  cmd->add_option("--mode", opts.mode, "Simulation mode: tel, baseline or both")
      ->check(CLI::IsMember({"tel", "baseline", "both"}));
}

// Flags take precedence over scenario file values.
tel::Scenario load_with_overrides(const CommonOpts& opts) {
  tel::Scenario sc = tel::load_scenario_file(opts.scenario_path);
  if (opts.seed) sc.solver.seed = *opts.seed;
  if (opts.replicas) sc.replicas = *opts.replicas;
  if (opts.out_dir) sc.output_dir = *opts.out_dir;
  return sc;
}

std::string out_path(const tel::Scenario& sc, const char* name) {
  return sc.output_dir + "/" + name;
}

int cmd_solve(const CommonOpts& opts) {
  tel::Scenario sc = load_with_overrides(opts);
  tel::SolveOutput solved = tel::run_solve(sc, sc.solver.seed);
  tel::atomic_write(out_path(sc, "plans.json"), solved.plans_json().dump(2) + "\n");
  log_info("wrote " + out_path(sc, "plans.json") + " (" +
           std::to_string(solved.plans.size()) + " plans)");
  if (!solved.result.all_feasible()) {
    log_info("some demands are infeasible");
    return kInfeasible;
  }
  return kOk;
}

int cmd_simulate(const CommonOpts& opts) {
  tel::Scenario sc = load_with_overrides(opts);
  bool run_tel = opts.mode != "baseline";
  bool run_base = opts.mode != "tel";
  log_debug("simulating " + std::to_string(sc.replicas) + " replicas, mode " + opts.mode);
  tel::SimulateOutput out = tel::run_simulate(sc, run_tel, run_base);
  tel::atomic_write(out_path(sc, "throughput.csv"), out.throughput_csv(run_tel, run_base));
  tel::atomic_write(out_path(sc, "fct.csv"), out.fct_csv());
  tel::atomic_write(out_path(sc, "summary.json"), out.summary_json().dump(2) + "\n");
  log_info("wrote throughput.csv, fct.csv and summary.json under " + sc.output_dir);
  return kOk;
}

int cmd_rules(const CommonOpts& opts) {
  tel::Scenario sc = load_with_overrides(opts);
  tel::SolveOutput solved = tel::run_solve(sc, sc.solver.seed);
  if (solved.plans.empty()) {
    log_info("no feasible plans, nothing to compile");
    return kInfeasible;
  }
  tel::RulesOutput rules = tel::run_rules(solved);
  tel::atomic_write(out_path(sc, "rules.jsonl"),
                    rules.rules_jsonl(solved.graph, solved.plans.size()));
  tel::atomic_write(out_path(sc, "memory.csv"), rules.memory.to_csv(solved.graph));
  log_info("wrote rules.jsonl and memory.csv under " + sc.output_dir);
  return solved.result.all_feasible() ? kOk : kInfeasible;
}

int cmd_hops(const std::string& dir, tel::HopsConfig cfg, const std::string& out_dir) {
  auto rows = tel::run_hops(dir, cfg);
  for (const std::string& skip : cfg.skipped) log_info("skipped " + skip);
  tel::atomic_write(out_dir + "/hops.csv", tel::hops_csv(rows));
  log_info("wrote " + out_dir + "/hops.csv (" + std::to_string(rows.size()) +
           " topologies)");
  return kOk;
}

int cmd_validate(const CommonOpts& opts) {
  tel::Scenario sc = load_with_overrides(opts);
  tel::SolveOutput solved = tel::run_solve(sc, sc.solver.seed);
  tel::ValidateOutput v = tel::run_validate(solved, sc.solver.capacity);

  nlohmann::json j =
      tel::violations_to_json(solved.graph, v.capacity, v.conservation, v.link_once);
  j["delay_failures"] = nlohmann::json::array();
  for (const auto& [flow, dc] : v.delay_failures)
    j["delay_failures"].push_back({{"flow", flow}, {"total_ms", dc.total_ms}});
  j["clean"] = v.clean();
  tel::atomic_write(out_path(sc, "violations.json"), j.dump(2) + "\n");
  log_info("wrote " + out_path(sc, "violations.json"));

  if (!solved.result.all_feasible()) return kInfeasible;
  return v.clean() ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Failover traffic-engineering toolkit"};
  app.require_subcommand(1);

  CommonOpts solve_opts, sim_opts, rules_opts, validate_opts;
  add_common(app.add_subcommand("solve", "Compute primary/backup path plans"),
             solve_opts);
  add_common(app.add_subcommand("simulate", "Run the fluid simulation"), sim_opts);
  add_common(app.add_subcommand("rules", "Compile table rules and memory report"),
             rules_opts);
  add_common(app.add_subcommand("validate", "Check plans against the constraints"),
             validate_opts);

  std::string hops_dir;
  std::string hops_out = "out";
  tel::HopsConfig hops_cfg;
  CLI::App* hops = app.add_subcommand("hops", "Hop comparison across topologies");
  hops->add_option("--topologies", hops_dir, "Directory of GraphML files")->required();
  hops->add_option("--min-links", hops_cfg.min_links, "Smallest topology to include");
  hops->add_option("--max-links", hops_cfg.max_links, "Largest topology to include");
  hops->add_option("--max-pairs", hops_cfg.max_pairs, "Host-pair sample size");
  hops->add_option("--seed", hops_cfg.seed, "Sampling and solver seed");
  hops->add_option("--iterations", hops_cfg.iterations, "Solver iterations per pair");
  hops->add_option("--out", hops_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("solve")) return cmd_solve(solve_opts);
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_opts);
    if (app.got_subcommand("rules")) return cmd_rules(rules_opts);
    if (app.got_subcommand("validate")) return cmd_validate(validate_opts);
    if (app.got_subcommand("hops")) return cmd_hops(hops_dir, hops_cfg, hops_out);
  } catch (const tel::ScenarioError& e) {
    std::cerr << "tel: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "tel: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
