// Compares serial and OpenMP replica batches on the same scenario and
// checks that both produce byte-identical results.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "tel/runner.hpp"
#include "tel/scenario.hpp"

namespace {

tel::Scenario default_scenario(int replicas) {
  tel::Scenario sc;
  sc.topology = "simple";
  tel::DemandSpec::Explicit e;
  e.src = "H1";
  e.dst = "H2";
  e.rate_bps = 1e6;
  sc.demands.explicit_demands.push_back(e);
  sc.solver.iterations = 500;
  sc.solver.seed = 3;
  tel::FailureSpec f;
  f.plan_index = 0;
  f.time_ms = 5000.0;
  f.detection_delay_ms = 50.0;
  sc.failures.push_back(f);
  sc.replicas = replicas;
  return sc;
}

double run_timed(const tel::Scenario& sc, bool force_serial, std::size_t& checksum) {
  auto start = std::chrono::steady_clock::now();
  tel::SimulateOutput out = tel::run_simulate(sc, true, true, force_serial);
  auto stop = std::chrono::steady_clock::now();
  checksum = std::hash<std::string>{}(out.throughput_csv(true, true) + out.fct_csv());
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  int replicas = 32;
  tel::Scenario sc;
  if (argc > 1) {
    sc = tel::load_scenario_file(argv[1]);
    if (argc > 2) sc.replicas = std::atoi(argv[2]);
  } else {
    sc = default_scenario(replicas);
  }

  std::size_t serial_sum = 0, parallel_sum = 0;
  double t_serial = run_timed(sc, true, serial_sum);
  double t_parallel = run_timed(sc, false, parallel_sum);

  std::printf("replicas:        %d\n", sc.replicas);
  std::printf("serial:          %.3f s\n", t_serial);
  std::printf("parallel:        %.3f s\n", t_parallel);
  std::printf("speedup:         %.2fx\n", t_parallel > 0.0 ? t_serial / t_parallel : 0.0);
  std::printf("results match:   %s\n", serial_sum == parallel_sum ? "yes" : "NO");
  return serial_sum == parallel_sum ? 0 : 1;
}
