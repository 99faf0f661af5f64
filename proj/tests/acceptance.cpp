// Acceptance gate: five criteria, each printed as one [PASS]/[FAIL] line
// with its measured runtime against a pinned budget. Exits non-zero if any
// criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/backprop.hpp"
#include "core/network.hpp"
#include "core/serialize.hpp"
#include "core/sim.hpp"
#include "core/trainer.hpp"
#include "fixtures.hpp"

using namespace rovernet;

namespace {

struct CriterionResult {
  bool passed = true;
  std::vector<std::string> details;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      details.push_back(what);
    }
  }
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void expect_close(CriterionResult& r, const std::string& label, double actual,
                  double expected, double tolerance) {
  r.expect(std::abs(actual - expected) <= tolerance,
           label + ": expected " + format_number(expected) + ", got " +
               format_number(actual) + " (tolerance " +
               format_number(tolerance) + ")");
}

/* ---- criterion 1: worked-example golden reproduction ------------------- */

void criterion_worked_example(CriterionResult& r) {
  Network net = testfix::demo_network();
  const ForwardTrace trace = forward(net, {0.0, 0.0});

  expect_close(r, "forward output 0", trace.outputs()[0], 0.83, 5e-3);
  expect_close(r, "forward output 1", trace.outputs()[1], 1.74995, 5e-3);

  DeltaState delta = DeltaState::zeros_for(net);
  StepConfig step;
  const StepResult result = backprop_step(net, std::vector<double>{0.0, 0.0},
                                          std::vector<double>{1.0, 1.0}, step,
                                          delta);

  expect_close(r, "output error 0", result.errors[0], 0.17, 5e-3);
  expect_close(r, "output error 1", result.errors[1], -0.74994, 5e-3);
  expect_close(r, "updated W00(out)", net.weights[1].at(0, 0), 0.13227, 5e-3);
  expect_close(r, "updated W10(out)", net.weights[1].at(1, 0), 0.83176, 5e-3);
  expect_close(r, "updated W01(out)", net.weights[1].at(0, 1), 0.05346, 5e-3);
  expect_close(r, "updated W00(hid)", net.weights[0].at(0, 0), 0.17, 5e-3);
}

/* ---- criterion 2: gradient-check suite --------------------------------- */

void criterion_gradient_check(CriterionResult& r) {
  std::mt19937_64 rng(2025);
  const auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  };

  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Network net = random_network(Topology{{2, 3, 2}}, trial);
    const Pattern pattern = {{uniform(-1.0, 1.0), uniform(-1.0, 1.0)},
                             {uniform(0.0, 1.0), uniform(0.0, 1.0)}};
    const double deviation = gradient_check(net, pattern, 1e-5);
    r.expect(deviation < 1e-6, "trial " + std::to_string(trial) +
                                   ": deviation " + format_number(deviation) +
                                   " >= 1e-6");
  }
}

/* ---- criterion 3: convergence properties -------------------------------- */

void criterion_convergence(CriterionResult& r) {
  TrainingConfig worked_cfg;
  Dataset worked;
  worked.patterns = {testfix::demo_pattern()};
  const TrainingResult single =
      train(testfix::demo_network(), worked, worked_cfg);
  r.expect(single.converged, "single-pattern task did not converge");
  r.expect(dataset_max_abs_error(single.final_network, worked) <= 0.01,
           "single-pattern task ended above the 0.01 threshold");

  TrainingConfig avoid_cfg;
  avoid_cfg.momentum = 0.9;
  const TrainingResult avoid =
      train(random_network(Topology{{2, 3, 2}}, testfix::kAvoidanceSeed),
            testfix::avoidance_dataset(), avoid_cfg);
  r.expect(avoid.converged,
           "avoidance dataset did not converge within 10000 epochs");
  r.expect(avoid.epochs_run <= 10000, "avoidance training exceeded the cap");
}

/* ---- criterion 4: path-planning scenario -------------------------------- */

void criterion_path_planning(CriterionResult& r) {
  const Network net = testfix::trained_avoidance_network();
  const World world = testfix::demo_world();
  const SimConfig cfg;

  const Trajectory traj = simulate(net, world, cfg);
  r.expect(traj.outcome == Outcome::ReachedGoal,
           "outcome was " + to_string(traj.outcome) + " after " +
               std::to_string(traj.steps.size()) + " recorded steps");
  r.expect(traj.steps.size() <= cfg.max_steps + 1,
           "trajectory exceeded 2000 steps");

  double max_abs_y = 0.0;
  std::size_t collisions = 0;
  for (const TrajectoryStep& s : traj.steps) {
    if (check_collision(s.pose, world, cfg)) ++collisions;
    max_abs_y = std::max(max_abs_y, std::abs(s.pose.y));
  }
  r.expect(collisions == 0,
           std::to_string(collisions) + " recorded poses collide");
  r.expect(max_abs_y > 1.0, "max |y| over the trajectory was " +
                                format_number(max_abs_y) +
                                ", expected > 1 (a genuine detour)");
}

/* ---- criterion 5: determinism and round-trip ---------------------------- */

int run_cli(const std::string& args, const std::string& stdout_path) {
  const std::string command = std::string(ROVERNET_CLI_PATH) + " " + args +
                              " > " + stdout_path + " 2>/dev/null";
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void criterion_determinism(CriterionResult& r) {
  const std::string data_dir = ROVERNET_DATA_DIR;
  const std::string seed = std::to_string(testfix::kAvoidanceSeed);

  const int demo1 = run_cli("demo-paper", "acc_demo_1.txt");
  const int demo2 = run_cli("demo-paper", "acc_demo_2.txt");
  r.expect(demo1 == 0, "demo-paper exited with " + std::to_string(demo1));
  r.expect(demo1 == demo2, "demo-paper exit codes differ between runs");
  r.expect(read_bytes("acc_demo_1.txt") == read_bytes("acc_demo_2.txt"),
           "demo-paper output differs between runs");

  const std::string train_args = "train --dataset " + data_dir +
                                 "/avoidance.csv --seed " + seed +
                                 " --momentum 0.9 --trace";
  const int train1 = run_cli(train_args + " --out acc_net_1.json",
                             "acc_train_1.txt");
  const int train2 = run_cli(train_args + " --out acc_net_2.json",
                             "acc_train_2.txt");
  r.expect(train1 == 0, "train exited with " + std::to_string(train1));
  r.expect(train1 == train2, "train exit codes differ between runs");
  r.expect(read_bytes("acc_train_1.txt") == read_bytes("acc_train_2.txt"),
           "train output differs between runs");
  r.expect(read_bytes("acc_net_1.json") == read_bytes("acc_net_2.json"),
           "trained network files differ between runs");
  r.expect(!read_bytes("acc_net_1.json").empty(),
           "train produced an empty network file");

  const std::string sim_args = "simulate --network acc_net_1.json --scenario " +
                               data_dir + "/demo_scenario.json";
  const int sim1 =
      run_cli(sim_args + " --csv acc_traj_1.csv --svg acc_traj_1.svg",
              "acc_sim_1.txt");
  const int sim2 =
      run_cli(sim_args + " --csv acc_traj_2.csv --svg acc_traj_2.svg",
              "acc_sim_2.txt");
  r.expect(sim1 == 0, "simulate exited with " + std::to_string(sim1));
  r.expect(sim1 == sim2, "simulate exit codes differ between runs");
  r.expect(read_bytes("acc_sim_1.txt") == read_bytes("acc_sim_2.txt"),
           "simulate output differs between runs");
  r.expect(read_bytes("acc_traj_1.csv") == read_bytes("acc_traj_2.csv"),
           "trajectory CSVs differ between runs");
  r.expect(read_bytes("acc_traj_1.svg") == read_bytes("acc_traj_2.svg"),
           "trajectory SVGs differ between runs");
  r.expect(!read_bytes("acc_traj_1.csv").empty(),
           "simulate produced an empty trajectory CSV");

  // Save/load must preserve forward outputs bit-exactly.
  const Network original = random_network(Topology{{2, 3, 2}}, 123);
  std::stringstream buffer;
  save_network(original, buffer);
  const Network loaded = load_network(buffer);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::size_t mismatched = 0;
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> input = {dist(rng), dist(rng)};
    if (forward(original, input).outputs() != forward(loaded, input).outputs())
      ++mismatched;
  }
  r.expect(mismatched == 0, std::to_string(mismatched) +
                                " of 100 round-trip forward passes changed");
}

/* ------------------------------------------------------------------------ */

struct Criterion {
  const char* name;
  void (*run)(CriterionResult&);
  double budget_ms;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"worked-example golden reproduction", criterion_worked_example, 1.0},
      {"gradient-check suite (20 trials)", criterion_gradient_check, 1000.0},
      {"convergence properties", criterion_convergence, 5000.0},
      {"path-planning scenario", criterion_path_planning, 1000.0},
      {"determinism and round-trip", criterion_determinism, 1000.0},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    CriterionResult result;
    const auto begin = std::chrono::steady_clock::now();
    c.run(result);
    const auto end = std::chrono::steady_clock::now();
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(end - begin).count();

    result.expect(elapsed_ms <= c.budget_ms,
                  "runtime " + format_number(elapsed_ms) +
                      " ms exceeded the " + format_number(c.budget_ms) +
                      " ms budget");

    std::printf("[%s] criterion %d: %s (%.2f ms, budget %.0f ms)\n",
                result.passed ? "PASS" : "FAIL", index, c.name, elapsed_ms,
                c.budget_ms);
    for (const std::string& detail : result.details) {
      std::printf("       - %s\n", detail.c_str());
    }
    if (!result.passed) ++failures;
  }

  if (failures > 0) {
    std::printf("%d of 5 acceptance criteria failed\n", failures);
    return 1;
  }
  std::printf("all 5 acceptance criteria passed\n");
  return 0;
}
