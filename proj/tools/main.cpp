#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rovernet/rovernet.h"

namespace {

struct NetworkDeleter {
  void operator()(rvn_network* p) const { rvn_network_free(p); }
};
struct DeltaDeleter {
  void operator()(rvn_delta* p) const { rvn_delta_free(p); }
};
struct DatasetDeleter {
  void operator()(rvn_dataset* p) const { rvn_dataset_free(p); }
};
struct TraceDeleter {
  void operator()(rvn_trace* p) const { rvn_trace_free(p); }
};
struct WorldDeleter {
  void operator()(rvn_world* p) const { rvn_world_free(p); }
};
struct TrajectoryDeleter {
  void operator()(rvn_trajectory* p) const { rvn_trajectory_free(p); }
};

using NetworkPtr = std::unique_ptr<rvn_network, NetworkDeleter>;
using DeltaPtr = std::unique_ptr<rvn_delta, DeltaDeleter>;
using DatasetPtr = std::unique_ptr<rvn_dataset, DatasetDeleter>;
using TracePtr = std::unique_ptr<rvn_trace, TraceDeleter>;
using WorldPtr = std::unique_ptr<rvn_world, WorldDeleter>;
using TrajectoryPtr = std::unique_ptr<rvn_trajectory, TrajectoryDeleter>;

// For calls whose inputs come from files or flags: print a diagnostic and
// let the caller exit 1.
bool check(rvn_status status, const std::string& context) {
  if (status == RVN_OK) return true;
  std::fprintf(stderr, "error: %s: %s [%s]\n", context.c_str(),
               rvn_last_error(), rvn_status_name(status));
  return false;
}

// For calls that cannot fail once their inputs were validated.
void must(rvn_status status, const char* context) {
  if (status == RVN_OK) return;
  std::fprintf(stderr, "error: %s: %s [%s]\n", context, rvn_last_error(),
               rvn_status_name(status));
  std::exit(1);
}

rvn_update_mode parse_mode(const std::string& name) {
  return name == "simultaneous" ? RVN_UPDATE_SIMULTANEOUS
                                : RVN_UPDATE_SEQUENTIAL;
}

/* ---- demo-paper ------------------------------------------------------- */

constexpr double kDemoTolerance = 5e-3;

struct GoldenValue {
  std::string label;
  double actual;
  double expected;
};

int run_demo_paper(const std::string& mode_name) {
  const size_t layers[3] = {2, 3, 2};
  rvn_network* raw_net = nullptr;
  must(rvn_network_create(layers, 3, 1.0, &raw_net), "building demo network");
  NetworkPtr net(raw_net);

  const double hidden_weights[3][3] = {
      {0.17, 0.33, 0.10}, {0.30, 0.71, 0.21}, {0.15, 0.43, 0.69}};
  const double output_weights[2][4] = {{0.11, 0.03, 0.52, 0.41},
                                       {0.93, 0.14, 0.79, 0.66}};
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 3; ++j) {
      must(rvn_network_set_weight(net.get(), 0, i, j, hidden_weights[i][j]),
           "setting hidden weight");
    }
  }
  for (size_t i = 0; i < 2; ++i) {
    for (size_t j = 0; j < 4; ++j) {
      must(rvn_network_set_weight(net.get(), 1, i, j, output_weights[i][j]),
           "setting output weight");
    }
  }

  std::vector<GoldenValue> goldens;
  const auto show = [&goldens](const std::string& label, double actual,
                               double expected) {
    std::printf("%s = %.6f\n", label.c_str(), actual);
    goldens.push_back({label, actual, expected});
  };

  const double input[2] = {0.0, 0.0};
  rvn_trace* raw_trace = nullptr;
  must(rvn_trace_run(net.get(), input, 2, &raw_trace), "forward pass");
  TracePtr trace(raw_trace);

  const double expect_hidden_net[3] = {0.1, 0.21, 0.69};
  const double expect_hidden_out[3] = {0.524, 0.552, 0.665};
  for (size_t j = 0; j < 3; ++j) {
    double v = 0.0;
    must(rvn_trace_net_input(trace.get(), 0, j, &v), "reading hidden input");
    show("Input of h" + std::to_string(j), v, expect_hidden_net[j]);
    must(rvn_trace_activation(trace.get(), 0, j, &v), "reading hidden output");
    show("Output of h" + std::to_string(j), v, expect_hidden_out[j]);
  }
  const double expect_output[2] = {0.83, 1.74995};
  for (size_t k = 0; k < 2; ++k) {
    double v = 0.0;
    must(rvn_trace_net_input(trace.get(), 1, k, &v), "reading output input");
    show("Input of O" + std::to_string(k), v, expect_output[k]);
    must(rvn_trace_activation(trace.get(), 1, k, &v), "reading output");
    show("Output of O" + std::to_string(k), v, expect_output[k]);
  }

  rvn_delta* raw_delta = nullptr;
  must(rvn_delta_create(net.get(), &raw_delta), "building delta state");
  DeltaPtr delta(raw_delta);
  const double desired[2] = {1.0, 1.0};
  double errors[2] = {0.0, 0.0};
  must(rvn_backprop_step(net.get(), delta.get(), input, 2, desired, 2, 0.25,
                         0.0, parse_mode(mode_name), errors),
       "back-propagation step");
  show("Error of O0", errors[0], 0.17);
  show("Error of O1", errors[1], -0.74994);

  double updated_out[2][4] = {};
  for (size_t i = 0; i < 2; ++i) {
    for (size_t j = 0; j < 4; ++j) {
      must(rvn_network_get_weight(net.get(), 1, i, j, &updated_out[i][j]),
           "reading updated output weight");
      std::printf("W%zu%zu(out) = %.6f\n", i, j, updated_out[i][j]);
    }
  }
  // Bias-column weights of the hidden layer depend on the update mode, so
  // only the input-driven columns are shown.
  double updated_hid[3][2] = {};
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 2; ++j) {
      must(rvn_network_get_weight(net.get(), 0, i, j, &updated_hid[i][j]),
           "reading updated hidden weight");
      std::printf("W%zu%zu(hid) = %.6f\n", i, j, updated_hid[i][j]);
    }
  }
  goldens.push_back({"W00(out)", updated_out[0][0], 0.13227});
  goldens.push_back({"W01(out)", updated_out[0][1], 0.05346});
  goldens.push_back({"W10(out)", updated_out[1][0], 0.83176});
  goldens.push_back({"W00(hid)", updated_hid[0][0], 0.17});

  int mismatches = 0;
  for (const GoldenValue& g : goldens) {
    if (std::abs(g.actual - g.expected) > kDemoTolerance) {
      std::fprintf(stderr, "MISMATCH %s: expected %.6f, got %.6f\n",
                   g.label.c_str(), g.expected, g.actual);
      ++mismatches;
    }
  }
  return mismatches == 0 ? 0 : 1;
}

/* ---- train ------------------------------------------------------------ */

struct TrainOptions {
  std::string dataset;
  std::string weights;
  std::string out;
  std::string mode = "sequential";
  std::uint64_t seed = 0;
  double learning_rate = 0.25;
  double momentum = 0.0;
  double threshold = 0.01;
  std::uint64_t epochs = 10000;
  bool trace = false;
};

void print_epoch(uint64_t epoch_index, double epoch_max_abs_error, void*) {
  std::printf("epoch,%" PRIu64 ",max_abs_error,%.17g\n", epoch_index,
              epoch_max_abs_error);
}

int run_train(const TrainOptions& opt) {
  rvn_dataset* raw_data = nullptr;
  if (!check(rvn_dataset_load_csv(opt.dataset.c_str(), &raw_data),
             "loading dataset " + opt.dataset)) {
    return 1;
  }
  DatasetPtr data(raw_data);

  NetworkPtr net;
  if (!opt.weights.empty()) {
    rvn_network* raw_net = nullptr;
    if (!check(rvn_network_load(opt.weights.c_str(), &raw_net),
               "loading network " + opt.weights)) {
      return 1;
    }
    net.reset(raw_net);
  } else {
    size_t n_inputs = 0;
    size_t n_outputs = 0;
    must(rvn_dataset_dims(data.get(), &n_inputs, &n_outputs),
         "reading dataset dimensions");
    const size_t layers[3] = {n_inputs, 3, n_outputs};
    rvn_network* raw_net = nullptr;
    must(rvn_network_create_random(layers, 3, opt.seed, 1.0, &raw_net),
         "building random network");
    net.reset(raw_net);
  }

  rvn_training_config cfg;
  rvn_training_config_init(&cfg);
  cfg.learning_rate = opt.learning_rate;
  cfg.momentum = opt.momentum;
  cfg.error_threshold = opt.threshold;
  cfg.max_epochs = opt.epochs;
  cfg.mode = parse_mode(opt.mode);

  rvn_training_summary summary = {};
  if (!check(rvn_train(net.get(), data.get(), &cfg,
                       opt.trace ? &print_epoch : nullptr, nullptr, &summary),
             "training")) {
    return 1;
  }

  if (!opt.out.empty() &&
      !check(rvn_network_save(net.get(), opt.out.c_str()),
             "saving network " + opt.out)) {
    return 1;
  }
  std::printf("converged,%s,epochs,%" PRIu64 ",final_max_abs_error,%.17g\n",
              summary.converged ? "true" : "false", summary.epochs_run,
              summary.final_max_abs_error);
  return summary.converged ? 0 : 2;
}

/* ---- gradcheck --------------------------------------------------------- */

int run_gradcheck(std::uint64_t seed, std::uint64_t trials, double h) {
  if (trials == 0) {
    std::printf("warning: zero trials requested, nothing was checked\n");
    return 0;
  }
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  };

  double worst = 0.0;
  std::uint64_t worst_trial = 0;
  size_t worst_weight[3] = {0, 0, 0};
  for (std::uint64_t t = 0; t < trials; ++t) {
    const size_t layers[3] = {2, 3, 2};
    rvn_network* raw_net = nullptr;
    must(rvn_network_create_random(layers, 3, seed + t, 1.0, &raw_net),
         "building random network");
    NetworkPtr net(raw_net);
    const double input[2] = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    const double desired[2] = {uniform(0.0, 1.0), uniform(0.0, 1.0)};
    double deviation = 0.0;
    size_t weight[3] = {0, 0, 0};
    if (!check(rvn_gradient_check(net.get(), input, 2, desired, 2, h,
                                  &deviation, weight),
               "gradient check")) {
      return 1;
    }
    std::printf("trial,%" PRIu64 ",deviation,%.3e\n", t, deviation);
    if (deviation > worst) {
      worst = deviation;
      worst_trial = t;
      std::memcpy(worst_weight, weight, sizeof(worst_weight));
    }
  }
  std::printf("max_deviation,%.3e\n", worst);
  if (worst < 1e-6) return 0;
  std::fprintf(stderr,
               "gradient check failed: trial %" PRIu64
               ", weight (transition %zu, row %zu, col %zu) deviated by "
               "%.3e\n",
               worst_trial, worst_weight[0], worst_weight[1], worst_weight[2],
               worst);
  return 1;
}

/* ---- simulate ---------------------------------------------------------- */

struct SimulateOptions {
  std::string network;
  std::string scenario;
  std::string config;
  std::string csv;
  std::string svg;
};

int run_simulate(const SimulateOptions& opt) {
  rvn_network* raw_net = nullptr;
  if (!check(rvn_network_load(opt.network.c_str(), &raw_net),
             "loading network " + opt.network)) {
    return 1;
  }
  NetworkPtr net(raw_net);

  rvn_world* raw_world = nullptr;
  if (!check(rvn_world_load(opt.scenario.c_str(), &raw_world),
             "loading scenario " + opt.scenario)) {
    return 1;
  }
  WorldPtr world(raw_world);

  rvn_sim_config cfg;
  rvn_sim_config_init(&cfg);
  if (!opt.config.empty() &&
      !check(rvn_sim_config_load(opt.config.c_str(), &cfg),
             "loading config " + opt.config)) {
    return 1;
  }

  rvn_trajectory* raw_traj = nullptr;
  if (!check(rvn_simulate(net.get(), world.get(), &cfg, &raw_traj),
             "simulating")) {
    return 1;
  }
  TrajectoryPtr traj(raw_traj);

  if (!opt.csv.empty() &&
      !check(rvn_trajectory_export_csv(traj.get(), opt.csv.c_str()),
             "writing " + opt.csv)) {
    return 1;
  }
  if (!opt.svg.empty() &&
      !check(rvn_trajectory_export_svg(traj.get(), world.get(),
                                       opt.svg.c_str()),
             "writing " + opt.svg)) {
    return 1;
  }

  rvn_outcome outcome = RVN_OUTCOME_TIMEOUT;
  must(rvn_trajectory_outcome(traj.get(), &outcome), "reading outcome");
  size_t steps = 0;
  must(rvn_trajectory_size(traj.get(), &steps), "reading step count");
  double last[7] = {};
  must(rvn_trajectory_step(traj.get(), steps - 1, last), "reading final pose");

  const char* name = outcome == RVN_OUTCOME_REACHED_GOAL ? "ReachedGoal"
                     : outcome == RVN_OUTCOME_COLLISION  ? "Collision"
                                                         : "Timeout";
  std::printf("Outcome: %s\nSteps: %zu\nFinal pose: x=%.6f y=%.6f "
              "heading=%.6f\n",
              name, steps, last[0], last[1], last[2]);
  switch (outcome) {
    case RVN_OUTCOME_REACHED_GOAL: return 0;
    case RVN_OUTCOME_TIMEOUT: return 2;
    case RVN_OUTCOME_COLLISION: return 3;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feed-forward networks trained with momentum back-propagation "
               "driving a 2D rover path-planning simulator"};
  app.require_subcommand(1);
  const std::vector<std::string> modes = {"sequential", "simultaneous"};

  auto* demo = app.add_subcommand(
      "demo-paper", "Reproduce the worked single-step training example");
  std::string demo_mode = "sequential";
  demo->add_option("--mode", demo_mode, "Weight update ordering")
      ->check(CLI::IsMember(modes));

  auto* train = app.add_subcommand("train", "Train a network on a dataset");
  TrainOptions topt;
  train->add_option("--dataset", topt.dataset, "Dataset CSV")->required();
  auto* weights_opt =
      train->add_option("--weights", topt.weights, "Initial network JSON");
  auto* seed_opt = train->add_option(
      "--seed", topt.seed, "Draw random initial weights from this seed");
  weights_opt->excludes(seed_opt);
  seed_opt->excludes(weights_opt);
  train->add_option("--lr", topt.learning_rate, "Learning rate");
  train->add_option("--momentum", topt.momentum, "Momentum coefficient");
  train->add_option("--threshold", topt.threshold, "Max-abs error threshold");
  train->add_option("--epochs", topt.epochs, "Epoch cap");
  train->add_option("--mode", topt.mode, "Weight update ordering")
      ->check(CLI::IsMember(modes));
  train->add_flag("--trace", topt.trace, "Print one error line per epoch");
  train->add_option("--out", topt.out, "Write the trained network JSON here");

  auto* grad = app.add_subcommand(
      "gradcheck", "Compare analytic updates against finite differences");
  // Frees the short -h so the step size can be spelled --h.
  grad->set_help_flag("--help", "Print this help message and exit");
  std::uint64_t grad_seed = 1;
  std::uint64_t grad_trials = 20;
  double grad_h = 1e-5;
  grad->add_option("--seed", grad_seed, "Base seed for networks and patterns");
  grad->add_option("--trials", grad_trials, "Number of random trials");
  grad->add_option("--h", grad_h, "Finite-difference step");

  auto* sim = app.add_subcommand(
      "simulate", "Drive a trained network through a scenario");
  SimulateOptions sopt;
  sim->add_option("--network", sopt.network, "Network JSON")->required();
  sim->add_option("--scenario", sopt.scenario, "Scenario JSON")->required();
  sim->add_option("--config", sopt.config, "Simulation config JSON");
  sim->add_option("--csv", sopt.csv, "Write the trajectory CSV here");
  sim->add_option("--svg", sopt.svg, "Write the trajectory SVG here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (demo->parsed()) return run_demo_paper(demo_mode);
  if (train->parsed()) {
    if (topt.weights.empty() && seed_opt->count() == 0) {
      std::fprintf(stderr,
                   "error: train needs either --weights or --seed\n");
      return 1;
    }
    return run_train(topt);
  }
  if (grad->parsed()) return run_gradcheck(grad_seed, grad_trials, grad_h);
  if (sim->parsed()) return run_simulate(sopt);
  return 1;
}
