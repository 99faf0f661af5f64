#include "rovernet/rovernet.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "core/backprop.hpp"
#include "core/errors.hpp"
#include "core/export.hpp"
#include "core/network.hpp"
#include "core/serialize.hpp"
#include "core/sim.hpp"
#include "core/trainer.hpp"

struct rvn_network {
  rovernet::Network impl;
};
struct rvn_delta {
  rovernet::DeltaState impl;
};
struct rvn_dataset {
  rovernet::Dataset impl;
};
struct rvn_trace {
  rovernet::ForwardTrace impl;
};
struct rvn_world {
  rovernet::World impl;
};
struct rvn_trajectory {
  rovernet::Trajectory impl;
};

namespace {

thread_local std::string t_last_error;

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

template <typename Fn>
rvn_status guarded(Fn&& fn) {
  try {
    fn();
    return RVN_OK;
  } catch (const rovernet::ShapeError& e) {
    t_last_error = e.what();
    return RVN_ERROR_SHAPE_MISMATCH;
  } catch (const rovernet::ParseError& e) {
    t_last_error = e.what();
    return RVN_ERROR_PARSE;
  } catch (const rovernet::IoError& e) {
    t_last_error = e.what();
    return RVN_ERROR_IO;
  } catch (const rovernet::NonFiniteError& e) {
    t_last_error = e.what();
    return RVN_ERROR_NONFINITE;
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return RVN_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RVN_ERROR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return RVN_ERROR_INTERNAL;
  }
}

rovernet::Topology make_topology(const size_t* layer_sizes, size_t n_layers) {
  require(layer_sizes != nullptr, "layer_sizes must not be NULL");
  rovernet::Topology t;
  t.layer_sizes.assign(layer_sizes, layer_sizes + n_layers);
  t.validate();
  return t;
}

rovernet::UpdateMode to_mode(rvn_update_mode mode) {
  switch (mode) {
    case RVN_UPDATE_SEQUENTIAL: return rovernet::UpdateMode::SequentialPaper;
    case RVN_UPDATE_SIMULTANEOUS: return rovernet::UpdateMode::Simultaneous;
  }
  throw std::invalid_argument("unknown update mode");
}

rovernet::SimConfig to_sim_config(const rvn_sim_config& c) {
  rovernet::SimConfig s;
  s.dt = c.dt;
  s.wheelbase = c.wheelbase;
  s.v_max = c.v_max;
  s.k_goal = c.k_goal;
  s.sense_range = c.sense_range;
  s.sensor_angle_left = c.sensor_angle_left;
  s.sensor_angle_right = c.sensor_angle_right;
  s.rover_radius = c.rover_radius;
  s.goal_tolerance = c.goal_tolerance;
  s.max_steps = static_cast<std::size_t>(c.max_steps);
  return s;
}

void from_sim_config(const rovernet::SimConfig& s, rvn_sim_config& c) {
  c.dt = s.dt;
  c.wheelbase = s.wheelbase;
  c.v_max = s.v_max;
  c.k_goal = s.k_goal;
  c.sense_range = s.sense_range;
  c.sensor_angle_left = s.sensor_angle_left;
  c.sensor_angle_right = s.sensor_angle_right;
  c.rover_radius = s.rover_radius;
  c.goal_tolerance = s.goal_tolerance;
  c.max_steps = s.max_steps;
}

const rovernet::WeightMatrix& weight_matrix_at(const rovernet::Network& net,
                                               size_t transition, size_t row,
                                               size_t col) {
  require(transition < net.weights.size(), "transition index out of range");
  const rovernet::WeightMatrix& w = net.weights[transition];
  require(row < w.rows(), "weight row out of range");
  require(col < w.cols(), "weight column out of range");
  return w;
}

}  // namespace

const char* rvn_status_name(rvn_status status) {
  switch (status) {
    case RVN_OK: return "RVN_OK";
    case RVN_ERROR_INVALID_ARGUMENT: return "RVN_ERROR_INVALID_ARGUMENT";
    case RVN_ERROR_SHAPE_MISMATCH: return "RVN_ERROR_SHAPE_MISMATCH";
    case RVN_ERROR_IO: return "RVN_ERROR_IO";
    case RVN_ERROR_PARSE: return "RVN_ERROR_PARSE";
    case RVN_ERROR_NONFINITE: return "RVN_ERROR_NONFINITE";
    case RVN_ERROR_INTERNAL: return "RVN_ERROR_INTERNAL";
  }
  return "RVN_ERROR_INTERNAL";
}

const char* rvn_last_error(void) { return t_last_error.c_str(); }

rvn_status rvn_network_create(const size_t* layer_sizes, size_t n_layers,
                              double bias_input, rvn_network** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new rvn_network{rovernet::Network::zeros(
        make_topology(layer_sizes, n_layers), bias_input)};
  });
}

rvn_status rvn_network_create_random(const size_t* layer_sizes,
                                     size_t n_layers, uint64_t seed,
                                     double bias_input, rvn_network** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new rvn_network{rovernet::random_network(
        make_topology(layer_sizes, n_layers), seed, bias_input)};
  });
}

rvn_status rvn_network_clone(const rvn_network* net, rvn_network** out) {
  return guarded([&] {
    require(net != nullptr && out != nullptr, "net and out must not be NULL");
    *out = new rvn_network{net->impl};
  });
}

void rvn_network_free(rvn_network* net) { delete net; }

rvn_status rvn_network_save(const rvn_network* net, const char* path) {
  return guarded([&] {
    require(net != nullptr && path != nullptr, "net and path must not be NULL");
    rovernet::save_network(net->impl, std::string(path));
  });
}

rvn_status rvn_network_load(const char* path, rvn_network** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    *out = new rvn_network{rovernet::load_network(std::string(path))};
  });
}

rvn_status rvn_network_layer_count(const rvn_network* net, size_t* out) {
  return guarded([&] {
    require(net != nullptr && out != nullptr, "net and out must not be NULL");
    *out = net->impl.topology.layer_sizes.size();
  });
}

rvn_status rvn_network_layer_size(const rvn_network* net, size_t layer,
                                  size_t* out) {
  return guarded([&] {
    require(net != nullptr && out != nullptr, "net and out must not be NULL");
    require(layer < net->impl.topology.layer_sizes.size(),
            "layer index out of range");
    *out = net->impl.topology.layer_sizes[layer];
  });
}

rvn_status rvn_network_get_weight(const rvn_network* net, size_t transition,
                                  size_t row, size_t col, double* out) {
  return guarded([&] {
    require(net != nullptr && out != nullptr, "net and out must not be NULL");
    *out = weight_matrix_at(net->impl, transition, row, col).at(row, col);
  });
}

rvn_status rvn_network_set_weight(rvn_network* net, size_t transition,
                                  size_t row, size_t col, double value) {
  return guarded([&] {
    require(net != nullptr, "net must not be NULL");
    if (!std::isfinite(value)) {
      throw rovernet::NonFiniteError("weights must be finite");
    }
    weight_matrix_at(net->impl, transition, row, col);
    net->impl.weights[transition].at(row, col) = value;
  });
}

rvn_status rvn_network_forward(const rvn_network* net, const double* input,
                               size_t n_input, double* output,
                               size_t n_output) {
  return guarded([&] {
    require(net != nullptr && input != nullptr && output != nullptr,
            "net, input and output must not be NULL");
    if (n_output != net->impl.topology.outputs()) {
      throw rovernet::ShapeError(
          "output buffer length does not match the output layer");
    }
    const rovernet::ForwardTrace trace =
        rovernet::forward(net->impl, std::span<const double>(input, n_input));
    const std::vector<double> out = trace.outputs();
    std::copy(out.begin(), out.end(), output);
  });
}

rvn_status rvn_trace_run(const rvn_network* net, const double* input,
                         size_t n_input, rvn_trace** out) {
  return guarded([&] {
    require(net != nullptr && input != nullptr && out != nullptr,
            "net, input and out must not be NULL");
    *out = new rvn_trace{rovernet::forward(
        net->impl, std::span<const double>(input, n_input))};
  });
}

rvn_status rvn_trace_net_input(const rvn_trace* trace, size_t layer,
                               size_t neuron, double* out) {
  return guarded([&] {
    require(trace != nullptr && out != nullptr,
            "trace and out must not be NULL");
    require(layer < trace->impl.net_inputs.size(), "layer index out of range");
    require(neuron < trace->impl.net_inputs[layer].size(),
            "neuron index out of range");
    *out = trace->impl.net_inputs[layer][neuron];
  });
}

rvn_status rvn_trace_activation(const rvn_trace* trace, size_t layer,
                                size_t neuron, double* out) {
  return guarded([&] {
    require(trace != nullptr && out != nullptr,
            "trace and out must not be NULL");
    require(layer < trace->impl.activations.size(), "layer index out of range");
    require(neuron < trace->impl.activations[layer].size(),
            "neuron index out of range");
    *out = trace->impl.activations[layer][neuron];
  });
}

void rvn_trace_free(rvn_trace* trace) { delete trace; }

rvn_status rvn_delta_create(const rvn_network* net, rvn_delta** out) {
  return guarded([&] {
    require(net != nullptr && out != nullptr, "net and out must not be NULL");
    *out = new rvn_delta{rovernet::DeltaState::zeros_for(net->impl)};
  });
}

rvn_status rvn_delta_reset(rvn_delta* delta) {
  return guarded([&] {
    require(delta != nullptr, "delta must not be NULL");
    delta->impl.reset();
  });
}

void rvn_delta_free(rvn_delta* delta) { delete delta; }

rvn_status rvn_backprop_step(rvn_network* net, rvn_delta* delta,
                             const double* input, size_t n_input,
                             const double* desired, size_t n_desired,
                             double learning_rate, double momentum,
                             rvn_update_mode mode, double* errors) {
  return guarded([&] {
    require(net != nullptr && delta != nullptr && input != nullptr &&
                desired != nullptr,
            "net, delta, input and desired must not be NULL");
    const rovernet::StepConfig cfg{learning_rate, momentum, to_mode(mode)};
    const rovernet::StepResult result = rovernet::backprop_step(
        net->impl, std::span<const double>(input, n_input),
        std::span<const double>(desired, n_desired), cfg, delta->impl);
    if (errors != nullptr) {
      std::copy(result.errors.begin(), result.errors.end(), errors);
    }
  });
}

rvn_status rvn_dataset_load_csv(const char* path, rvn_dataset** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    *out = new rvn_dataset{rovernet::load_dataset_csv(std::string(path))};
  });
}

rvn_status rvn_dataset_create(const double* inputs, size_t n_input,
                              const double* outputs, size_t n_output,
                              size_t n_patterns, rvn_dataset** out) {
  return guarded([&] {
    require(inputs != nullptr && outputs != nullptr && out != nullptr,
            "inputs, outputs and out must not be NULL");
    require(n_input > 0 && n_output > 0 && n_patterns > 0,
            "dataset dimensions must be positive");
    rovernet::Dataset data;
    data.patterns.reserve(n_patterns);
    for (size_t p = 0; p < n_patterns; ++p) {
      rovernet::Pattern pattern;
      pattern.input.assign(inputs + p * n_input, inputs + (p + 1) * n_input);
      pattern.desired.assign(outputs + p * n_output,
                             outputs + (p + 1) * n_output);
      data.patterns.push_back(std::move(pattern));
    }
    *out = new rvn_dataset{std::move(data)};
  });
}

rvn_status rvn_dataset_size(const rvn_dataset* data, size_t* out) {
  return guarded([&] {
    require(data != nullptr && out != nullptr, "data and out must not be NULL");
    *out = data->impl.patterns.size();
  });
}

rvn_status rvn_dataset_dims(const rvn_dataset* data, size_t* n_input,
                            size_t* n_output) {
  return guarded([&] {
    require(data != nullptr && n_input != nullptr && n_output != nullptr,
            "data, n_input and n_output must not be NULL");
    require(!data->impl.patterns.empty(), "dataset has no patterns");
    *n_input = data->impl.patterns.front().input.size();
    *n_output = data->impl.patterns.front().desired.size();
  });
}

void rvn_dataset_free(rvn_dataset* data) { delete data; }

void rvn_training_config_init(rvn_training_config* cfg) {
  if (cfg == nullptr) return;
  const rovernet::TrainingConfig defaults;
  cfg->learning_rate = defaults.learning_rate;
  cfg->momentum = defaults.momentum;
  cfg->error_threshold = defaults.error_threshold;
  cfg->max_epochs = defaults.max_epochs;
  cfg->mode = RVN_UPDATE_SEQUENTIAL;
}

namespace {

struct EpochShim {
  rvn_epoch_callback callback;
  void* user_data;
};

void epoch_trampoline(const rovernet::EpochReport& report, void* user_data) {
  const auto* shim = static_cast<const EpochShim*>(user_data);
  shim->callback(report.epoch_index, report.epoch_max_abs_error,
                 shim->user_data);
}

}  // namespace

rvn_status rvn_train(rvn_network* net, const rvn_dataset* data,
                     const rvn_training_config* cfg,
                     rvn_epoch_callback on_epoch, void* user_data,
                     rvn_training_summary* summary) {
  return guarded([&] {
    require(net != nullptr && data != nullptr && cfg != nullptr,
            "net, data and cfg must not be NULL");
    rovernet::TrainingConfig c;
    c.learning_rate = cfg->learning_rate;
    c.momentum = cfg->momentum;
    c.error_threshold = cfg->error_threshold;
    c.max_epochs = static_cast<std::size_t>(cfg->max_epochs);
    c.mode = to_mode(cfg->mode);

    EpochShim shim{on_epoch, user_data};
    rovernet::TrainingResult result =
        on_epoch != nullptr
            ? rovernet::train(net->impl, data->impl, c, epoch_trampoline,
                              &shim)
            : rovernet::train(net->impl, data->impl, c);
    const double final_error =
        rovernet::dataset_max_abs_error(result.final_network, data->impl);
    net->impl = std::move(result.final_network);
    if (summary != nullptr) {
      summary->converged = result.converged ? 1 : 0;
      summary->epochs_run = result.epochs_run;
      summary->final_max_abs_error = final_error;
    }
  });
}

rvn_status rvn_gradient_check(const rvn_network* net, const double* input,
                              size_t n_input, const double* desired,
                              size_t n_desired, double h,
                              double* max_relative_deviation,
                              size_t* worst_weight) {
  return guarded([&] {
    require(net != nullptr && input != nullptr && desired != nullptr &&
                max_relative_deviation != nullptr,
            "net, input, desired and out must not be NULL");
    rovernet::Pattern pattern;
    pattern.input.assign(input, input + n_input);
    pattern.desired.assign(desired, desired + n_desired);
    const rovernet::GradientCheckReport report =
        rovernet::gradient_check_report(net->impl, pattern, h);
    *max_relative_deviation = report.max_relative_deviation;
    if (worst_weight != nullptr) {
      worst_weight[0] = report.worst_transition;
      worst_weight[1] = report.worst_row;
      worst_weight[2] = report.worst_col;
    }
  });
}

void rvn_sim_config_init(rvn_sim_config* cfg) {
  if (cfg == nullptr) return;
  from_sim_config(rovernet::SimConfig{}, *cfg);
}

rvn_status rvn_sim_config_load(const char* path, rvn_sim_config* cfg) {
  return guarded([&] {
    require(path != nullptr && cfg != nullptr,
            "path and cfg must not be NULL");
    const rovernet::SimConfig loaded =
        rovernet::load_sim_config(std::string(path), to_sim_config(*cfg));
    from_sim_config(loaded, *cfg);
  });
}

rvn_status rvn_world_load(const char* path, rvn_world** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    *out = new rvn_world{rovernet::load_scenario(std::string(path))};
  });
}

void rvn_world_free(rvn_world* world) { delete world; }

rvn_status rvn_simulate(const rvn_network* net, const rvn_world* world,
                        const rvn_sim_config* cfg, rvn_trajectory** out) {
  return guarded([&] {
    require(net != nullptr && world != nullptr && cfg != nullptr &&
                out != nullptr,
            "net, world, cfg and out must not be NULL");
    *out = new rvn_trajectory{
        rovernet::simulate(net->impl, world->impl, to_sim_config(*cfg))};
  });
}

rvn_status rvn_trajectory_outcome(const rvn_trajectory* t, rvn_outcome* out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "t and out must not be NULL");
    switch (t->impl.outcome) {
      case rovernet::Outcome::ReachedGoal: *out = RVN_OUTCOME_REACHED_GOAL; break;
      case rovernet::Outcome::Collision: *out = RVN_OUTCOME_COLLISION; break;
      case rovernet::Outcome::Timeout: *out = RVN_OUTCOME_TIMEOUT; break;
    }
  });
}

rvn_status rvn_trajectory_size(const rvn_trajectory* t, size_t* out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "t and out must not be NULL");
    *out = t->impl.steps.size();
  });
}

rvn_status rvn_trajectory_step(const rvn_trajectory* t, size_t index,
                               double out_values[7]) {
  return guarded([&] {
    require(t != nullptr && out_values != nullptr,
            "t and out_values must not be NULL");
    require(index < t->impl.steps.size(), "step index out of range");
    const rovernet::TrajectoryStep& s = t->impl.steps[index];
    out_values[0] = s.pose.x;
    out_values[1] = s.pose.y;
    out_values[2] = s.pose.heading;
    out_values[3] = s.sensors.left;
    out_values[4] = s.sensors.right;
    out_values[5] = s.motors.v_left;
    out_values[6] = s.motors.v_right;
  });
}

rvn_status rvn_trajectory_export_csv(const rvn_trajectory* t,
                                     const char* path) {
  return guarded([&] {
    require(t != nullptr && path != nullptr, "t and path must not be NULL");
    rovernet::export_trajectory_csv(t->impl, std::string(path));
  });
}

rvn_status rvn_trajectory_export_svg(const rvn_trajectory* t,
                                     const rvn_world* world,
                                     const char* path) {
  return guarded([&] {
    require(t != nullptr && world != nullptr && path != nullptr,
            "t, world and path must not be NULL");
    rovernet::export_trajectory_svg(t->impl, world->impl, std::string(path));
  });
}

void rvn_trajectory_free(rvn_trajectory* t) { delete t; }
