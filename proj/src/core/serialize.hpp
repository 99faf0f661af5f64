#pragma once

#include <iosfwd>
#include <string>

#include "core/network.hpp"
#include "core/sim.hpp"
#include "core/trainer.hpp"

namespace rovernet {

/// Network JSON: {"topology":[...], "activations":["sigmoid","linear"],
/// "bias_input":1.0, "weights":[matrix, ...]} where each matrix is an array
/// of rows (destination neurons) and each row ends with the bias weight.
/// Numbers carry 17 significant digits so a round-trip is bit-exact.
void save_network(const Network& net, std::ostream& out);
void save_network(const Network& net, const std::string& path);

Network load_network(std::istream& in);
Network load_network(const std::string& path);

/// Dataset CSV: header "in0,..,in{k-1},out0,..,out{m-1}" followed by one
/// numeric row per pattern.
Dataset load_dataset_csv(std::istream& in);
Dataset load_dataset_csv(const std::string& path);

/// Scenario JSON: {"start":[x,y], "goal":[x,y],
/// "obstacles":[{"c":[x,y],"r":radius}, ...]}. The start heading is the
/// bearing from start to goal.
World load_scenario(std::istream& in);
World load_scenario(const std::string& path);

/// Simulation config JSON: an object of overrides applied onto base. Keys:
/// dt, wheelbase, v_max, k_goal, sense_range, sensor_angles (array [left,
/// right]), rover_radius, goal_tolerance, max_steps. Unknown keys are
/// rejected.
SimConfig load_sim_config(std::istream& in, SimConfig base = SimConfig{});
SimConfig load_sim_config(const std::string& path,
                          SimConfig base = SimConfig{});

}  // namespace rovernet
