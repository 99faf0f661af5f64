#pragma once

#include <cstdint>

#include "core/network.hpp"
#include "core/sim.hpp"
#include "core/trainer.hpp"

namespace rovernet::testfix {

// Seed whose random 2-3-2 network, trained on the avoidance dataset, steers
// the demo scenario to the goal. Pinned so runs are reproducible.
inline constexpr std::uint64_t kAvoidanceSeed = 1;

// The worked-example network: 2-3-2, sigmoid hidden, linear output, bias +1.
inline Network demo_network() {
  Network net = Network::zeros(Topology{{2, 3, 2}});
  const double hidden[3][3] = {
      {0.17, 0.33, 0.10}, {0.30, 0.71, 0.21}, {0.15, 0.43, 0.69}};
  const double output[2][4] = {{0.11, 0.03, 0.52, 0.41},
                               {0.93, 0.14, 0.79, 0.66}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      net.weights[0].at(i, j) = hidden[i][j];
    }
  }
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      net.weights[1].at(i, j) = output[i][j];
    }
  }
  return net;
}

inline Pattern demo_pattern() { return {{0.0, 0.0}, {1.0, 1.0}}; }

inline Dataset avoidance_dataset() {
  Dataset data;
  data.patterns = {{{0.0, 0.0}, {1.0, 1.0}},
                   {{1.0, 0.0}, {1.0, 0.2}},
                   {{0.0, 1.0}, {0.2, 1.0}},
                   {{1.0, 1.0}, {0.2, 0.2}}};
  return data;
}

inline Network trained_avoidance_network(std::uint64_t seed = kAvoidanceSeed) {
  TrainingConfig cfg;
  cfg.momentum = 0.9;
  return train(random_network(Topology{{2, 3, 2}}, seed), avoidance_dataset(),
               cfg)
      .final_network;
}

// Start at the origin facing the goal on the x axis, one blocking obstacle.
inline World demo_world() {
  World world;
  world.obstacles = {{5.87, 0.0, 2.0}};
  world.start = {0.0, 0.0, 0.0};
  world.goal_x = 11.73;
  world.goal_y = 0.0;
  return world;
}

}  // namespace rovernet::testfix
