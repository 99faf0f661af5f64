#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/backprop.hpp"
#include "core/network.hpp"

namespace rovernet {

/// One supervised example: an input vector and the desired output vector.
struct Pattern {
  std::vector<double> input;
  std::vector<double> desired;
};

/// Ordered list of training patterns, swept sequentially each epoch.
struct Dataset {
  std::vector<Pattern> patterns;

  /// Throws ShapeError unless the dataset is non-empty and every pattern
  /// has the given input/output dimensions.
  void validate(std::size_t n_inputs, std::size_t n_outputs) const;
};

struct TrainingConfig {
  double learning_rate = 0.25;
  double momentum = 0.0;
  double bias_input = 1.0;  // fed to fresh networks built for training
  double error_threshold = 0.01;
  std::size_t max_epochs = 10000;
  UpdateMode mode = UpdateMode::SequentialPaper;
  bool trace = false;
  std::uint64_t seed = 0;  // weight initialization for fresh networks

  /// Throws std::invalid_argument on a non-positive learning rate or
  /// threshold, or a negative momentum. max_epochs 0 is allowed and means
  /// "evaluate only".
  void validate() const;
};

struct EpochReport {
  std::size_t epoch_index = 0;  // 1-based
  // Max-abs output error of each pattern as visited, before its update.
  std::vector<double> per_pattern_max_abs_error;
  // Re-test over all patterns after the epoch's updates.
  double epoch_max_abs_error = 0.0;
  std::optional<std::vector<WeightMatrix>> weights_snapshot;
};

struct TrainingResult {
  Network final_network;
  std::vector<EpochReport> reports;
  bool converged = false;
  std::size_t epochs_run = 0;
};

/// Largest absolute entry, 0 for an empty vector.
double max_abs_error(std::span<const double> errors);

/// Max-abs output error over every pattern with the current weights.
double dataset_max_abs_error(const Network& net, const Dataset& data);

/// Sweeps the dataset once in order. A pattern triggers a weight update only
/// when its max-abs error exceeds cfg.error_threshold; otherwise weights and
/// deltas are left untouched for that pattern. The delta state carries across
/// patterns (and across epochs when the caller reuses it).
EpochReport train_epoch(Network& net, const Dataset& data,
                        const TrainingConfig& cfg, DeltaState& delta);

/// Runs epochs until the epoch-end re-test error is within threshold
/// (converged) or max_epochs is exhausted (not converged, reported via the
/// flag rather than an error). max_epochs 0 returns immediately with
/// converged reflecting the initial error.
TrainingResult train(Network net, const Dataset& data,
                     const TrainingConfig& cfg);

using EpochCallback = void (*)(const EpochReport&, void*);

/// As train(), additionally invoking on_epoch after every completed epoch.
TrainingResult train(Network net, const Dataset& data,
                     const TrainingConfig& cfg, EpochCallback on_epoch,
                     void* user_data);

struct GradientCheckReport {
  double max_relative_deviation = 0.0;
  // Location of the worst weight as (transition, row, col).
  std::size_t worst_transition = 0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
};

/// Compares the analytic weight change per unit learning rate (Simultaneous
/// mode, zero momentum) against central finite differences of the loss
/// 0.5*sum((desired - actual)^2). Reports the maximum relative deviation,
/// with the denominator guarded by max(|analytic|, |numeric|, 1e-12), and
/// which weight attained it.
GradientCheckReport gradient_check_report(const Network& net,
                                          const Pattern& pattern,
                                          double h = 1e-5);

/// The maximum relative deviation alone.
double gradient_check(const Network& net, const Pattern& pattern,
                      double h = 1e-5);

/// Fresh network with the given topology, sigmoid hidden and linear output
/// activations, and every weight drawn uniformly from [0, 1) using a seeded
/// generator. Deterministic across platforms.
Network random_network(const Topology& topology, std::uint64_t seed,
                       double bias_input = 1.0);

}  // namespace rovernet
