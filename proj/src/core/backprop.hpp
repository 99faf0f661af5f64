#pragma once

#include "core/network.hpp"

namespace rovernet {

/// How one backward pass orders its weight updates.
///
/// SequentialPaper updates the output matrix in place first; the hidden-layer
/// pass then reads the already-updated downstream weights. Simultaneous
/// derives every delta from the pre-update weights and is plain gradient
/// descent (the form finite-difference checking validates).
enum class UpdateMode { SequentialPaper, Simultaneous };

/// Previous-step weight changes, one matrix per layer transition. Starts at
/// zero so the momentum term vanishes on the first update.
struct DeltaState {
  std::vector<WeightMatrix> deltas;

  static DeltaState zeros_for(const Network& net);
  void reset();
};

struct StepConfig {
  double learning_rate = 0.25;
  double momentum = 0.0;
  UpdateMode mode = UpdateMode::SequentialPaper;
};

/// Componentwise desired - actual.
std::vector<double> output_errors(std::span<const double> desired,
                                  std::span<const double> actual);

/// Half the summed squared output error, the objective the update rules
/// descend for sigmoid-hidden / linear-output networks.
double loss(std::span<const double> desired, std::span<const double> actual);

/// Output-layer update: per weight, delta = momentum * previous delta +
/// learning_rate * source activation * error of the destination neuron
/// (bias column uses the network's bias input as source). Applied in place;
/// the delta state is overwritten with the new deltas.
void update_output_weights(Network& net, const ForwardTrace& trace,
                           const std::vector<double>& errors,
                           double learning_rate, double momentum,
                           DeltaState& delta);

/// Hidden-layer update: per weight, the error signal is the destination
/// neuron's activation slope times the error sum propagated through the
/// downstream matrix — the already-updated one under SequentialPaper, the
/// pre-update one under Simultaneous.
void update_hidden_weights(Network& net, std::span<const double> input,
                           const ForwardTrace& trace,
                           const std::vector<double>& errors,
                           double learning_rate, double momentum,
                           DeltaState& delta, UpdateMode mode);

struct StepResult {
  ForwardTrace trace;
  std::vector<double> errors;
};

/// One full training step on a single pattern: forward pass, output errors,
/// then both weight updates in the order the mode prescribes.
StepResult backprop_step(Network& net, std::span<const double> input,
                         std::span<const double> desired,
                         const StepConfig& cfg, DeltaState& delta);

}  // namespace rovernet
