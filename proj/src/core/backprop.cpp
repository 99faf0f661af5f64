#include "core/backprop.hpp"

#include <cmath>

namespace rovernet {
namespace {

std::span<const double> source_layer(const ForwardTrace& trace, std::size_t m) {
  return m == 0 ? std::span<const double>(trace.inputs)
                : std::span<const double>(trace.activations[m - 1]);
}

void check_shapes(const Network& net, const DeltaState& delta) {
  if (delta.deltas.size() != net.weights.size()) {
    throw ShapeError("delta state does not match the network");
  }
  for (std::size_t m = 0; m < net.weights.size(); ++m) {
    if (delta.deltas[m].rows() != net.weights[m].rows() ||
        delta.deltas[m].cols() != net.weights[m].cols()) {
      throw ShapeError("delta matrix shape does not match its weight matrix");
    }
  }
}

// W += momentum * previous delta + lr * source * signal, per entry.
void apply_layer_update(WeightMatrix& w, WeightMatrix& d,
                        const std::vector<double>& signal,
                        std::span<const double> sources, double bias_input,
                        double learning_rate, double momentum) {
  if (signal.size() != w.rows() || sources.size() + 1 != w.cols()) {
    throw ShapeError("update signal does not match the weight matrix");
  }
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      const double source = j == sources.size() ? bias_input : sources[j];
      const double dw = momentum * d.at(i, j) + learning_rate * source * signal[i];
      w.at(i, j) += dw;
      d.at(i, j) = dw;
    }
  }
  if (!w.all_finite() || !d.all_finite()) {
    throw NonFiniteError("weight update produced a non-finite value");
  }
}

// Error signal for the source layer of next_weights: activation slope times
// the signal sum pulled back through the non-bias columns.
std::vector<double> backward_signal(const WeightMatrix& next_weights,
                                    const std::vector<double>& next_signal,
                                    const std::vector<double>& layer_out,
                                    Activation kind) {
  std::vector<double> signal(layer_out.size());
  for (std::size_t j = 0; j < layer_out.size(); ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < next_signal.size(); ++k) {
      sum += next_signal[k] * next_weights.at(k, j);
    }
    signal[j] = activation_slope(kind, layer_out[j]) * sum;
  }
  return signal;
}

}  // namespace

DeltaState DeltaState::zeros_for(const Network& net) {
  DeltaState d;
  d.deltas.reserve(net.weights.size());
  for (const WeightMatrix& w : net.weights) {
    d.deltas.emplace_back(w.rows(), w.cols() - 1);
  }
  return d;
}

void DeltaState::reset() {
  for (WeightMatrix& m : deltas) {
    m = WeightMatrix(m.rows(), m.cols() - 1);
  }
}

std::vector<double> output_errors(std::span<const double> desired,
                                  std::span<const double> actual) {
  if (desired.size() != actual.size()) {
    throw ShapeError("desired and actual output lengths differ");
  }
  std::vector<double> errors(desired.size());
  for (std::size_t k = 0; k < desired.size(); ++k) {
    errors[k] = desired[k] - actual[k];
  }
  return errors;
}

double loss(std::span<const double> desired, std::span<const double> actual) {
  if (desired.size() != actual.size()) {
    throw ShapeError("desired and actual output lengths differ");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < desired.size(); ++k) {
    const double e = desired[k] - actual[k];
    sum += e * e;
  }
  return 0.5 * sum;
}

void update_output_weights(Network& net, const ForwardTrace& trace,
                           const std::vector<double>& errors,
                           double learning_rate, double momentum,
                           DeltaState& delta) {
  check_shapes(net, delta);
  const std::size_t m = net.weights.size() - 1;
  apply_layer_update(net.weights[m], delta.deltas[m], errors,
                     source_layer(trace, m), net.bias_input, learning_rate,
                     momentum);
}

void update_hidden_weights(Network& net, std::span<const double> input,
                           const ForwardTrace& trace,
                           const std::vector<double>& errors,
                           double learning_rate, double momentum,
                           DeltaState& delta, UpdateMode mode) {
  check_shapes(net, delta);
  if (input.size() != net.topology.inputs()) {
    throw ShapeError("input length does not match the input layer");
  }
  const std::size_t transitions = net.weights.size();
  if (transitions < 2) return;  // no hidden layers

  if (mode == UpdateMode::SequentialPaper) {
    std::vector<double> signal = errors;
    for (std::size_t m = transitions - 1; m-- > 0;) {
      signal = backward_signal(net.weights[m + 1], signal,
                               trace.activations[m], net.hidden_activation);
      apply_layer_update(net.weights[m], delta.deltas[m], signal,
                         source_layer(trace, m), net.bias_input, learning_rate,
                         momentum);
    }
    return;
  }

  // Simultaneous: derive every signal from the pre-update weights, then apply.
  std::vector<std::vector<double>> signals(transitions - 1);
  std::vector<double> signal = errors;
  for (std::size_t m = transitions - 1; m-- > 0;) {
    signal = backward_signal(net.weights[m + 1], signal, trace.activations[m],
                             net.hidden_activation);
    signals[m] = signal;
  }
  for (std::size_t m = 0; m + 1 < transitions; ++m) {
    apply_layer_update(net.weights[m], delta.deltas[m], signals[m],
                       source_layer(trace, m), net.bias_input, learning_rate,
                       momentum);
  }
}

StepResult backprop_step(Network& net, std::span<const double> input,
                         std::span<const double> desired,
                         const StepConfig& cfg, DeltaState& delta) {
  StepResult result;
  result.trace = forward(net, input);
  result.errors = output_errors(desired, result.trace.outputs());
  if (cfg.mode == UpdateMode::SequentialPaper) {
    update_output_weights(net, result.trace, result.errors, cfg.learning_rate,
                          cfg.momentum, delta);
    update_hidden_weights(net, input, result.trace, result.errors,
                          cfg.learning_rate, cfg.momentum, delta, cfg.mode);
  } else {
    update_hidden_weights(net, input, result.trace, result.errors,
                          cfg.learning_rate, cfg.momentum, delta, cfg.mode);
    update_output_weights(net, result.trace, result.errors, cfg.learning_rate,
                          cfg.momentum, delta);
  }
  return result;
}

}  // namespace rovernet
