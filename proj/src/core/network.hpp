#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "core/errors.hpp"

namespace rovernet {

enum class Activation { Sigmoid, Linear };

/// Logistic function 1/(1+e^-t). Saturates to 0/1 for large |t|.
double sigmoid(double t);

double activate(Activation kind, double v);

/// Derivative of the activation expressed through its output value:
/// out*(1-out) for Sigmoid, 1 for Linear.
double activation_slope(Activation kind, double out);

/// Neuron counts per layer, bias units excluded. At least two layers,
/// every layer non-empty.
struct Topology {
  std::vector<std::size_t> layer_sizes;

  void validate() const;
  std::size_t inputs() const { return layer_sizes.front(); }
  std::size_t outputs() const { return layer_sizes.back(); }
  std::size_t transitions() const { return layer_sizes.size() - 1; }
};

/// Dense weight block for one layer transition. Rows index destination
/// neurons; columns index source neurons, with the trailing column holding
/// the weight on the constant bias input.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t source_count)
      : rows_(rows), cols_(source_count + 1), values_(rows_ * cols_, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  const std::vector<double>& values() const { return values_; }
  bool all_finite() const;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Feed-forward network: one weight matrix per layer transition, a shared
/// activation for the hidden layers, another for the output layer, and the
/// constant value fed to every bias weight.
struct Network {
  Topology topology;
  std::vector<WeightMatrix> weights;
  Activation hidden_activation = Activation::Sigmoid;
  Activation output_activation = Activation::Linear;
  double bias_input = 1.0;

  /// All-zero weights for the given topology.
  static Network zeros(Topology t, double bias_input = 1.0);

  Activation transition_activation(std::size_t m) const {
    return m + 1 == weights.size() ? output_activation : hidden_activation;
  }

  /// Checks weight matrix shapes against the topology.
  void validate() const;
};

/// Everything a forward pass computed, per non-input layer.
struct ForwardTrace {
  std::vector<double> inputs;
  std::vector<std::vector<double>> net_inputs;
  std::vector<std::vector<double>> activations;

  const std::vector<double>& outputs() const { return activations.back(); }
};

/// Weighted sum feeding one neuron: the inputs dotted with the leading
/// entries of weight_row, plus bias_input times its trailing entry.
double neuron_net_input(std::span<const double> inputs,
                        std::span<const double> weight_row, double bias_input);

/// Deterministic forward pass through every layer.
ForwardTrace forward(const Network& net, std::span<const double> input);

inline ForwardTrace forward(const Network& net,
                            std::initializer_list<double> input) {
  return forward(net, std::span<const double>(input.begin(), input.size()));
}

}  // namespace rovernet
