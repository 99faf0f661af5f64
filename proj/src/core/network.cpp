#include "core/network.hpp"

#include <cmath>
#include <string>

namespace rovernet {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double activate(Activation kind, double v) {
  return kind == Activation::Sigmoid ? sigmoid(v) : v;
}

double activation_slope(Activation kind, double out) {
  return kind == Activation::Sigmoid ? out * (1.0 - out) : 1.0;
}

void Topology::validate() const {
  if (layer_sizes.size() < 2) {
    throw ShapeError("topology needs at least an input and an output layer");
  }
  for (std::size_t n : layer_sizes) {
    if (n == 0) throw ShapeError("every layer needs at least one neuron");
  }
}

bool WeightMatrix::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Network Network::zeros(Topology t, double bias_input) {
  t.validate();
  Network net;
  net.topology = std::move(t);
  net.bias_input = bias_input;
  const auto& sizes = net.topology.layer_sizes;
  net.weights.reserve(sizes.size() - 1);
  for (std::size_t m = 0; m + 1 < sizes.size(); ++m) {
    net.weights.emplace_back(sizes[m + 1], sizes[m]);
  }
  return net;
}

void Network::validate() const {
  topology.validate();
  if (weights.size() != topology.transitions()) {
    throw ShapeError("expected one weight matrix per layer transition");
  }
  for (std::size_t m = 0; m < weights.size(); ++m) {
    if (weights[m].rows() != topology.layer_sizes[m + 1] ||
        weights[m].cols() != topology.layer_sizes[m] + 1) {
      throw ShapeError("weight matrix " + std::to_string(m) +
                       " does not match the topology");
    }
  }
}

double neuron_net_input(std::span<const double> inputs,
                        std::span<const double> weight_row, double bias_input) {
  if (weight_row.size() != inputs.size() + 1) {
    throw ShapeError("weight row length must be input length + 1");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    sum += inputs[i] * weight_row[i];
  }
  sum += bias_input * weight_row.back();
  return sum;
}

ForwardTrace forward(const Network& net, std::span<const double> input) {
  if (input.size() != net.topology.inputs()) {
    throw ShapeError("input length does not match the input layer");
  }
  ForwardTrace trace;
  trace.inputs.assign(input.begin(), input.end());
  trace.net_inputs.reserve(net.weights.size());
  trace.activations.reserve(net.weights.size());

  std::span<const double> prev = trace.inputs;
  for (std::size_t m = 0; m < net.weights.size(); ++m) {
    const WeightMatrix& w = net.weights[m];
    const Activation kind = net.transition_activation(m);
    std::vector<double> nets(w.rows());
    std::vector<double> outs(w.rows());
    for (std::size_t j = 0; j < w.rows(); ++j) {
      nets[j] = neuron_net_input(prev, w.row(j), net.bias_input);
      outs[j] = activate(kind, nets[j]);
    }
    trace.net_inputs.push_back(std::move(nets));
    trace.activations.push_back(std::move(outs));
    prev = trace.activations.back();
  }
  return trace;
}

}  // namespace rovernet
