#include "core/trainer.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "core/errors.hpp"

namespace rovernet {
namespace {

// Applies one pattern's updates given an already computed forward trace,
// honoring the mode's update ordering.
void apply_pattern_update(Network& net, std::span<const double> input,
                          const ForwardTrace& trace,
                          const std::vector<double>& errors,
                          const TrainingConfig& cfg, DeltaState& delta) {
  if (cfg.mode == UpdateMode::SequentialPaper) {
    update_output_weights(net, trace, errors, cfg.learning_rate, cfg.momentum,
                          delta);
    update_hidden_weights(net, input, trace, errors, cfg.learning_rate,
                          cfg.momentum, delta, cfg.mode);
  } else {
    update_hidden_weights(net, input, trace, errors, cfg.learning_rate,
                          cfg.momentum, delta, cfg.mode);
    update_output_weights(net, trace, errors, cfg.learning_rate, cfg.momentum,
                          delta);
  }
}

}  // namespace

void Dataset::validate(std::size_t n_inputs, std::size_t n_outputs) const {
  if (patterns.empty()) {
    throw ShapeError("dataset has no patterns");
  }
  for (const Pattern& p : patterns) {
    if (p.input.size() != n_inputs || p.desired.size() != n_outputs) {
      throw ShapeError("pattern dimensions do not match the network");
    }
  }
}

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (!(momentum >= 0.0)) {
    throw std::invalid_argument("momentum must be non-negative");
  }
  if (!(error_threshold > 0.0)) {
    throw std::invalid_argument("error threshold must be positive");
  }
}

double max_abs_error(std::span<const double> errors) {
  double worst = 0.0;
  for (double e : errors) {
    worst = std::max(worst, std::abs(e));
  }
  return worst;
}

double dataset_max_abs_error(const Network& net, const Dataset& data) {
  double worst = 0.0;
  for (const Pattern& p : data.patterns) {
    const ForwardTrace trace = forward(net, p.input);
    worst = std::max(worst, max_abs_error(output_errors(p.desired,
                                                        trace.outputs())));
  }
  return worst;
}

EpochReport train_epoch(Network& net, const Dataset& data,
                        const TrainingConfig& cfg, DeltaState& delta) {
  data.validate(net.topology.inputs(), net.topology.outputs());
  EpochReport report;
  report.per_pattern_max_abs_error.reserve(data.patterns.size());
  for (const Pattern& p : data.patterns) {
    const ForwardTrace trace = forward(net, p.input);
    const std::vector<double> errors =
        output_errors(p.desired, trace.outputs());
    const double err = max_abs_error(errors);
    report.per_pattern_max_abs_error.push_back(err);
    if (err > cfg.error_threshold) {
      apply_pattern_update(net, p.input, trace, errors, cfg, delta);
    }
  }
  report.epoch_max_abs_error = dataset_max_abs_error(net, data);
  if (cfg.trace) {
    report.weights_snapshot = net.weights;
  }
  return report;
}

TrainingResult train(Network net, const Dataset& data,
                     const TrainingConfig& cfg) {
  return train(std::move(net), data, cfg, nullptr, nullptr);
}

TrainingResult train(Network net, const Dataset& data,
                     const TrainingConfig& cfg, EpochCallback on_epoch,
                     void* user_data) {
  cfg.validate();
  net.validate();
  data.validate(net.topology.inputs(), net.topology.outputs());

  TrainingResult result;
  if (cfg.max_epochs == 0) {
    result.converged = dataset_max_abs_error(net, data) <= cfg.error_threshold;
    result.final_network = std::move(net);
    return result;
  }

  DeltaState delta = DeltaState::zeros_for(net);
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    EpochReport report = train_epoch(net, data, cfg, delta);
    report.epoch_index = epoch;
    result.epochs_run = epoch;
    const bool done = report.epoch_max_abs_error <= cfg.error_threshold;
    if (on_epoch != nullptr) {
      on_epoch(report, user_data);
    }
    result.reports.push_back(std::move(report));
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.final_network = std::move(net);
  return result;
}

GradientCheckReport gradient_check_report(const Network& net,
                                          const Pattern& pattern, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  net.validate();
  if (pattern.input.size() != net.topology.inputs() ||
      pattern.desired.size() != net.topology.outputs()) {
    throw ShapeError("pattern dimensions do not match the network");
  }

  // Analytic weight change per unit learning rate.
  Network updated = net;
  DeltaState delta = DeltaState::zeros_for(net);
  const StepConfig step{1.0, 0.0, UpdateMode::Simultaneous};
  backprop_step(updated, pattern.input, pattern.desired, step, delta);

  Network probe = net;
  const auto loss_at = [&probe, &pattern]() {
    const double value =
        loss(pattern.desired, forward(probe, pattern.input).outputs());
    if (!std::isfinite(value)) {
      throw NonFiniteError("loss is not finite during gradient check");
    }
    return value;
  };

  GradientCheckReport report;
  for (std::size_t m = 0; m < net.weights.size(); ++m) {
    for (std::size_t i = 0; i < net.weights[m].rows(); ++i) {
      for (std::size_t j = 0; j < net.weights[m].cols(); ++j) {
        const double original = net.weights[m].at(i, j);
        probe.weights[m].at(i, j) = original + h;
        const double loss_plus = loss_at();
        probe.weights[m].at(i, j) = original - h;
        const double loss_minus = loss_at();
        probe.weights[m].at(i, j) = original;

        const double analytic =
            updated.weights[m].at(i, j) - net.weights[m].at(i, j);
        const double numeric = -(loss_plus - loss_minus) / (2.0 * h);
        const double denom =
            std::max({std::abs(analytic), std::abs(numeric), 1e-12});
        const double deviation = std::abs(analytic - numeric) / denom;
        if (deviation > report.max_relative_deviation) {
          report.max_relative_deviation = deviation;
          report.worst_transition = m;
          report.worst_row = i;
          report.worst_col = j;
        }
      }
    }
  }
  return report;
}

double gradient_check(const Network& net, const Pattern& pattern, double h) {
  return gradient_check_report(net, pattern, h).max_relative_deviation;
}

Network random_network(const Topology& topology, std::uint64_t seed,
                       double bias_input) {
  Network net = Network::zeros(topology, bias_input);
  std::mt19937_64 engine(seed);
  const auto uniform01 = [&engine]() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };
  for (WeightMatrix& w : net.weights) {
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) {
        w.at(i, j) = uniform01();
      }
    }
  }
  return net;
}

}  // namespace rovernet
