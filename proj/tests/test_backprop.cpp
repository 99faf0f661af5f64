#include <cmath>
#include <vector>

#include "core/backprop.hpp"
#include "core/errors.hpp"
#include "core/network.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace rovernet;
using testfix::demo_network;
using testfix::demo_pattern;

TEST_CASE("output_errors is desired minus actual") {
  const std::vector<double> desired = {1.0, 1.0};
  const std::vector<double> actual = {0.8306197498, 1.7516676238};
  const std::vector<double> e = output_errors(desired, actual);
  REQUIRE(e.size() == 2);
  CHECK(std::abs(e[0] - 0.17) < 5e-3);
  CHECK(std::abs(e[1] - (-0.74994)) < 5e-3);
  CHECK(std::abs(e[0] - 0.1693802502) < 1e-9);
  CHECK(std::abs(e[1] - (-0.7516676238)) < 1e-9);

  const std::vector<double> short_vec = {1.0};
  CHECK_THROWS_AS((void)output_errors(desired, short_vec), ShapeError);
}

TEST_CASE("loss is half the squared error sum") {
  CHECK(loss(std::vector<double>{2.0}, std::vector<double>{0.0}) == 2.0);
  CHECK(loss(std::vector<double>{0.3, -0.4}, std::vector<double>{0.3, -0.4}) ==
        0.0);

  const Network net = demo_network();
  const std::vector<double> out = forward(net, {0.0, 0.0}).outputs();
  CHECK(std::abs(loss(std::vector<double>{1.0, 1.0}, out) - 0.2968469429) <
        1e-8);

  CHECK_THROWS_AS(
      (void)loss(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
      ShapeError);
}

TEST_CASE("output weight update reproduces the worked values") {
  Network net = demo_network();
  DeltaState delta = DeltaState::zeros_for(net);
  const ForwardTrace trace = forward(net, {0.0, 0.0});
  const std::vector<double> errors =
      output_errors(std::vector<double>{1.0, 1.0}, trace.outputs());

  update_output_weights(net, trace, errors, 0.25, 0.0, delta);

  const WeightMatrix& w = net.weights[1];
  CHECK(std::abs(w.at(0, 0) - 0.13227) < 5e-3);
  CHECK(std::abs(w.at(0, 1) - 0.05346) < 5e-3);
  CHECK(std::abs(w.at(1, 0) - 0.83176) < 5e-3);

  CHECK(std::abs(w.at(0, 0) - 0.1322302765) < 1e-9);
  CHECK(std::abs(w.at(0, 1) - 0.0533875130) < 1e-9);
  CHECK(std::abs(w.at(0, 2) - 0.5482004112) < 1e-9);
  CHECK(std::abs(w.at(0, 3) - 0.4523450625) < 1e-9);
  CHECK(std::abs(w.at(1, 0) - 0.8313475354) < 1e-9);
  CHECK(std::abs(w.at(1, 1) - 0.0362120065) < 1e-9);
  CHECK(std::abs(w.at(1, 2) - 0.6648535557) < 1e-9);
  CHECK(std::abs(w.at(1, 3) - 0.4720830940) < 1e-9);

  // The recorded deltas are the applied changes.
  CHECK(std::abs(delta.deltas[1].at(0, 0) - (0.1322302765 - 0.11)) < 1e-9);
  CHECK(std::abs(delta.deltas[1].at(1, 3) - (0.4720830940 - 0.66)) < 1e-9);
}

TEST_CASE("zero output error leaves weights and deltas untouched") {
  Network net = Network::zeros(Topology{{2, 3, 2}});
  const Network before = net;
  DeltaState delta = DeltaState::zeros_for(net);
  StepConfig cfg;
  const StepResult r =
      backprop_step(net, std::vector<double>{0.7, -0.2},
                    std::vector<double>{0.0, 0.0}, cfg, delta);
  CHECK(r.errors[0] == 0.0);
  CHECK(r.errors[1] == 0.0);
  CHECK(net.weights[0] == before.weights[0]);
  CHECK(net.weights[1] == before.weights[1]);
  for (const WeightMatrix& d : delta.deltas) {
    for (double v : d.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("full step keeps the zero-input hidden weights fixed") {
  Network net = demo_network();
  DeltaState delta = DeltaState::zeros_for(net);
  StepConfig cfg;
  backprop_step(net, demo_pattern().input, demo_pattern().desired, cfg, delta);

  // Zero inputs mean every non-bias hidden change is zero.
  CHECK(net.weights[0].at(0, 0) == 0.17);
  CHECK(net.weights[0].at(0, 1) == 0.33);
  CHECK(net.weights[0].at(1, 0) == 0.30);
  CHECK(net.weights[0].at(2, 1) == 0.43);

  // The bias column moves by the propagated error signal.
  CHECK(std::abs(net.weights[0].at(0, 2) - 0.0624377446) < 1e-9);
  CHECK(std::abs(net.weights[0].at(1, 2) - 0.2088763957) < 1e-9);
  CHECK(std::abs(net.weights[0].at(2, 2) - 0.6673710692) < 1e-9);
}

TEST_CASE("update orderings agree except on the hidden bias column") {
  Network seq = demo_network();
  Network sim = demo_network();
  DeltaState d_seq = DeltaState::zeros_for(seq);
  DeltaState d_sim = DeltaState::zeros_for(sim);
  StepConfig cfg_seq;
  StepConfig cfg_sim;
  cfg_sim.mode = UpdateMode::Simultaneous;

  backprop_step(seq, demo_pattern().input, demo_pattern().desired, cfg_seq,
                d_seq);
  backprop_step(sim, demo_pattern().input, demo_pattern().desired, cfg_sim,
                d_sim);

  // The output matrix only needs the forward trace and the raw errors, so
  // both orderings produce the same values there.
  CHECK(seq.weights[1] == sim.weights[1]);

  // Zero inputs keep the non-bias hidden entries equal too.
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(seq.weights[0].at(i, j) == sim.weights[0].at(i, j));
    }
  }

  // The hidden bias column reads the downstream weights, which one ordering
  // has already changed, so the two must differ.
  CHECK(seq.weights[0].at(0, 2) != sim.weights[0].at(0, 2));
  CHECK(std::abs(sim.weights[0].at(0, 2) - 0.0575799471) < 1e-9);
}

TEST_CASE("momentum term adds the previous delta") {
  Network net = demo_network();
  DeltaState delta = DeltaState::zeros_for(net);
  StepConfig cfg;
  cfg.momentum = 0.9;

  const Network w0 = net;
  backprop_step(net, demo_pattern().input, demo_pattern().desired, cfg, delta);
  const Network w1 = net;

  // Capture the first step's output-layer change by differencing.
  WeightMatrix dw1(w1.weights[1].rows(), w1.weights[1].cols() - 1);
  for (std::size_t i = 0; i < dw1.rows(); ++i) {
    for (std::size_t j = 0; j < dw1.cols(); ++j) {
      dw1.at(i, j) = w1.weights[1].at(i, j) - w0.weights[1].at(i, j);
    }
  }

  const ForwardTrace trace2 = forward(net, demo_pattern().input);
  const std::vector<double> e2 =
      output_errors(demo_pattern().desired, trace2.outputs());
  backprop_step(net, demo_pattern().input, demo_pattern().desired, cfg, delta);

  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double source = j == 3 ? 1.0 : trace2.activations[0][j];
      const double expected = 0.9 * dw1.at(i, j) + 0.25 * source * e2[i];
      const double applied = net.weights[1].at(i, j) - w1.weights[1].at(i, j);
      CHECK(std::abs(applied - expected) < 1e-12);
    }
  }
}

TEST_CASE("zero momentum ignores the stored deltas") {
  Network a = demo_network();
  Network b = demo_network();
  DeltaState da = DeltaState::zeros_for(a);
  DeltaState db = DeltaState::zeros_for(b);
  for (WeightMatrix& m : db.deltas) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        m.at(i, j) = 123.456;
      }
    }
  }
  StepConfig cfg;
  backprop_step(a, demo_pattern().input, demo_pattern().desired, cfg, da);
  backprop_step(b, demo_pattern().input, demo_pattern().desired, cfg, db);
  CHECK(a.weights[0] == b.weights[0]);
  CHECK(a.weights[1] == b.weights[1]);
}

TEST_CASE("delta state reset zeroes every entry") {
  Network net = demo_network();
  DeltaState delta = DeltaState::zeros_for(net);
  StepConfig cfg;
  backprop_step(net, demo_pattern().input, demo_pattern().desired, cfg, delta);
  delta.reset();
  for (const WeightMatrix& d : delta.deltas) {
    REQUIRE(d.rows() > 0);
    for (double v : d.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("update rejects mismatched shapes") {
  Network net = demo_network();
  const ForwardTrace trace = forward(net, {0.0, 0.0});

  DeltaState wrong = DeltaState::zeros_for(Network::zeros(Topology{{2, 4, 2}}));
  CHECK_THROWS_AS(
      update_output_weights(net, trace, {0.1, 0.2}, 0.25, 0.0, wrong),
      ShapeError);

  DeltaState delta = DeltaState::zeros_for(net);
  CHECK_THROWS_AS(update_output_weights(net, trace, {0.1}, 0.25, 0.0, delta),
                  ShapeError);
  CHECK_THROWS_AS(update_hidden_weights(net, std::vector<double>{1.0}, trace,
                                        {0.1, 0.2}, 0.25, 0.0, delta,
                                        UpdateMode::SequentialPaper),
                  ShapeError);
}

TEST_CASE("non-finite weight updates throw") {
  Network net = demo_network();
  net.weights[1].at(0, 0) = 1e308;
  DeltaState delta = DeltaState::zeros_for(net);
  StepConfig cfg;
  CHECK_THROWS_AS(backprop_step(net, demo_pattern().input,
                                demo_pattern().desired, cfg, delta),
                  NonFiniteError);
}
