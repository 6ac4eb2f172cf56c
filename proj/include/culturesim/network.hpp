#pragma once

// Per-agent auto-associative network.
//
// Six input nodes and six output nodes stand for the body parts, in canonical
// order. Input->output weights are trainable. Seven hidden nodes (LEFT, RIGHT,
// ARM, LEG, SYMMETRY, OPPOSITE, MOVEMENT) are wired with fixed +/-1 weights to
// the body-part nodes they generalize, on both the input and the output side,
// and are read to bias invention.

#include <array>
#include <cstddef>

#include "culturesim/action.hpp"
#include "culturesim/random.hpp"

namespace culturesim {

enum class HiddenNode : std::uint8_t { Left, Right, Arm, Leg, Symmetry, Opposite, Movement };

inline constexpr std::size_t kHiddenNodes = 7;

struct NetworkParams {
  double beta = 0.15;
  double theta = 0.5;
  int max_epochs = 50;
  double learning_rate = 10.0;
  double tolerance = 0.05;
  double init_weight_range = 0.1;
};

struct Activations {
  std::array<double, kBodyParts> input{};
  std::array<double, kBodyParts> output{};
  std::array<double, kHiddenNodes> hidden{};

  double hidden_at(HiddenNode h) const { return hidden[static_cast<std::size_t>(h)]; }
};

struct TrainResult {
  int epochs = 0;
  bool converged = false;
};

struct InventionBias {
  double movement = 0.5;
  double symmetry = 0.5;
};

using WeightMatrix = std::array<std::array<double, kBodyParts>, kBodyParts>;
using FixedWeights = std::array<std::array<double, kBodyParts>, kHiddenNodes>;

/// Fixed hidden wiring: entry [h][j] links body part j to hidden node h (0 = no link).
const FixedWeights& fixed_weights();

/// Target output activation for a trit: 1/6, 1/2 or 5/6.
constexpr double target_activation(Trit t) { return 0.5 + t / 3.0; }

/// Thresholded read-out of an output activation: > 0.67 up, < 0.33 down, else neutral.
Trit decode_activation(double a);

class Network {
 public:
  Network(Rng& rng, const NetworkParams& params = {});
  explicit Network(const WeightMatrix& weights, const NetworkParams& params = {});

  /// Logistic activation with the slope and offset from the params.
  double squash(double net_input) const;

  /// Full forward pass: outputs from inputs, then the hidden read-out from
  /// both the input pattern and the signed output recall.
  Activations activate(const SubAction& input) const;

  /// Delta-rule training on one pattern until every output is within
  /// tolerance of its target or max_epochs is reached.
  TrainResult train(const SubAction& pattern);

  /// One delta-rule epoch; returns the weight change that was applied.
  WeightMatrix delta_step(const SubAction& pattern);

  /// Squared error 0.5 * sum (t_j - a_j)^2 of the outputs for `pattern`.
  double squared_error(const SubAction& pattern) const;

  /// Hidden-node error terms a(1-a) * sum_j delta_j w_hj, back-propagated from
  /// the output error terms through the fixed output-side links. No weight
  /// feeds a hidden node, so these never change the network.
  std::array<double, kHiddenNodes> hidden_error_terms(const SubAction& pattern) const;

  SubAction recall(const SubAction& input) const;

  /// SYMMETRY and MOVEMENT activations shifted so that zero net input maps to
  /// 0.5, clamped to [0, 1].
  InventionBias invention_bias(const Activations& act) const;
  InventionBias invention_bias(const SubAction& idea) const { return invention_bias(activate(idea)); }

  const WeightMatrix& weights() const { return weights_; }
  const NetworkParams& params() const { return params_; }

 private:
  std::array<double, kBodyParts> outputs(const SubAction& input) const;

  NetworkParams params_;
  WeightMatrix weights_{};  // [input i][output j]
};

}  // namespace culturesim
