#include "culturesim/network.hpp"

#include <algorithm>
#include <cmath>

namespace culturesim {

namespace {

constexpr std::size_t hd = index_of(BodyPart::Head);
constexpr std::size_t la = index_of(BodyPart::LeftArm);
constexpr std::size_t ra = index_of(BodyPart::RightArm);
constexpr std::size_t ll = index_of(BodyPart::LeftLeg);
constexpr std::size_t rl = index_of(BodyPart::RightLeg);
constexpr std::size_t hp = index_of(BodyPart::Hips);

constexpr std::size_t hidden_index(HiddenNode h) { return static_cast<std::size_t>(h); }

FixedWeights build_fixed_weights() {
  FixedWeights f{};
  auto link = [&f](HiddenNode h, std::size_t part, double w) { f[hidden_index(h)][part] = w; };
  link(HiddenNode::Left, la, 1.0);
  link(HiddenNode::Left, ll, 1.0);
  link(HiddenNode::Right, ra, 1.0);
  link(HiddenNode::Right, rl, 1.0);
  link(HiddenNode::Arm, la, 1.0);
  link(HiddenNode::Arm, ra, 1.0);
  link(HiddenNode::Leg, ll, 1.0);
  link(HiddenNode::Leg, rl, 1.0);
  // Same-direction limb pairs push SYMMETRY up; OPPOSITE measures left/right disagreement.
  for (auto part : {la, ra, ll, rl}) link(HiddenNode::Symmetry, part, 1.0);
  link(HiddenNode::Opposite, la, 1.0);
  link(HiddenNode::Opposite, ra, -1.0);
  link(HiddenNode::Opposite, ll, 1.0);
  link(HiddenNode::Opposite, rl, -1.0);
  for (auto part : {hd, la, ra, ll, rl, hp}) link(HiddenNode::Movement, part, 1.0);
  return f;
}

// Signed value an output node presents to the hidden layer: its continuous
// trit estimate.
double signed_recall(double a) { return std::clamp(3.0 * (a - 0.5), -1.0, 1.0); }

}  // namespace

const FixedWeights& fixed_weights() {
  static const FixedWeights f = build_fixed_weights();
  return f;
}

Trit decode_activation(double a) {
  if (a > 0.67) return 1;
  if (a < 0.33) return -1;
  return 0;
}

Network::Network(Rng& rng, const NetworkParams& params) : params_(params) {
  for (auto& row : weights_)
    for (auto& w : row) w = rng.uniform(-params_.init_weight_range, params_.init_weight_range);
}

Network::Network(const WeightMatrix& weights, const NetworkParams& params)
    : params_(params), weights_(weights) {}

double Network::squash(double net_input) const {
  return 1.0 / (1.0 + std::exp(-params_.beta * (net_input + params_.theta)));
}

std::array<double, kBodyParts> Network::outputs(const SubAction& input) const {
  std::array<double, kBodyParts> out{};
  for (std::size_t j = 0; j < kBodyParts; ++j) {
    double net = 0.0;
    for (std::size_t i = 0; i < kBodyParts; ++i) net += weights_[i][j] * input[i];
    out[j] = squash(net);
  }
  return out;
}

Activations Network::activate(const SubAction& input) const {
  Activations act;
  for (std::size_t i = 0; i < kBodyParts; ++i) act.input[i] = input[i];
  act.output = outputs(input);

  const auto& fixed = fixed_weights();
  for (std::size_t h = 0; h < kHiddenNodes; ++h) {
    const bool movement = h == hidden_index(HiddenNode::Movement);
    double net = 0.0;
    for (std::size_t j = 0; j < kBodyParts; ++j) {
      if (fixed[h][j] == 0.0) continue;
      double from_input = act.input[j];
      double from_output = signed_recall(act.output[j]);
      if (movement) {
        // movement has no direction: the least you can move is not at all
        from_input = std::abs(from_input);
        from_output = std::abs(from_output);
      }
      net += fixed[h][j] * (from_input + from_output);
    }
    act.hidden[h] = squash(net);
  }
  return act;
}

WeightMatrix Network::delta_step(const SubAction& pattern) {
  const auto out = outputs(pattern);
  WeightMatrix change{};
  for (std::size_t j = 0; j < kBodyParts; ++j) {
    const double a = out[j];
    const double delta = (target_activation(pattern[j]) - a) * a * (1.0 - a);
    for (std::size_t i = 0; i < kBodyParts; ++i) {
      change[i][j] = params_.learning_rate * delta * pattern[i];
      weights_[i][j] += change[i][j];
    }
  }
  return change;
}

TrainResult Network::train(const SubAction& pattern) {
  for (int epoch = 0;; ++epoch) {
    const auto out = outputs(pattern);
    double worst = 0.0;
    for (std::size_t j = 0; j < kBodyParts; ++j)
      worst = std::max(worst, std::abs(target_activation(pattern[j]) - out[j]));
    if (worst < params_.tolerance) return {epoch, true};
    if (epoch >= params_.max_epochs) return {epoch, false};
    delta_step(pattern);
  }
}

double Network::squared_error(const SubAction& pattern) const {
  const auto out = outputs(pattern);
  double e = 0.0;
  for (std::size_t j = 0; j < kBodyParts; ++j) {
    const double d = target_activation(pattern[j]) - out[j];
    e += 0.5 * d * d;
  }
  return e;
}

std::array<double, kHiddenNodes> Network::hidden_error_terms(const SubAction& pattern) const {
  const auto act = activate(pattern);
  std::array<double, kBodyParts> out_delta{};
  for (std::size_t j = 0; j < kBodyParts; ++j) {
    const double a = act.output[j];
    out_delta[j] = (target_activation(pattern[j]) - a) * a * (1.0 - a);
  }
  std::array<double, kHiddenNodes> terms{};
  const auto& fixed = fixed_weights();
  for (std::size_t h = 0; h < kHiddenNodes; ++h) {
    double sum = 0.0;
    for (std::size_t j = 0; j < kBodyParts; ++j) sum += out_delta[j] * fixed[h][j];
    const double a = act.hidden[h];
    terms[h] = a * (1.0 - a) * sum;
  }
  return terms;
}

SubAction Network::recall(const SubAction& input) const {
  const auto out = outputs(input);
  SubAction s;
  for (std::size_t j = 0; j < kBodyParts; ++j) s.positions[j] = decode_activation(out[j]);
  return s;
}

InventionBias Network::invention_bias(const Activations& act) const {
  const double midpoint = squash(0.0);
  auto rescale = [midpoint](double a) { return std::clamp(a - midpoint + 0.5, 0.0, 1.0); };
  return {rescale(act.hidden_at(HiddenNode::Movement)),
          rescale(act.hidden_at(HiddenNode::Symmetry))};
}

}  // namespace culturesim
