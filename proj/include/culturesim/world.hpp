#pragma once

// The artificial world: a toroidal lattice with one stationary agent per
// cell, von Neumann neighborhoods and synchronous updates against a frozen
// snapshot of the previous iteration.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "culturesim/agent.hpp"
#include "culturesim/fitness.hpp"

namespace culturesim {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WorldConfig {
  int lattice_side = 32;
  int iterations = 100;
  double creator_fraction = 0.5;    // C
  double creator_creativity = 0.5;  // p; also the initial p(C) under social regulation
  bool sr_enabled = false;
  bool chaining_enabled = false;
  FitnessRegime fitness_regime = FitnessRegime::SingleStep;
  bool trend_learning = true;
  double tau = 9.0;
  std::size_t max_chain_length = 50;
  ChainGate chain_gate = ChainGate::AnyTemplate;
  std::uint64_t base_seed = 0;
  std::string templates_path;  // empty: built-in default set

  std::size_t population() const {
    return static_cast<std::size_t>(lattice_side) * static_cast<std::size_t>(lattice_side);
  }

  /// Throws ConfigError naming the field and the violated constraint.
  void validate() const;

  BehaviorParams behavior() const;
};

inline constexpr std::size_t kHistogramBins = 10;
using PCreateHistogram = std::array<std::uint32_t, kHistogramBins>;

/// Bin 0 holds p <= 0.1, bin 9 holds p >= 0.9; bins 1..8 split the rest in 0.1 steps.
std::size_t histogram_bin(double p);

struct RunSeries {
  std::vector<double> mean_fitness;       // iterations 1..N
  std::vector<std::uint32_t> diversity;   // distinct implemented actions
  std::vector<PCreateHistogram> p_create_hist;
  std::uint64_t run_index = 0;
  std::string config_digest;
};

class World {
 public:
  /// Builds the initial state for one run. `templates` must outlive the world
  /// and is required for the template regime.
  World(const WorldConfig& cfg, std::uint64_t run_index, std::shared_ptr<const TemplateSet> templates);

  void step();
  /// Same as step() but visits agents in `order` (a permutation of cell indices).
  void step(std::span<const std::size_t> order);

  int iteration() const { return iteration_; }
  const std::vector<Agent>& agents() const { return agents_; }
  std::vector<Agent>& agents_for_testing() { return agents_; }
  const WorldConfig& config() const { return cfg_; }
  const FitnessFunction& fitness() const { return fitness_; }

  double mean_fitness() const;
  std::uint32_t diversity() const;
  PCreateHistogram p_create_histogram() const;

  /// North, south, west, east with wraparound.
  std::array<std::size_t, 4> neighbors(std::size_t cell) const;

  /// Re-reads every agent's current action into the previous-iteration snapshot.
  void refresh_snapshot();

 private:
  void act(Agent& agent);
  void finish_step();

  WorldConfig cfg_;
  BehaviorParams behavior_;
  std::shared_ptr<const TemplateSet> templates_;
  FitnessFunction fitness_;
  std::vector<Agent> agents_;
  std::vector<ActionChain> snapshot_actions_;
  std::vector<double> snapshot_fitness_;
  int iteration_ = 0;
};

/// Template set selected by the config (default or loaded from file); null for the single-step regime.
std::shared_ptr<const TemplateSet> templates_for(const WorldConfig& cfg);

/// initialize + `iterations` steps, recording one entry per step.
RunSeries run(const WorldConfig& cfg, std::uint64_t run_index);
RunSeries run(const WorldConfig& cfg, std::uint64_t run_index,
              std::shared_ptr<const TemplateSet> templates);

}  // namespace culturesim
