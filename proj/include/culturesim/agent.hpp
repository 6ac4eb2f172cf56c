#pragma once

// One agent's per-iteration behavior: choosing between creating and
// imitating, generating a candidate action, extending chains, adopting
// fitter actions, and the social-regulation update of p(C).

#include <optional>
#include <span>

#include "culturesim/action.hpp"
#include "culturesim/fitness.hpp"
#include "culturesim/network.hpp"
#include "culturesim/random.hpp"

namespace culturesim {

/// Which sub-actions may be appended to a chain.
enum class ChainGate : std::uint8_t {
  AcceptableOnly,  // only the four acceptable sub-actions
  AnyTemplate,     // any sub-action matched by at least one template
};

struct BehaviorParams {
  bool role_free = false;  // social-regulation society: every agent draws with its own p(C)
  bool chaining = false;
  ChainGate chain_gate = ChainGate::AnyTemplate;
  std::size_t max_chain_length = 50;
  bool trend_learning = true;
  double flip_probability = 1.0 / 6.0;
};

struct Agent {
  Agent(std::size_t id, AgentRole role, double p_create, Network net, std::uint64_t seed,
        const FitnessFunction& fitness)
      : id(id), role(role), p_create(p_create), current(SubAction{}), net(std::move(net)),
        last_fitness(fitness(current)), rng(seed) {}

  std::size_t id;
  AgentRole role;
  double p_create;  // p(C); p(I) = 1 - p(C)
  ActionChain current;
  Network net;
  double last_fitness;
  Rng rng;
  std::size_t untrained_adoptions = 0;  // training runs that hit max_epochs
};

enum class Choice : std::uint8_t { Create, Imitate };

/// A neighbor's implemented action as seen in the previous iteration.
struct NeighborAction {
  const ActionChain* action;
  double fitness;
};

Choice decide(const Agent& agent, Rng& rng, const BehaviorParams& params);

/// Flips each component with `flip_probability`. A flipped component always
/// changes: a neutral part becomes active (copying an active mirror limb's
/// direction with probability (1 + symmetry)/3, otherwise a fair coin); an
/// active part reverses with probability `movement` and goes neutral otherwise.
SubAction mutate_subaction(const SubAction& base, const InventionBias& bias, Rng& rng,
                           double flip_probability = 1.0 / 6.0);

InventionBias current_bias(const Agent& agent, const BehaviorParams& params);

/// Candidate from mutating the final step of the current action (and, with
/// chaining, extending it). Returns the current action unchanged when the
/// mutated step would repeat the step before it.
ActionChain invent(const Agent& agent, Rng& rng, const BehaviorParams& params,
                   const TemplateSet* templates);

/// Keeps appending mutations of the final step while the final step and each
/// new step pass the gate and each new step differs from its predecessor.
ActionChain extend_chain(ActionChain candidate, const InventionBias& bias,
                         const TemplateSet& templates, Rng& rng, const BehaviorParams& params);

bool passes_chain_gate(const SubAction& step, const TemplateSet& templates, ChainGate gate);

/// Lazy scan of neighbors in random order: the first strictly fitter action, if any.
std::optional<ActionChain> imitate(const Agent& agent, std::span<const NeighborAction> neighbors,
                                   Rng& rng);

/// Implements `candidate` if it is strictly fitter, training the network on
/// its final step. Returns whether it was adopted.
bool adopt_if_fitter(Agent& agent, const ActionChain& candidate, const FitnessFunction& fitness,
                     const BehaviorParams& params);

/// p(C) <- clamp(p(C) * RF, 0, 1) with RF = fitness / society mean; RF = 1 when the mean is 0.
void update_p_create(Agent& agent, double mean_fitness);

}  // namespace culturesim
