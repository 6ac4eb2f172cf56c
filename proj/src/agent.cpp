#include "culturesim/agent.hpp"

#include <algorithm>
#include <array>

namespace culturesim {

Choice decide(const Agent& agent, Rng& rng, const BehaviorParams& params) {
  if (!params.role_free && agent.role == AgentRole::Imitator) return Choice::Imitate;
  return rng.bernoulli(agent.p_create) ? Choice::Create : Choice::Imitate;
}

SubAction mutate_subaction(const SubAction& base, const InventionBias& bias, Rng& rng,
                           double flip_probability) {
  SubAction out = base;
  for (std::size_t j = 0; j < kBodyParts; ++j) {
    if (!rng.bernoulli(flip_probability)) continue;
    const Trit cur = base[j];
    if (cur != 0) {
      out.positions[j] = rng.bernoulli(bias.movement) ? static_cast<Trit>(-cur) : Trit{0};
      continue;
    }
    const auto partner = symmetric_partner(kCanonicalOrder[j]);
    const Trit partner_pos = partner ? base[*partner] : Trit{0};
    if (partner_pos != 0) {
      const bool copy = rng.bernoulli((1.0 + bias.symmetry) / 3.0);
      out.positions[j] = copy ? partner_pos : static_cast<Trit>(-partner_pos);
    } else {
      out.positions[j] = rng.bernoulli(0.5) ? Trit{1} : Trit{-1};
    }
  }
  return out;
}

InventionBias current_bias(const Agent& agent, const BehaviorParams& params) {
  if (!params.trend_learning) return {};
  return agent.net.invention_bias(agent.current.back());
}

bool passes_chain_gate(const SubAction& step, const TemplateSet& templates, ChainGate gate) {
  return gate == ChainGate::AcceptableOnly ? is_successful(step, templates)
                                           : matches_any_template(step, templates);
}

ActionChain extend_chain(ActionChain candidate, const InventionBias& bias,
                         const TemplateSet& templates, Rng& rng, const BehaviorParams& params) {
  while (candidate.size() < params.max_chain_length &&
         passes_chain_gate(candidate.back(), templates, params.chain_gate)) {
    const SubAction next = mutate_subaction(candidate.back(), bias, rng, params.flip_probability);
    if (!passes_chain_gate(next, templates, params.chain_gate) || !candidate.try_append(next))
      break;
  }
  return candidate;
}

ActionChain invent(const Agent& agent, Rng& rng, const BehaviorParams& params,
                   const TemplateSet* templates) {
  const InventionBias bias = current_bias(agent, params);
  const SubAction mutated =
      mutate_subaction(agent.current.back(), bias, rng, params.flip_probability);
  auto candidate = agent.current.with_final(mutated);
  if (!candidate) return agent.current;
  if (params.chaining && templates != nullptr)
    return extend_chain(std::move(*candidate), bias, *templates, rng, params);
  return std::move(*candidate);
}

std::optional<ActionChain> imitate(const Agent& agent, std::span<const NeighborAction> neighbors,
                                   Rng& rng) {
  std::array<std::size_t, 8> order{};
  const std::size_t n = std::min(neighbors.size(), order.size());
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& nb = neighbors[order[k]];
    if (nb.fitness > agent.last_fitness) return *nb.action;
  }
  return std::nullopt;
}

bool adopt_if_fitter(Agent& agent, const ActionChain& candidate, const FitnessFunction& fitness,
                     const BehaviorParams& params) {
  const double f = fitness(candidate);
  if (!(f > agent.last_fitness)) return false;
  agent.current = candidate;
  agent.last_fitness = f;
  if (params.trend_learning) {
    // the explicit action stays authoritative even if training stalls
    if (!agent.net.train(candidate.back()).converged) ++agent.untrained_adoptions;
  }
  return true;
}

void update_p_create(Agent& agent, double mean_fitness) {
  if (mean_fitness <= 0.0) return;
  const double rf = agent.last_fitness / mean_fitness;
  agent.p_create = std::clamp(agent.p_create * rf, 0.0, 1.0);
}

}  // namespace culturesim
