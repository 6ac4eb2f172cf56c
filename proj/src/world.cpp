#include "culturesim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace culturesim {

namespace {

void require(bool ok, const std::string& field, const std::string& constraint) {
  if (!ok) throw ConfigError(field + ": " + constraint);
}

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void WorldConfig::validate() const {
  require(lattice_side >= 2, "lattice_side", "must be at least 2");
  require(lattice_side <= 4096, "lattice_side", "must be at most 4096");
  require(iterations >= 1, "iterations", "must be at least 1");
  require(unit_interval(creator_fraction), "creator_fraction", "must lie in [0, 1]");
  require(unit_interval(creator_creativity), "creator_creativity", "must lie in [0, 1]");
  require(std::isfinite(tau), "tau", "must be finite");
  require(max_chain_length >= 1, "max_chain_length", "must be at least 1");
  require(!sr_enabled || creator_fraction == 1.0, "creator_fraction",
          "must be 1 when sr_enabled (social regulation replaces fixed roles)");
  require(!chaining_enabled || fitness_regime == FitnessRegime::Template, "chaining_enabled",
          "requires fitness_regime = template");
}

BehaviorParams WorldConfig::behavior() const {
  BehaviorParams b;
  b.role_free = sr_enabled;
  b.chaining = chaining_enabled;
  b.chain_gate = chain_gate;
  b.max_chain_length = chaining_enabled ? max_chain_length : 1;
  b.trend_learning = trend_learning;
  return b;
}

std::size_t histogram_bin(double p) {
  if (p <= 0.1) return 0;
  if (p >= 0.9) return kHistogramBins - 1;
  const auto bin = static_cast<std::size_t>(std::ceil(p * 10.0)) - 1;
  return std::clamp<std::size_t>(bin, 1, kHistogramBins - 2);
}

std::shared_ptr<const TemplateSet> templates_for(const WorldConfig& cfg) {
  if (cfg.fitness_regime != FitnessRegime::Template) return nullptr;
  if (cfg.templates_path.empty())
    return std::shared_ptr<const TemplateSet>(&default_template_set(), [](const TemplateSet*) {});
  return std::make_shared<const TemplateSet>(load_template_file(cfg.templates_path));
}

World::World(const WorldConfig& cfg, std::uint64_t run_index,
             std::shared_ptr<const TemplateSet> templates)
    : cfg_(cfg),
      behavior_(cfg.behavior()),
      templates_(std::move(templates)),
      fitness_(cfg.fitness_regime, templates_.get()) {
  cfg_.validate();
  const std::size_t n = cfg_.population();
  const std::uint64_t run_seed = derive_seed(cfg_.base_seed, run_index);
  Rng run_rng(run_seed);

  std::vector<AgentRole> roles(n, AgentRole::Creator);
  if (!cfg_.sr_enabled) {
    // creators are a uniform sample of round(C * N) cells
    const auto creators = static_cast<std::size_t>(std::llround(cfg_.creator_fraction * n));
    std::vector<std::size_t> cells(n);
    std::iota(cells.begin(), cells.end(), std::size_t{0});
    for (std::size_t k = 0; k < creators; ++k)
      std::swap(cells[k], cells[k + run_rng.below(n - k)]);
    std::fill(roles.begin(), roles.end(), AgentRole::Imitator);
    for (std::size_t k = 0; k < creators; ++k) roles[cells[k]] = AgentRole::Creator;
  }

  agents_.reserve(n);
  for (std::size_t id = 0; id < n; ++id) {
    // each agent's stream depends only on (run seed, id), never on placement
    const std::uint64_t agent_seed = derive_seed(run_seed, id + 1);
    Rng init_rng(derive_seed(agent_seed, 0x6e6574));
    Network net(init_rng);
    if (cfg_.trend_learning) net.train(SubAction{});
    const double p = roles[id] == AgentRole::Creator ? cfg_.creator_creativity : 0.0;
    agents_.emplace_back(id, roles[id], p, std::move(net), agent_seed, fitness_);
  }
  refresh_snapshot();
}

std::array<std::size_t, 4> World::neighbors(std::size_t cell) const {
  const auto side = static_cast<std::size_t>(cfg_.lattice_side);
  const std::size_t r = cell / side, c = cell % side;
  const std::size_t up = (r + side - 1) % side, down = (r + 1) % side;
  const std::size_t left = (c + side - 1) % side, right = (c + 1) % side;
  return {up * side + c, down * side + c, r * side + left, r * side + right};
}

void World::refresh_snapshot() {
  snapshot_actions_.clear();
  snapshot_fitness_.clear();
  snapshot_actions_.reserve(agents_.size());
  snapshot_fitness_.reserve(agents_.size());
  for (const auto& a : agents_) {
    snapshot_actions_.push_back(a.current);
    snapshot_fitness_.push_back(a.last_fitness);
  }
}

void World::act(Agent& agent) {
  if (decide(agent, agent.rng, behavior_) == Choice::Create) {
    const ActionChain candidate = invent(agent, agent.rng, behavior_, templates_.get());
    adopt_if_fitter(agent, candidate, fitness_, behavior_);
    return;
  }
  std::array<NeighborAction, 4> seen{};
  const auto cells = neighbors(agent.id);
  for (std::size_t k = 0; k < cells.size(); ++k)
    seen[k] = {&snapshot_actions_[cells[k]], snapshot_fitness_[cells[k]]};
  if (auto chosen = imitate(agent, seen, agent.rng))
    adopt_if_fitter(agent, *chosen, fitness_, behavior_);
}

void World::step() {
  // reads go through the snapshot, writes touch only the acting agent
  for (auto& agent : agents_) act(agent);
  finish_step();
}

void World::step(std::span<const std::size_t> order) {
  if (order.size() != agents_.size()) throw std::invalid_argument("order must list every cell");
  for (std::size_t cell : order) act(agents_.at(cell));
  finish_step();
}

void World::finish_step() {
  if (cfg_.sr_enabled) {
    // both sides of RF come from the iteration that just finished
    const double mean = mean_fitness();
    for (auto& agent : agents_) update_p_create(agent, mean);
  }
  ++iteration_;
  refresh_snapshot();
}

double World::mean_fitness() const {
  double sum = 0.0;
  for (const auto& a : agents_) sum += a.last_fitness;
  return agents_.empty() ? 0.0 : sum / static_cast<double>(agents_.size());
}

std::uint32_t World::diversity() const {
  std::unordered_set<ActionChain, ActionChainHash> distinct;
  distinct.reserve(agents_.size());
  for (const auto& a : agents_) distinct.insert(a.current);
  return static_cast<std::uint32_t>(distinct.size());
}

PCreateHistogram World::p_create_histogram() const {
  PCreateHistogram h{};
  for (const auto& a : agents_) ++h[histogram_bin(a.p_create)];
  return h;
}

RunSeries run(const WorldConfig& cfg, std::uint64_t run_index) {
  return run(cfg, run_index, templates_for(cfg));
}

RunSeries run(const WorldConfig& cfg, std::uint64_t run_index,
              std::shared_ptr<const TemplateSet> templates) {
  World world(cfg, run_index, std::move(templates));
  RunSeries out;
  out.run_index = run_index;
  const auto n = static_cast<std::size_t>(cfg.iterations);
  out.mean_fitness.reserve(n);
  out.diversity.reserve(n);
  out.p_create_hist.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    world.step();
    out.mean_fitness.push_back(world.mean_fitness());
    out.diversity.push_back(world.diversity());
    out.p_create_hist.push_back(world.p_create_histogram());
  }
  return out;
}

}  // namespace culturesim
