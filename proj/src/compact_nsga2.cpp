#include "cnsga/compact_nsga2.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cnsga::compact {

void CnsgaConfig::validate() const {
  if (num_pvs < 1) throw std::invalid_argument("number of PVs must be at least 1");
  if (!(step_size >= 0.0 && step_size < 1.0)) {
    throw std::invalid_argument("step size must lie in [0, 1)");
  }
  if (!(min_boundary >= 0.0 && min_boundary < 0.5)) {
    throw std::invalid_argument("min boundary must lie in [0, 0.5)");
  }
  if (max_pop_size < num_pvs) {
    throw std::invalid_argument("max population size must be at least the number of PVs");
  }
}

Genome binarize(const ProbabilityVector& pv) {
  Genome g(pv.size());
  for (std::size_t k = 0; k < pv.size(); ++k) g.set(k, pv[k] > 0.5);
  return g;
}

std::vector<std::size_t> assign_leaders(std::span<const ProbabilityVector> pvs,
                                        std::span<const Individual> leaders) {
  if (pvs.size() != leaders.size()) {
    throw std::invalid_argument("assign_leaders: need exactly one leader per PV");
  }
  const std::size_t n = pvs.size();

  // distance[j][i]: Hamming distance between binarized PV j and leader i.
  std::vector<std::vector<std::size_t>> distance(n, std::vector<std::size_t>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const Genome binary = binarize(pvs[j]);
    for (std::size_t i = 0; i < n; ++i) distance[j][i] = hamming(leaders[i].genome, binary);
  }

  std::vector<bool> taken(n, false);
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (best == n || distance[j][i] < distance[j][best]) best = i;
    }
    taken[best] = true;
    assignment[j] = best;
  }
  return assignment;
}

ProbabilityVector update_pv(const ProbabilityVector& pv, const Genome& leader,
                            const CnsgaConfig& config) {
  if (pv.size() != leader.size()) {
    throw std::invalid_argument("update_pv: PV and leader lengths differ");
  }
  const double lo = config.min_boundary;
  const double hi = 1.0 - config.min_boundary;
  ProbabilityVector out(pv.size());
  for (std::size_t k = 0; k < pv.size(); ++k) {
    const double moved = leader[k] ? pv[k] + config.step_size : pv[k] - config.step_size;
    out[k] = std::clamp(moved, lo, hi);
  }
  return out;
}

Genome sample(const ProbabilityVector& pv, Rng& rng) {
  Genome g(pv.size());
  for (std::size_t k = 0; k < pv.size(); ++k) g.set(k, rng.uniform01() < pv[k]);
  return g;
}

CnsgaState init(const CnsgaConfig& config, const Problem& problem, Rng& rng) {
  config.validate();
  if (config.nfc_budget < config.num_pvs) {
    throw std::invalid_argument("evaluation budget is smaller than the number of PVs");
  }
  const std::size_t d = problem.dimension();
  if (d < 1) throw std::invalid_argument("problem dimension must be at least 1");

  CnsgaState state;
  state.pvs.assign(config.num_pvs, ProbabilityVector(d, 0.5));
  state.population.reserve(config.num_pvs);
  for (std::size_t j = 0; j < config.num_pvs; ++j) {
    Genome g(d);
    for (std::size_t k = 0; k < d; ++k) g.set(k, rng.coin());
    auto objectives = problem.evaluate(g);
    state.population.push_back({std::move(g), objectives});
  }
  state.evals_used = config.num_pvs;
  state.leaders = state.population;
  state.pareto_front = non_dominated_sort(state.population).pareto_front();
  state.peak_stored = state.population.size();
  return state;
}

bool can_iterate(const CnsgaState& state, const CnsgaConfig& config) {
  if (config.max_iterations && state.iterations >= *config.max_iterations) return false;
  return state.evals_used + config.num_pvs <= config.nfc_budget;
}

namespace {

// Leaders repeated cyclically when the archive holds fewer distinct
// individuals than there are PVs (only possible for tiny genomes).
std::vector<Individual> leaders_for_update(const std::vector<Individual>& leaders, std::size_t n) {
  if (leaders.size() == n || leaders.empty()) return leaders;
  std::vector<Individual> padded;
  padded.reserve(n);
  for (std::size_t i = 0; i < n; ++i) padded.push_back(leaders[i % leaders.size()]);
  return padded;
}

}  // namespace

void iterate(CnsgaState& state, const CnsgaConfig& config, const Problem& problem, Rng& rng) {
  const std::size_t n = config.num_pvs;

  const auto leaders = leaders_for_update(state.leaders, n);
  const auto assignment = assign_leaders(state.pvs, leaders);
  for (std::size_t j = 0; j < n; ++j) {
    state.pvs[j] = update_pv(state.pvs[j], leaders[assignment[j]].genome, config);
  }

  std::vector<Genome> candidates;
  candidates.reserve(n);
  for (std::size_t j = 0; j < n; ++j) candidates.push_back(sample(state.pvs[j], rng));
  for (auto& g : candidates) {
    auto objectives = problem.evaluate(g);
    state.population.push_back({std::move(g), objectives});
  }
  state.evals_used += n;
  state.peak_stored = state.population.size();

  auto ranked = non_dominated_sort(deduplicate(std::move(state.population)));
  state.pareto_front = ranked.pareto_front();
  const auto order = best_order(ranked);
  const std::size_t num_leaders = std::min(n, order.size());

  state.leaders.clear();
  std::vector<bool> keep(ranked.size(), false);
  for (std::size_t i = 0; i < num_leaders; ++i) {
    state.leaders.push_back(ranked.members[order[i]]);
    keep[order[i]] = true;
  }
  for (auto i : ranked.fronts.front()) keep[i] = true;

  // Front and leaders survive; beyond max_pop_size only the best do.
  std::size_t kept = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
  if (kept > config.max_pop_size) {
    std::fill(keep.begin(), keep.end(), false);
    for (std::size_t i = 0; i < config.max_pop_size; ++i) keep[order[i]] = true;
  }

  state.population.clear();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (keep[i]) state.population.push_back(std::move(ranked.members[i]));
  }
  ++state.iterations;
}

std::vector<Individual> archive_front(const CnsgaState& state) {
  return non_dominated_sort(state.population).pareto_front();
}

RunRecord run(const CnsgaConfig& config, const Problem& problem, std::uint64_t seed) {
  Rng rng(seed);
  auto state = init(config, problem, rng);

  RunRecord record;
  record.algorithm = "cnsga2";
  record.seed = seed;
  record.initial_front = state.pareto_front;
  while (can_iterate(state, config)) {
    iterate(state, config, problem, rng);
    record.trajectory.record(state.evals_used, archive_front(state));
  }
  record.evals_used = state.evals_used;
  record.iterations = state.iterations;
  record.final_front = archive_front(state);
  return record;
}

}  // namespace cnsga::compact
