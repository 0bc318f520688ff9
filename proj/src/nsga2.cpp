#include "cnsga/nsga2.hpp"

#include <stdexcept>

namespace cnsga::nsga2 {

void Nsga2Config::validate() const {
  if (pop_size < 2 || pop_size % 2 != 0) {
    throw std::invalid_argument("population size must be even and at least 2");
  }
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
    throw std::invalid_argument("crossover probability must lie in [0, 1]");
  }
  if (mutation_prob && !(*mutation_prob >= 0.0 && *mutation_prob <= 1.0)) {
    throw std::invalid_argument("mutation probability must lie in [0, 1]");
  }
  if (nfc_budget < pop_size) {
    throw std::invalid_argument("evaluation budget is smaller than the population size");
  }
}

std::size_t tournament(const RankedPopulation& pop, std::size_t a, std::size_t b, Rng& rng) {
  if (pop.rank[a] != pop.rank[b]) return pop.rank[a] < pop.rank[b] ? a : b;
  if (pop.crowding[a] != pop.crowding[b]) return pop.crowding[a] > pop.crowding[b] ? a : b;
  return rng.coin() ? a : b;
}

std::pair<Genome, Genome> cut_and_swap(const Genome& p1, const Genome& p2, std::size_t cut) {
  if (p1.size() != p2.size()) throw std::invalid_argument("crossover: parent lengths differ");
  Genome c1 = p1;
  Genome c2 = p2;
  for (std::size_t k = cut; k < p1.size(); ++k) {
    c1.set(k, p2[k]);
    c2.set(k, p1[k]);
  }
  return {std::move(c1), std::move(c2)};
}

std::pair<Genome, Genome> single_point_crossover(const Genome& p1, const Genome& p2,
                                                 double crossover_prob, Rng& rng) {
  if (p1.size() != p2.size()) throw std::invalid_argument("crossover: parent lengths differ");
  const std::size_t d = p1.size();
  if (d < 2 || !(rng.uniform01() < crossover_prob)) return {p1, p2};
  const std::size_t cut = 1 + rng.below(d - 1);
  return cut_and_swap(p1, p2, cut);
}

Genome bitflip_mutation(Genome g, double mutation_prob, Rng& rng) {
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (rng.uniform01() < mutation_prob) g.flip(k);
  }
  return g;
}

namespace {

std::pair<std::size_t, std::size_t> random_pair(std::size_t n, Rng& rng) {
  const std::size_t a = rng.below(n);
  if (n < 2) return {a, a};
  std::size_t b = rng.below(n - 1);
  if (b >= a) ++b;
  return {a, b};
}

}  // namespace

RunRecord run(const Nsga2Config& config, const Problem& problem, std::uint64_t seed) {
  config.validate();
  const std::size_t d = problem.dimension();
  if (d < 1) throw std::invalid_argument("problem dimension must be at least 1");
  const double mutation_prob = config.mutation_prob.value_or(1.0 / static_cast<double>(d));

  Rng rng(seed);
  RunRecord record;
  record.algorithm = "nsga2";
  record.seed = seed;

  std::vector<Individual> population;
  population.reserve(config.pop_size);
  for (std::size_t i = 0; i < config.pop_size; ++i) {
    Genome g(d);
    for (std::size_t k = 0; k < d; ++k) g.set(k, rng.coin());
    auto objectives = problem.evaluate(g);
    population.push_back({std::move(g), objectives});
  }
  record.evals_used = config.pop_size;

  auto ranked = non_dominated_sort(std::move(population));
  record.initial_front = ranked.pareto_front();

  while (record.evals_used + config.pop_size <= config.nfc_budget) {
    std::vector<std::size_t> parents;
    parents.reserve(config.pop_size);
    for (std::size_t i = 0; i < config.pop_size; ++i) {
      auto [a, b] = random_pair(ranked.size(), rng);
      parents.push_back(tournament(ranked, a, b, rng));
    }

    std::vector<Individual> merged = ranked.members;
    merged.reserve(merged.size() + config.pop_size);
    for (std::size_t i = 0; i < config.pop_size; i += 2) {
      auto [c1, c2] = single_point_crossover(ranked.members[parents[i]].genome,
                                             ranked.members[parents[i + 1]].genome,
                                             config.crossover_prob, rng);
      for (Genome* child : {&c1, &c2}) {
        Genome mutated = bitflip_mutation(std::move(*child), mutation_prob, rng);
        auto objectives = problem.evaluate(mutated);
        merged.push_back({std::move(mutated), objectives});
      }
    }
    record.evals_used += config.pop_size;
    ++record.iterations;

    auto pool = non_dominated_sort(deduplicate(std::move(merged)));
    ranked = non_dominated_sort(select_best(pool, config.pop_size));
    record.trajectory.record(record.evals_used, ranked.pareto_front());
  }

  record.final_front = ranked.pareto_front();
  return record;
}

}  // namespace cnsga::nsga2
