#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "cnsga/moo.hpp"
#include "cnsga/problem.hpp"
#include "cnsga/random.hpp"
#include "cnsga/run_record.hpp"

namespace cnsga::nsga2 {

struct Nsga2Config {
  std::size_t pop_size = 100;
  std::size_t nfc_budget = 10000;
  double crossover_prob = 1.0;
  std::optional<double> mutation_prob;  // 1 / dimension when unset

  void validate() const;
};

// Binary tournament between members a and b of a ranked population: lower
// rank, then larger crowding, then a coin flip.
std::size_t tournament(const RankedPopulation& pop, std::size_t a, std::size_t b, Rng& rng);

// With probability crossover_prob, cut at c uniform in [1, d-1] and swap the
// tails. Genomes shorter than 2 bits are copied through.
std::pair<Genome, Genome> single_point_crossover(const Genome& p1, const Genome& p2,
                                                 double crossover_prob, Rng& rng);

// Children for an explicit cut point c in [1, d-1].
std::pair<Genome, Genome> cut_and_swap(const Genome& p1, const Genome& p2, std::size_t cut);

// Flips each bit independently with probability mutation_prob.
Genome bitflip_mutation(Genome g, double mutation_prob, Rng& rng);

RunRecord run(const Nsga2Config& config, const Problem& problem, std::uint64_t seed);

}  // namespace cnsga::nsga2
