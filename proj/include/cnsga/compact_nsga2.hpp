#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cnsga/moo.hpp"
#include "cnsga/problem.hpp"
#include "cnsga/random.hpp"
#include "cnsga/run_record.hpp"

namespace cnsga::compact {

// Per-feature selection probabilities of one compact population.
using ProbabilityVector = std::vector<double>;

struct CnsgaConfig {
  std::size_t num_pvs = 10;
  double step_size = 1.0 / 500.0;  // 1 / virtual population size
  double min_boundary = 0.01;
  std::size_t max_pop_size = 100;  // also bounds the Pareto archive
  std::size_t nfc_budget = 10000;
  // Optional cap on main-loop iterations; the budget always applies.
  std::optional<std::size_t> max_iterations;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct CnsgaState {
  std::vector<ProbabilityVector> pvs;
  std::vector<Individual> population;  // archive kept between iterations
  std::vector<Individual> leaders;
  std::vector<Individual> pareto_front;  // rank 0 before trimming
  std::size_t evals_used = 0;
  std::size_t iterations = 0;
  // Individuals held at once during the last iteration (archive + samples).
  std::size_t peak_stored = 0;
};

// Bit k is 1 iff probability k exceeds 0.5.
Genome binarize(const ProbabilityVector& pv);

// Greedy leader assignment in PV index order: PV j takes the unassigned leader
// nearest (Hamming) to binarize(PV j), lowest leader index on ties. Returns
// leader index per PV. Throws std::invalid_argument on a count mismatch.
std::vector<std::size_t> assign_leaders(std::span<const ProbabilityVector> pvs,
                                        std::span<const Individual> leaders);

// Moves every element one step towards the leader's bit, then clips to
// [min_boundary, 1 - min_boundary].
ProbabilityVector update_pv(const ProbabilityVector& pv, const Genome& leader,
                            const CnsgaConfig& config);

// Bit k is 1 iff a fresh uniform draw is below probability k.
Genome sample(const ProbabilityVector& pv, Rng& rng);

// Random population of N individuals, N PVs at 0.5, leaders = population.
// Throws std::invalid_argument if the config is invalid or the budget cannot
// cover initialization.
CnsgaState init(const CnsgaConfig& config, const Problem& problem, Rng& rng);

// True when another iteration fits in the budget (and iteration cap).
bool can_iterate(const CnsgaState& state, const CnsgaConfig& config);

// One main-loop iteration: update PVs, sample and evaluate N candidates,
// merge, re-rank, pick leaders, shrink the archive.
void iterate(CnsgaState& state, const CnsgaConfig& config, const Problem& problem, Rng& rng);

// Rank 0 of the archive kept between iterations.
std::vector<Individual> archive_front(const CnsgaState& state);

RunRecord run(const CnsgaConfig& config, const Problem& problem, std::uint64_t seed);

}  // namespace cnsga::compact
