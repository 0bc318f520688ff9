#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "cnsga/genome.hpp"

namespace cnsga {

// Both objectives are minimized and live in [0, 1].
struct ObjectiveVector {
  double error = 0.0;  // classification error
  double ratio = 0.0;  // fraction of selected features

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct Individual {
  Genome genome;
  ObjectiveVector objectives;
};

inline constexpr double kInfiniteCrowding = std::numeric_limits<double>::infinity();

// Population annotated with non-dominated rank and per-rank crowding distance.
// fronts[r] lists member indices of rank r in insertion order.
struct RankedPopulation {
  std::vector<Individual> members;
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
  std::vector<std::vector<std::size_t>> fronts;

  std::size_t size() const { return members.size(); }

  // Members of rank 0, in insertion order.
  std::vector<Individual> pareto_front() const;
};

// Pareto dominance for minimization: no worse in both, strictly better in one.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

// Rank of each vector: 0 for the non-dominated set, r for members dominated
// only by ranks < r. Deb's fast non-dominated sort.
std::vector<std::size_t> non_dominated_ranks(std::span<const ObjectiveVector> objectives);

// Crowding distance of a set of vectors that share one rank. Boundary members
// of every objective get +infinity; sets of one or two members are all
// boundary. An objective with zero range adds nothing to interior members.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

// Sorts the population and computes crowding per rank.
RankedPopulation non_dominated_sort(std::vector<Individual> population);

// Member indices ordered best first by (rank asc, crowding desc, index asc).
std::vector<std::size_t> best_order(const RankedPopulation& pop);

// The n best members under best_order, or all of them when size() <= n.
std::vector<Individual> select_best(const RankedPopulation& pop, std::size_t n);

// Drops exact genome repeats, keeping the first occurrence.
std::vector<Individual> deduplicate(std::vector<Individual> population);

std::vector<ObjectiveVector> objectives_of(std::span<const Individual> population);

}  // namespace cnsga
