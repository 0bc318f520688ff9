#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cnsga/hypervolume.hpp"
#include "cnsga/moo.hpp"

namespace cnsga {

// Outcome of one seeded optimization run.
struct RunRecord {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t evals_used = 0;
  std::size_t iterations = 0;
  HvTrajectory trajectory;               // one point per iteration/generation
  std::vector<Individual> initial_front;  // rank 0 of the random initial population
  std::vector<Individual> final_front;    // rank 0 of the final archive
};

}  // namespace cnsga
