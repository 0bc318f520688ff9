#pragma once

#include <cstddef>

#include "cnsga/moo.hpp"

namespace cnsga {

// A binary two-objective minimization problem. evaluate() must be
// deterministic and safe to call concurrently.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual std::size_t dimension() const = 0;
  virtual ObjectiveVector evaluate(const Genome& genome) const = 0;
};

}  // namespace cnsga
