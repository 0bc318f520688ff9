#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cnsga/moo.hpp"

namespace cnsga {

inline constexpr ObjectiveVector kDefaultReference{1.0, 1.0};

// Exact area dominated by `front` and bounded by `ref`. Points with any
// coordinate at or beyond the reference contribute nothing; dominated points
// are ignored.
double hypervolume_2d(std::span<const ObjectiveVector> front,
                      const ObjectiveVector& ref = kDefaultReference);

double hypervolume_2d(std::span<const Individual> front,
                      const ObjectiveVector& ref = kDefaultReference);

struct HvPoint {
  std::size_t evals = 0;
  double hv = 0.0;

  friend bool operator==(const HvPoint&, const HvPoint&) = default;
};

// HV as a function of evaluations consumed; evals strictly increase.
class HvTrajectory {
 public:
  // Appends (evals, HV(front)). Throws std::invalid_argument unless evals is
  // greater than the last recorded value.
  void record(std::size_t evals, std::span<const Individual> front,
              const ObjectiveVector& ref = kDefaultReference);
  void record(std::size_t evals, double hv);

  const std::vector<HvPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const HvPoint& back() const { return points_.back(); }

  // Last HV recorded at or before `evals`; 0 if nothing was recorded by then.
  double hv_at(std::size_t evals) const;

  friend bool operator==(const HvTrajectory&, const HvTrajectory&) = default;

 private:
  std::vector<HvPoint> points_;
};

}  // namespace cnsga
