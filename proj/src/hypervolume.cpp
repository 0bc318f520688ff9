#include "cnsga/hypervolume.hpp"

#include <algorithm>
#include <stdexcept>

namespace cnsga {

double hypervolume_2d(std::span<const ObjectiveVector> front, const ObjectiveVector& ref) {
  std::vector<ObjectiveVector> pts;
  pts.reserve(front.size());
  for (const auto& p : front) {
    if (p.error < ref.error && p.ratio < ref.ratio) pts.push_back(p);
  }
  if (pts.empty()) return 0.0;

  std::sort(pts.begin(), pts.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.error != b.error ? a.error < b.error : a.ratio < b.ratio;
  });

  // Sweep along the first objective, keeping only points that lower the
  // running best of the second.
  std::vector<ObjectiveVector> staircase;
  for (const auto& p : pts) {
    if (staircase.empty() || p.ratio < staircase.back().ratio) staircase.push_back(p);
  }

  double area = 0.0;
  for (std::size_t i = 0; i < staircase.size(); ++i) {
    const double next = i + 1 < staircase.size() ? staircase[i + 1].error : ref.error;
    area += (next - staircase[i].error) * (ref.ratio - staircase[i].ratio);
  }
  return area;
}

double hypervolume_2d(std::span<const Individual> front, const ObjectiveVector& ref) {
  const auto objectives = objectives_of(front);
  return hypervolume_2d(std::span<const ObjectiveVector>(objectives), ref);
}

void HvTrajectory::record(std::size_t evals, std::span<const Individual> front,
                          const ObjectiveVector& ref) {
  record(evals, hypervolume_2d(front, ref));
}

void HvTrajectory::record(std::size_t evals, double hv) {
  if (!points_.empty() && evals <= points_.back().evals) {
    throw std::invalid_argument("HvTrajectory: evaluation counts must strictly increase");
  }
  points_.push_back({evals, hv});
}

double HvTrajectory::hv_at(std::size_t evals) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), evals,
                             [](std::size_t e, const HvPoint& p) { return e < p.evals; });
  if (it == points_.begin()) return 0.0;
  return std::prev(it)->hv;
}

}  // namespace cnsga
