#include "cnsga/moo.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace cnsga {

Genome Genome::from_string(std::string_view bits) {
  Genome g(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] != '0' && bits[k] != '1') {
      throw std::invalid_argument("genome string may contain only '0' and '1'");
    }
    g.set(k, bits[k] == '1');
  }
  return g;
}

std::size_t Genome::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string Genome::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) s[k] = '1';
  }
  return s;
}

std::size_t hamming(const Genome& a, const Genome& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming: genome lengths differ");
  }
  std::size_t d = 0;
  const auto& x = a.bits();
  const auto& y = b.bits();
  for (std::size_t k = 0; k < x.size(); ++k) d += (x[k] != y[k]);
  return d;
}

std::size_t GenomeHash::operator()(const Genome& g) const noexcept {
  // FNV-1a over the bit bytes.
  std::size_t h = 1469598103934665603ull;
  for (auto b : g.bits()) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h ^ g.size();
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return a.error <= b.error && a.ratio <= b.ratio && (a.error < b.error || a.ratio < b.ratio);
}

std::vector<std::size_t> non_dominated_ranks(std::span<const ObjectiveVector> objectives) {
  const std::size_t n = objectives.size();
  std::vector<std::size_t> rank(n, 0);
  std::vector<std::size_t> dominated_by_count(n, 0);
  std::vector<std::vector<std::size_t>> dominated_set(n);

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(objectives[p], objectives[q])) {
        dominated_set[p].push_back(q);
        ++dominated_by_count[q];
      } else if (dominates(objectives[q], objectives[p])) {
        dominated_set[q].push_back(p);
        ++dominated_by_count[p];
      }
    }
  }

  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    if (dominated_by_count[p] == 0) current.push_back(p);
  }
  std::size_t level = 0;
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (auto p : current) {
      rank[p] = level;
      for (auto q : dominated_set[p]) {
        if (--dominated_by_count[q] == 0) next.push_back(q);
      }
    }
    current = std::move(next);
    ++level;
  }
  return rank;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), kInfiniteCrowding);
    return distance;
  }

  std::vector<std::size_t> order(n);
  auto accumulate_objective = [&](auto value_of) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return value_of(front[a]) < value_of(front[b]);
    });
    distance[order.front()] = kInfiniteCrowding;
    distance[order.back()] = kInfiniteCrowding;
    const double range = value_of(front[order.back()]) - value_of(front[order.front()]);
    if (range <= 0.0) return;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      distance[order[i]] += (value_of(front[order[i + 1]]) - value_of(front[order[i - 1]])) / range;
    }
  };
  accumulate_objective([](const ObjectiveVector& v) { return v.error; });
  accumulate_objective([](const ObjectiveVector& v) { return v.ratio; });
  return distance;
}

std::vector<Individual> RankedPopulation::pareto_front() const {
  std::vector<Individual> front;
  if (fronts.empty()) return front;
  front.reserve(fronts.front().size());
  for (auto i : fronts.front()) front.push_back(members[i]);
  return front;
}

RankedPopulation non_dominated_sort(std::vector<Individual> population) {
  RankedPopulation ranked;
  ranked.members = std::move(population);
  const auto objectives = objectives_of(ranked.members);
  ranked.rank = non_dominated_ranks(objectives);
  ranked.crowding.assign(ranked.members.size(), 0.0);

  std::size_t levels = 0;
  for (auto r : ranked.rank) levels = std::max(levels, r + 1);
  ranked.fronts.resize(levels);
  for (std::size_t i = 0; i < ranked.rank.size(); ++i) ranked.fronts[ranked.rank[i]].push_back(i);

  std::vector<ObjectiveVector> front_objectives;
  for (const auto& front : ranked.fronts) {
    front_objectives.clear();
    for (auto i : front) front_objectives.push_back(objectives[i]);
    const auto distance = crowding_distance(front_objectives);
    for (std::size_t j = 0; j < front.size(); ++j) ranked.crowding[front[j]] = distance[j];
  }
  return ranked;
}

std::vector<std::size_t> best_order(const RankedPopulation& pop) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pop.rank[a] != pop.rank[b]) return pop.rank[a] < pop.rank[b];
    if (pop.crowding[a] != pop.crowding[b]) return pop.crowding[a] > pop.crowding[b];
    return a < b;
  });
  return order;
}

std::vector<Individual> select_best(const RankedPopulation& pop, std::size_t n) {
  auto order = best_order(pop);
  if (order.size() > n) order.resize(n);
  std::vector<Individual> best;
  best.reserve(order.size());
  for (auto i : order) best.push_back(pop.members[i]);
  return best;
}

std::vector<Individual> deduplicate(std::vector<Individual> population) {
  std::unordered_set<Genome, GenomeHash> seen;
  seen.reserve(population.size());
  std::vector<Individual> unique;
  unique.reserve(population.size());
  for (auto& ind : population) {
    if (seen.insert(ind.genome).second) unique.push_back(std::move(ind));
  }
  return unique;
}

std::vector<ObjectiveVector> objectives_of(std::span<const Individual> population) {
  std::vector<ObjectiveVector> out;
  out.reserve(population.size());
  for (const auto& ind : population) out.push_back(ind.objectives);
  return out;
}

}  // namespace cnsga
