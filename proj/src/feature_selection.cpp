#include "cnsga/feature_selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cnsga::fs {

namespace {

struct Neighbor {
  double distance;
  std::size_t row;
};

// Majority vote over the k nearest candidates; reorders `candidates`.
int vote(std::vector<Neighbor>& candidates, std::span<const int> labels, std::size_t k,
         std::size_t num_classes, std::vector<std::size_t>& counts, std::vector<double>& sums) {
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.row < b.row;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), closer);

  counts.assign(num_classes, 0);
  sums.assign(num_classes, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto label = static_cast<std::size_t>(labels[candidates[i].row]);
    ++counts[label];
    sums[label] += candidates[i].distance;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < num_classes; ++c) {
    if (counts[c] > counts[best] || (counts[c] == counts[best] && counts[c] > 0 && sums[c] < sums[best])) {
      best = c;
    }
  }
  return static_cast<int>(best);
}

std::vector<std::size_t> selected_features(const Genome& mask) {
  std::vector<std::size_t> selected;
  for (std::size_t f = 0; f < mask.size(); ++f) {
    if (mask[f]) selected.push_back(f);
  }
  return selected;
}

}  // namespace

int knn_classify(std::span<const double> query, const DatasetView& train, const Genome& mask,
                 std::size_t k, std::optional<std::size_t> exclude) {
  if (query.size() != train.features() || mask.size() != train.features()) {
    throw std::invalid_argument("knn_classify: query, mask and data lengths differ");
  }
  const auto selected = selected_features(mask);
  if (selected.empty()) throw std::invalid_argument("knn_classify: mask selects no features");
  if (k < 1) throw std::invalid_argument("knn_classify: k must be positive");

  std::vector<Neighbor> candidates;
  std::vector<int> labels(train.size());
  candidates.reserve(train.size());
  for (std::size_t j = 0; j < train.size(); ++j) {
    labels[j] = train.label(j);
    if (exclude && *exclude == j) continue;
    const auto row = train.row(j);
    double acc = 0.0;
    for (auto f : selected) {
      const double diff = query[f] - row[f];
      acc += diff * diff;
    }
    candidates.push_back({std::sqrt(acc), j});
  }
  if (candidates.size() < k) throw std::invalid_argument("knn_classify: fewer than k eligible rows");

  std::vector<std::size_t> counts;
  std::vector<double> sums;
  return vote(candidates, labels, k, static_cast<std::size_t>(train.num_classes()), counts, sums);
}

FsProblem::FsProblem(DatasetView train, DatasetView test, FsOptions options)
    : train_(std::move(train)), test_(std::move(test)), options_(options) {
  features_ = train_.features();
  if (test_.size() > 0 && test_.features() != features_) {
    throw std::invalid_argument("train and test views disagree on the feature count");
  }
  if (options_.k < 1 || options_.k >= train_.size()) {
    throw std::invalid_argument("k must lie in [1, training rows - 1]");
  }
  num_classes_ = static_cast<std::size_t>(train_.num_classes());

  const std::size_t n = train_.size();
  offset_.assign(features_, 0.0);
  scale_.assign(features_, 1.0);
  train_columns_.resize(n * features_);
  train_labels_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = train_.row(i);
    for (std::size_t f = 0; f < features_; ++f) train_columns_[f * n + i] = row[f];
    train_labels_[i] = train_.label(i);
  }

  if (options_.normalize) {
    for (std::size_t f = 0; f < features_; ++f) {
      const auto column = std::span<double>(train_columns_).subspan(f * n, n);
      const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
      offset_[f] = *lo;
      scale_[f] = *hi > *lo ? 1.0 / (*hi - *lo) : 0.0;
      for (double& v : column) v = (v - offset_[f]) * scale_[f];
    }
  }
}

void FsProblem::check_length(const Genome& genome) const {
  if (genome.size() != features_) {
    throw std::invalid_argument("genome length does not match the feature count");
  }
}

double FsProblem::ratio(const Genome& genome) const {
  return static_cast<double>(genome.count()) / static_cast<double>(features_);
}

std::vector<int> FsProblem::predict(std::span<const double> queries, std::size_t num_queries,
                                    const Genome& mask) const {
  const std::size_t n = train_labels_.size();
  const auto selected = selected_features(mask);

  std::vector<int> predicted(num_queries);
  std::vector<double> acc(n);
  std::vector<Neighbor> candidates;
  candidates.reserve(n);
  std::vector<std::size_t> counts;
  std::vector<double> sums;
  for (std::size_t q = 0; q < num_queries; ++q) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (auto f : selected) {
      const double value = queries[f * num_queries + q];
      const double* column = train_columns_.data() + f * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double diff = value - column[j];
        acc[j] += diff * diff;
      }
    }
    candidates.clear();
    for (std::size_t j = 0; j < n; ++j) {
      candidates.push_back({std::sqrt(acc[j]), j});
    }
    predicted[q] = vote(candidates, train_labels_, options_.k, num_classes_, counts, sums);
  }
  return predicted;
}

ObjectiveVector FsProblem::evaluate_train(const Genome& genome) const {
  check_length(genome);
  if (genome.none()) return {1.0, 0.0};
  const std::size_t n = train_labels_.size();
  const auto selected = selected_features(genome);

  // Squared distances for j > i, accumulated feature by feature; the
  // per-pair summation order matches knn_classify exactly.
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double* acc = dist.data() + i * n;
    for (auto f : selected) {
      const double* column = train_columns_.data() + f * n;
      const double value = column[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        const double diff = value - column[j];
        acc[j] += diff * diff;
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      acc[j] = std::sqrt(acc[j]);
      dist[j * n + i] = acc[j];
    }
  }

  std::vector<Neighbor> candidates;
  candidates.reserve(n);
  std::vector<std::size_t> counts;
  std::vector<double> sums;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n; ++i) {
    candidates.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (options_.leave_one_out && j == i) continue;
      candidates.push_back({dist[i * n + j], j});
    }
    wrong += vote(candidates, train_labels_, options_.k, num_classes_, counts, sums) != train_labels_[i];
  }
  return {static_cast<double>(wrong) / static_cast<double>(n), ratio(genome)};
}

ObjectiveVector FsProblem::evaluate_test(const Genome& genome) const {
  check_length(genome);
  if (genome.none()) return {1.0, 0.0};
  const std::size_t m = test_.size();
  if (m == 0) throw std::logic_error("evaluate_test: problem has no test rows");

  std::vector<double> queries(m * features_);
  std::vector<int> labels(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = test_.row(i);
    for (std::size_t f = 0; f < features_; ++f) {
      queries[f * m + i] = options_.normalize ? (row[f] - offset_[f]) * scale_[f] : row[f];
    }
    labels[i] = test_.label(i);
  }
  const auto predicted = predict(queries, m, genome);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < m; ++i) wrong += predicted[i] != labels[i];
  return {static_cast<double>(wrong) / static_cast<double>(m), ratio(genome)};
}

}  // namespace cnsga::fs
