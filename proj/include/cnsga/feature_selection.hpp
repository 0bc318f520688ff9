#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cnsga/dataset.hpp"
#include "cnsga/moo.hpp"
#include "cnsga/problem.hpp"

namespace cnsga::fs {

// Majority label among the k nearest rows of `train` to `query`, Euclidean
// distance over the features selected by `mask`. Distance ties go to the
// lower row index; vote ties to the class with the smaller summed distance,
// then the lower label. `exclude` removes one train row from consideration.
// Throws std::invalid_argument if the mask selects nothing, lengths differ,
// or fewer than k rows are eligible.
int knn_classify(std::span<const double> query, const DatasetView& train, const Genome& mask,
                 std::size_t k, std::optional<std::size_t> exclude = std::nullopt);

struct FsOptions {
  std::size_t k = 5;
  // Training error excludes each row from its own neighbour list.
  bool leave_one_out = true;
  // Min-max scale every feature with ranges fitted on the training rows.
  bool normalize = false;
};

// Wrapper feature selection: minimize (k-NN error, selected-feature ratio).
// evaluate() is the training-set objective used during optimization; the
// test rows are only read by evaluate_test().
class FsProblem final : public Problem {
 public:
  // Throws std::invalid_argument if the views disagree on feature count or
  // k is not in [1, |train| - 1].
  FsProblem(DatasetView train, DatasetView test, FsOptions options);

  std::size_t dimension() const override { return features_; }
  ObjectiveVector evaluate(const Genome& genome) const override { return evaluate_train(genome); }

  ObjectiveVector evaluate_train(const Genome& genome) const;
  ObjectiveVector evaluate_test(const Genome& genome) const;

  const DatasetView& train() const { return train_; }
  const DatasetView& test() const { return test_; }
  const FsOptions& options() const { return options_; }

 private:
  // Labels predicted for `queries` (a feature-major block) against the
  // cached training block.
  std::vector<int> predict(std::span<const double> queries, std::size_t num_queries,
                           const Genome& mask) const;
  double ratio(const Genome& genome) const;
  void check_length(const Genome& genome) const;

  DatasetView train_;
  DatasetView test_;
  FsOptions options_;
  std::size_t features_ = 0;
  std::size_t num_classes_ = 0;
  std::vector<double> train_columns_;  // feature-major copy of train rows
  std::vector<int> train_labels_;
  std::vector<double> offset_;  // per-feature scaling, identity unless normalized
  std::vector<double> scale_;
};

}  // namespace cnsga::fs
