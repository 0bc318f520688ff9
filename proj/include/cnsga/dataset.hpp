#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cnsga::fs {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense labelled table: rows x features, labels remapped to [0, num_classes).
struct Dataset {
  std::string name;
  std::size_t rows = 0;
  std::size_t features = 0;
  std::vector<double> values;  // row-major
  std::vector<int> labels;
  int num_classes = 0;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * features, features};
  }

  // Throws DatasetError when shapes disagree, a label is outside
  // [0, num_classes), there are fewer than two classes or rows, or a value
  // is not finite.
  void validate() const;
};

// Counts row reads through a view. Used to prove which partition an
// operation touched.
struct AccessCounter {
  std::atomic<std::size_t> reads{0};
};

// A subset of a dataset's rows, in a fixed order.
class DatasetView {
 public:
  DatasetView() = default;
  DatasetView(std::shared_ptr<const Dataset> data, std::vector<std::size_t> rows,
              std::shared_ptr<AccessCounter> counter = nullptr);

  // View over every row.
  static DatasetView all(std::shared_ptr<const Dataset> data);

  std::size_t size() const { return rows_.size(); }
  std::size_t features() const { return data_ ? data_->features : 0; }
  int num_classes() const { return data_ ? data_->num_classes : 0; }

  std::span<const double> row(std::size_t i) const {
    touch();
    return data_->row(rows_[i]);
  }
  int label(std::size_t i) const {
    touch();
    return data_->labels[rows_[i]];
  }

  const std::vector<std::size_t>& indices() const { return rows_; }
  const std::shared_ptr<const Dataset>& dataset() const { return data_; }

  void attach_counter(std::shared_ptr<AccessCounter> counter) { counter_ = std::move(counter); }

 private:
  void touch() const {
    if (counter_) counter_->reads.fetch_add(1, std::memory_order_relaxed);
  }

  std::shared_ptr<const Dataset> data_;
  std::vector<std::size_t> rows_;
  std::shared_ptr<AccessCounter> counter_;
};

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

// Seeded random partition into (train, test). The test side holds
// round(rows * test_fraction) rows; each side keeps dataset row order.
// Throws DatasetError for fewer than 5 rows or an empty side, and
// std::invalid_argument for a fraction outside (0, 1).
std::pair<DatasetView, DatasetView> split(std::shared_ptr<const Dataset> data,
                                          const SplitSpec& spec);

// Comma-separated numeric table, last column the class label. A first row
// with any non-numeric cell is taken as a header. Distinct label values are
// mapped to 0..C-1 in ascending order.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(const std::string& text, std::string name = "csv");

struct SyntheticSpec {
  std::size_t features = 200;
  std::size_t relevant = 10;
  std::size_t per_class = 25;
  std::size_t classes = 4;
  double gap = 1.0;        // spacing between class centers on relevant features
  double noise_amp = 2.0;  // irrelevant features are uniform in [0, noise_amp)
  std::uint64_t seed = 0;
};

// Planted-relevance data. On each relevant feature a class-c row holds
// c * gap plus uniform jitter in [-gap/5, gap/5]; every other feature is
// label-free noise. Relevant positions are scattered by the seed; rows are
// grouped by class. Throws std::invalid_argument if relevant > features,
// gap <= 0 or fewer than two classes.
Dataset make_synthetic(const SyntheticSpec& spec);

// Sorted positions of the relevant features make_synthetic(spec) plants.
std::vector<std::size_t> synthetic_relevant_features(const SyntheticSpec& spec);

}  // namespace cnsga::fs
