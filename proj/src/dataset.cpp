#include "cnsga/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <fmt/core.h>

#include "cnsga/random.hpp"

namespace cnsga::fs {

void Dataset::validate() const {
  if (values.size() != rows * features || labels.size() != rows) {
    throw DatasetError(fmt::format("dataset '{}': shape does not match its storage", name));
  }
  if (rows < 2) throw DatasetError(fmt::format("dataset '{}': needs at least 2 rows", name));
  if (num_classes < 2) {
    throw DatasetError(fmt::format("dataset '{}': needs at least 2 classes", name));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw DatasetError(fmt::format("dataset '{}': row {} has label {} outside [0, {})", name,
                                     i, labels[i], num_classes));
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DatasetError(fmt::format("dataset '{}': non-finite value", name));
  }
}

DatasetView::DatasetView(std::shared_ptr<const Dataset> data, std::vector<std::size_t> rows,
                         std::shared_ptr<AccessCounter> counter)
    : data_(std::move(data)), rows_(std::move(rows)), counter_(std::move(counter)) {
  for (auto r : rows_) {
    if (r >= data_->rows) throw std::out_of_range("DatasetView: row index out of range");
  }
}

DatasetView DatasetView::all(std::shared_ptr<const Dataset> data) {
  std::vector<std::size_t> rows(data->rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return DatasetView(std::move(data), std::move(rows));
}

std::pair<DatasetView, DatasetView> split(std::shared_ptr<const Dataset> data,
                                          const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw std::invalid_argument("test fraction must lie in (0, 1)");
  }
  const std::size_t n = data->rows;
  if (n < 5) throw DatasetError(fmt::format("dataset '{}': split needs at least 5 rows", data->name));
  const auto num_test =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.test_fraction));
  if (num_test == 0 || num_test >= n) {
    throw DatasetError(fmt::format("split of {} rows at fraction {} leaves an empty side", n,
                                   spec.test_fraction));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(num_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(num_test), order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {DatasetView(data, std::move(train)), DatasetView(data, std::move(test))};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(const std::string& text, std::string name) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  {
    std::string_view rest(text);
    std::size_t line_no = 0;
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      auto line = rest.substr(0, nl);
      ++line_no;
      if (!trim(line).empty()) lines.emplace_back(line_no, line);
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  if (lines.empty()) throw DatasetError(fmt::format("{}: no data rows", name));

  std::size_t first = 0;
  {
    double ignored = 0.0;
    const auto cells = split_cells(lines.front().second);
    const bool header = std::any_of(cells.begin(), cells.end(),
                                    [&](std::string_view c) { return !parse_number(c, ignored); });
    if (header) first = 1;
  }
  if (lines.size() <= first) throw DatasetError(fmt::format("{}: no data rows", name));

  const std::size_t width = split_cells(lines[first].second).size();
  if (width < 2) {
    throw DatasetError(fmt::format("{}: need at least one feature column and a label column", name));
  }

  Dataset data;
  data.name = std::move(name);
  data.features = width - 1;
  std::vector<double> raw_labels;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto [line_no, line] = lines[i];
    const auto cells = split_cells(line);
    if (cells.size() != width) {
      throw DatasetError(fmt::format("{}: row {} has {} cells, expected {}", data.name, line_no,
                                     cells.size(), width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      double v = 0.0;
      if (cells[c].empty()) {
        throw DatasetError(fmt::format("{}: row {} column {} is empty", data.name, line_no, c + 1));
      }
      if (!parse_number(cells[c], v)) {
        throw DatasetError(fmt::format("{}: row {} column {} is not numeric: '{}'", data.name,
                                       line_no, c + 1, cells[c]));
      }
      if (c + 1 < width) {
        data.values.push_back(v);
      } else {
        if (v != std::floor(v)) {
          throw DatasetError(fmt::format("{}: row {} label '{}' is not an integer", data.name,
                                         line_no, cells[c]));
        }
        raw_labels.push_back(v);
      }
    }
  }
  data.rows = raw_labels.size();

  std::map<double, int> label_ids;
  for (double l : raw_labels) label_ids.emplace(l, 0);
  if (label_ids.size() < 2) throw DatasetError(fmt::format("{}: only one class present", data.name));
  int next = 0;
  for (auto& [value, id] : label_ids) id = next++;
  data.num_classes = next;
  data.labels.reserve(raw_labels.size());
  for (double l : raw_labels) data.labels.push_back(label_ids.at(l));

  data.validate();
  return data;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(fmt::format("cannot open dataset '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path.stem().string());
}

std::vector<std::size_t> synthetic_relevant_features(const SyntheticSpec& spec) {
  if (spec.relevant > spec.features) {
    throw std::invalid_argument("more relevant features than features");
  }
  std::vector<std::size_t> positions(spec.features);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
  for (std::size_t i = 0; i < spec.relevant; ++i) {
    std::swap(positions[i], positions[i + rng.below(spec.features - i)]);
  }
  positions.resize(spec.relevant);
  std::sort(positions.begin(), positions.end());
  return positions;
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (!(spec.gap > 0.0)) throw std::invalid_argument("class gap must be positive");
  if (spec.classes < 2) throw std::invalid_argument("need at least two classes");
  if (spec.per_class < 1) throw std::invalid_argument("need at least one row per class");
  const auto relevant = synthetic_relevant_features(spec);
  std::vector<bool> is_relevant(spec.features, false);
  for (auto f : relevant) is_relevant[f] = true;

  Dataset data;
  data.name = fmt::format("synthetic_d{}_r{}_c{}_n{}", spec.features, spec.relevant, spec.classes,
                          spec.per_class);
  data.features = spec.features;
  data.rows = spec.classes * spec.per_class;
  data.num_classes = static_cast<int>(spec.classes);
  data.values.reserve(data.rows * data.features);
  data.labels.reserve(data.rows);

  const double jitter = spec.gap / 5.0;
  Rng rng(spec.seed);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    const double center = static_cast<double>(c) * spec.gap;
    for (std::size_t i = 0; i < spec.per_class; ++i) {
      for (std::size_t f = 0; f < spec.features; ++f) {
        const double u = rng.uniform01();
        data.values.push_back(is_relevant[f] ? center + (2.0 * u - 1.0) * jitter
                                             : u * spec.noise_amp);
      }
      data.labels.push_back(static_cast<int>(c));
    }
  }
  data.validate();
  return data;
}

}  // namespace cnsga::fs
