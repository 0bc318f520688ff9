#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cnsga/compact_nsga2.hpp"
#include "cnsga/dataset.hpp"
#include "cnsga/feature_selection.hpp"
#include "cnsga/nsga2.hpp"
#include "cnsga/run_record.hpp"

namespace cnsga::harness {

enum class Algorithm { nsga2, cnsga2 };
enum class AlgorithmChoice { nsga2, cnsga2, both };

std::string_view name_of(Algorithm algorithm);
std::string_view name_of(AlgorithmChoice choice);
// Accepts "nsga2", "cnsga2" or "both"; throws std::invalid_argument otherwise.
AlgorithmChoice parse_algorithm_choice(std::string_view text);
std::vector<Algorithm> algorithms_of(AlgorithmChoice choice);

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // Exactly one of the two sources is used; the CSV wins when both are set.
  std::optional<std::filesystem::path> dataset_csv;
  std::optional<fs::SyntheticSpec> synthetic;

  AlgorithmChoice algorithm = AlgorithmChoice::both;
  std::size_t runs = 10;
  std::size_t nfc = 10000;
  std::size_t knn_k = 5;
  double test_fraction = 0.2;
  bool leave_one_out = true;
  bool normalize = false;
  compact::CnsgaConfig cnsga;  // nfc_budget is taken from `nfc`
  nsga2::Nsga2Config nsga2;    // nfc_budget is taken from `nfc`
  std::uint64_t base_seed = 1;
  std::filesystem::path out_dir;  // empty: nothing is written
  std::size_t workers = 1;

  // Throws std::invalid_argument describing the first bad field.
  void validate() const;

  std::uint64_t seed_for_run(std::size_t run) const { return base_seed + run; }
};

// Configuration echo written to aggregate.json. Leaves out the output
// directory and worker count, which do not affect results.
nlohmann::json config_to_json(const ExperimentConfig& config);

std::shared_ptr<const fs::Dataset> load_data(const ExperimentConfig& config);

// Train/test split and wrapped problem for one run index.
fs::FsProblem make_problem(std::shared_ptr<const fs::Dataset> data, const ExperimentConfig& config,
                           std::size_t run);

// Optimizes on the training rows only.
RunRecord optimize(const fs::FsProblem& problem, Algorithm algorithm,
                   const ExperimentConfig& config, std::uint64_t seed);

// A front re-evaluated on held-out rows.
struct AssessedPoint {
  double train_error = 0.0;
  double ratio = 0.0;
  double test_error = 0.0;
  std::string genome;
};

struct Assessment {
  std::vector<AssessedPoint> final_front;
  std::vector<AssessedPoint> initial_front;
  double final_train_hv = 0.0;
  double final_test_hv = 0.0;
  double initial_test_hv = 0.0;
  double min_train_error = 0.0;
  double mean_feature_ratio = 0.0;
};

// First and only place test rows are read.
Assessment assess(const fs::FsProblem& problem, const RunRecord& record);

// Metrics derivable from assessed fronts alone.
Assessment summarize(std::vector<AssessedPoint> final_front,
                     std::vector<AssessedPoint> initial_front);

struct RunOutcome {
  std::size_t run = 0;
  Algorithm algorithm = Algorithm::cnsga2;
  RunRecord record;
  Assessment assessment;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single run

  friend bool operator==(const MeanStd&, const MeanStd&) = default;
};

MeanStd mean_std(std::span<const double> values);

struct AlgorithmSummary {
  std::string algorithm;
  std::size_t runs = 0;
  MeanStd final_train_hv;
  MeanStd final_test_hv;
  MeanStd initial_test_hv;
  MeanStd min_train_error;
  MeanStd mean_feature_ratio;

  friend bool operator==(const AlgorithmSummary&, const AlgorithmSummary&) = default;
};

struct AggregateReport {
  std::vector<AlgorithmSummary> algorithms;

  const AlgorithmSummary* find(std::string_view algorithm) const;

  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

void to_json(nlohmann::json& j, const MeanStd& v);
void from_json(const nlohmann::json& j, MeanStd& v);
void to_json(nlohmann::json& j, const AlgorithmSummary& v);
void from_json(const nlohmann::json& j, AlgorithmSummary& v);
void to_json(nlohmann::json& j, const AggregateReport& v);
void from_json(const nlohmann::json& j, AggregateReport& v);

// Outcomes must be ordered by (run, algorithm).
AggregateReport aggregate(std::span<const RunOutcome> outcomes);

struct ExperimentResult {
  AggregateReport report;
  std::vector<RunOutcome> outcomes;  // ordered by (run, algorithm)
};

// Every run of every configured algorithm. When out_dir is set, per-run files
// are written as runs finish and aggregate.json once all have joined. If a
// run fails, completed artifacts stay on disk, status.json records what
// finished, and ExperimentError is thrown.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Artifact names.
std::filesystem::path trajectory_path(const std::filesystem::path& dir, std::size_t run,
                                      Algorithm algorithm);
std::filesystem::path front_path(const std::filesystem::path& dir, std::size_t run,
                                 Algorithm algorithm);
std::filesystem::path initial_front_path(const std::filesystem::path& dir, std::size_t run,
                                         Algorithm algorithm);

// Writers; all throw ExperimentError naming the path on I/O failure.
void write_trajectory_csv(const std::filesystem::path& path, const HvTrajectory& trajectory);
void write_front_csv(const std::filesystem::path& path, std::span<const AssessedPoint> front);
void emit_run(const std::filesystem::path& dir, const RunOutcome& outcome);
void emit_aggregate(const std::filesystem::path& dir, const ExperimentConfig& config,
                    const AggregateReport& report);

// Readers for emitted artifacts.
HvTrajectory read_trajectory_csv(const std::filesystem::path& path);
std::vector<AssessedPoint> read_front_csv(const std::filesystem::path& path);
AggregateReport read_aggregate(const std::filesystem::path& dir);

// Recomputes the aggregate from the per-run front files in `dir`.
AggregateReport aggregate_from_files(const std::filesystem::path& dir,
                                     const ExperimentConfig& config);

struct SweepResult {
  std::vector<double> step_sizes;
  std::vector<ExperimentResult> experiments;  // one per step size
};

// One CNSGA-II experiment per step size. With out_dir set, each lands in
// step_<i>/ and the run-averaged trajectories are written as
// stepsize_<i>_hv.csv plus a side-by-side stepsize_sweep.csv.
// Throws std::invalid_argument for an empty list.
SweepResult stepsize_sweep(const ExperimentConfig& config, std::span<const double> step_sizes);

}  // namespace cnsga::harness
