#include "cnsga/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "cnsga/hypervolume.hpp"

namespace cnsga::harness {

namespace fsys = std::filesystem;

std::string_view name_of(Algorithm algorithm) {
  return algorithm == Algorithm::nsga2 ? "nsga2" : "cnsga2";
}

std::string_view name_of(AlgorithmChoice choice) {
  switch (choice) {
    case AlgorithmChoice::nsga2: return "nsga2";
    case AlgorithmChoice::cnsga2: return "cnsga2";
    case AlgorithmChoice::both: return "both";
  }
  return "both";
}

AlgorithmChoice parse_algorithm_choice(std::string_view text) {
  if (text == "nsga2") return AlgorithmChoice::nsga2;
  if (text == "cnsga2") return AlgorithmChoice::cnsga2;
  if (text == "both") return AlgorithmChoice::both;
  throw std::invalid_argument(fmt::format("unknown algorithm '{}' (nsga2, cnsga2 or both)", text));
}

std::vector<Algorithm> algorithms_of(AlgorithmChoice choice) {
  switch (choice) {
    case AlgorithmChoice::nsga2: return {Algorithm::nsga2};
    case AlgorithmChoice::cnsga2: return {Algorithm::cnsga2};
    case AlgorithmChoice::both: return {Algorithm::cnsga2, Algorithm::nsga2};
  }
  return {};
}

void ExperimentConfig::validate() const {
  if (!dataset_csv && !synthetic) throw std::invalid_argument("no dataset source configured");
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (knn_k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test fraction must lie in (0, 1)");
  }
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  for (auto algorithm : algorithms_of(this->algorithm)) {
    if (algorithm == Algorithm::cnsga2) {
      auto c = cnsga;
      c.nfc_budget = nfc;
      c.validate();
      if (nfc < c.num_pvs) throw std::invalid_argument("nfc is smaller than the number of PVs");
    } else {
      auto c = nsga2;
      c.nfc_budget = nfc;
      c.validate();
    }
  }
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  if (config.dataset_csv) {
    j["dataset"] = {{"csv", config.dataset_csv->generic_string()}};
  } else if (config.synthetic) {
    const auto& s = *config.synthetic;
    j["dataset"] = {{"synthetic",
                     {{"features", s.features},
                      {"relevant", s.relevant},
                      {"classes", s.classes},
                      {"per_class", s.per_class},
                      {"gap", s.gap},
                      {"noise_amp", s.noise_amp},
                      {"seed", s.seed}}}};
  }
  j["algorithm"] = name_of(config.algorithm);
  j["runs"] = config.runs;
  j["nfc"] = config.nfc;
  j["k"] = config.knn_k;
  j["test_fraction"] = config.test_fraction;
  j["leave_one_out"] = config.leave_one_out;
  j["normalize"] = config.normalize;
  j["base_seed"] = config.base_seed;
  j["cnsga2"] = {{"num_pvs", config.cnsga.num_pvs},
                 {"step_size", config.cnsga.step_size},
                 {"min_boundary", config.cnsga.min_boundary},
                 {"max_pop_size", config.cnsga.max_pop_size},
                 {"max_iterations", config.cnsga.max_iterations
                                        ? nlohmann::json(*config.cnsga.max_iterations)
                                        : nlohmann::json()}};
  j["nsga2"] = {{"pop_size", config.nsga2.pop_size},
                {"crossover_prob", config.nsga2.crossover_prob},
                {"mutation_prob", config.nsga2.mutation_prob
                                      ? nlohmann::json(*config.nsga2.mutation_prob)
                                      : nlohmann::json()}};
  return j;
}

std::shared_ptr<const fs::Dataset> load_data(const ExperimentConfig& config) {
  if (config.dataset_csv) return std::make_shared<const fs::Dataset>(fs::load_csv(*config.dataset_csv));
  if (config.synthetic) return std::make_shared<const fs::Dataset>(fs::make_synthetic(*config.synthetic));
  throw std::invalid_argument("no dataset source configured");
}

fs::FsProblem make_problem(std::shared_ptr<const fs::Dataset> data, const ExperimentConfig& config,
                           std::size_t run) {
  auto [train, test] = fs::split(std::move(data), {config.test_fraction, config.seed_for_run(run)});
  return fs::FsProblem(std::move(train), std::move(test),
                       {config.knn_k, config.leave_one_out, config.normalize});
}

namespace {

// splitmix64 finalizer; decorrelates the optimizer stream from the split.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

RunRecord optimize(const fs::FsProblem& problem, Algorithm algorithm,
                   const ExperimentConfig& config, std::uint64_t seed) {
  const std::uint64_t algorithm_seed = mix_seed(seed);
  if (algorithm == Algorithm::cnsga2) {
    auto c = config.cnsga;
    c.nfc_budget = config.nfc;
    return compact::run(c, problem, algorithm_seed);
  }
  auto c = config.nsga2;
  c.nfc_budget = config.nfc;
  return nsga2::run(c, problem, algorithm_seed);
}

namespace {

std::vector<AssessedPoint> assess_front(const fs::FsProblem& problem,
                                        std::span<const Individual> front) {
  std::vector<AssessedPoint> points;
  points.reserve(front.size());
  for (const auto& ind : front) {
    const auto test = problem.evaluate_test(ind.genome);
    points.push_back({ind.objectives.error, ind.objectives.ratio, test.error, ind.genome.to_string()});
  }
  return points;
}

double hv_of(std::span<const AssessedPoint> points, bool test) {
  std::vector<ObjectiveVector> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back({test ? p.test_error : p.train_error, p.ratio});
  return hypervolume_2d(std::span<const ObjectiveVector>(v));
}

}  // namespace

Assessment summarize(std::vector<AssessedPoint> final_front,
                     std::vector<AssessedPoint> initial_front) {
  Assessment a;
  a.final_train_hv = hv_of(final_front, false);
  a.final_test_hv = hv_of(final_front, true);
  a.initial_test_hv = hv_of(initial_front, true);
  if (!final_front.empty()) {
    a.min_train_error = final_front.front().train_error;
    double ratio_sum = 0.0;
    for (const auto& p : final_front) {
      a.min_train_error = std::min(a.min_train_error, p.train_error);
      ratio_sum += p.ratio;
    }
    a.mean_feature_ratio = ratio_sum / static_cast<double>(final_front.size());
  }
  a.final_front = std::move(final_front);
  a.initial_front = std::move(initial_front);
  return a;
}

Assessment assess(const fs::FsProblem& problem, const RunRecord& record) {
  return summarize(assess_front(problem, record.final_front),
                   assess_front(problem, record.initial_front));
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

const AlgorithmSummary* AggregateReport::find(std::string_view algorithm) const {
  for (const auto& a : algorithms) {
    if (a.algorithm == algorithm) return &a;
  }
  return nullptr;
}

void to_json(nlohmann::json& j, const MeanStd& v) { j = {{"mean", v.mean}, {"std", v.std}}; }

void from_json(const nlohmann::json& j, MeanStd& v) {
  j.at("mean").get_to(v.mean);
  j.at("std").get_to(v.std);
}

void to_json(nlohmann::json& j, const AlgorithmSummary& v) {
  j = {{"algorithm", v.algorithm},
       {"runs", v.runs},
       {"final_train_hv", v.final_train_hv},
       {"final_test_hv", v.final_test_hv},
       {"initial_test_hv", v.initial_test_hv},
       {"min_train_error", v.min_train_error},
       {"mean_feature_ratio", v.mean_feature_ratio}};
}

void from_json(const nlohmann::json& j, AlgorithmSummary& v) {
  j.at("algorithm").get_to(v.algorithm);
  j.at("runs").get_to(v.runs);
  j.at("final_train_hv").get_to(v.final_train_hv);
  j.at("final_test_hv").get_to(v.final_test_hv);
  j.at("initial_test_hv").get_to(v.initial_test_hv);
  j.at("min_train_error").get_to(v.min_train_error);
  j.at("mean_feature_ratio").get_to(v.mean_feature_ratio);
}

void to_json(nlohmann::json& j, const AggregateReport& v) { j = {{"algorithms", v.algorithms}}; }

void from_json(const nlohmann::json& j, AggregateReport& v) { j.at("algorithms").get_to(v.algorithms); }

AggregateReport aggregate(std::span<const RunOutcome> outcomes) {
  std::vector<Algorithm> order;
  for (const auto& o : outcomes) {
    if (std::find(order.begin(), order.end(), o.algorithm) == order.end()) order.push_back(o.algorithm);
  }
  AggregateReport report;
  for (auto algorithm : order) {
    std::vector<double> train_hv, test_hv, initial_hv, min_error, ratio;
    for (const auto& o : outcomes) {
      if (o.algorithm != algorithm) continue;
      train_hv.push_back(o.assessment.final_train_hv);
      test_hv.push_back(o.assessment.final_test_hv);
      initial_hv.push_back(o.assessment.initial_test_hv);
      min_error.push_back(o.assessment.min_train_error);
      ratio.push_back(o.assessment.mean_feature_ratio);
    }
    report.algorithms.push_back({std::string(name_of(algorithm)), train_hv.size(),
                                 mean_std(train_hv), mean_std(test_hv), mean_std(initial_hv),
                                 mean_std(min_error), mean_std(ratio)});
  }
  return report;
}

fsys::path trajectory_path(const fsys::path& dir, std::size_t run, Algorithm algorithm) {
  return dir / fmt::format("run_{}_{}_hv.csv", run, name_of(algorithm));
}

fsys::path front_path(const fsys::path& dir, std::size_t run, Algorithm algorithm) {
  return dir / fmt::format("run_{}_{}_front.csv", run, name_of(algorithm));
}

fsys::path initial_front_path(const fsys::path& dir, std::size_t run, Algorithm algorithm) {
  return dir / fmt::format("run_{}_{}_initial_front.csv", run, name_of(algorithm));
}

namespace {

void write_text(const fsys::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ExperimentError(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.flush();
  if (!out) throw ExperimentError(fmt::format("failed writing '{}'", path.string()));
}

std::string read_text(const fsys::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExperimentError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::vector<std::string>> read_csv_rows(const fsys::path& path,
                                                    std::string_view expected_header) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != expected_header) {
    throw ExperimentError(fmt::format("'{}': expected header '{}'", path.string(), expected_header));
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

template <typename T>
T parse_cell(const fsys::path& path, const std::string& cell) {
  T value{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ExperimentError(fmt::format("'{}': malformed value '{}'", path.string(), cell));
  }
  return value;
}

}  // namespace

void write_trajectory_csv(const fsys::path& path, const HvTrajectory& trajectory) {
  std::string text = "evals,hv\n";
  for (const auto& p : trajectory.points()) text += fmt::format("{},{}\n", p.evals, p.hv);
  write_text(path, text);
}

void write_front_csv(const fsys::path& path, std::span<const AssessedPoint> front) {
  std::string text = "f1_train,f2,f1_test,genome\n";
  for (const auto& p : front) {
    text += fmt::format("{},{},{},{}\n", p.train_error, p.ratio, p.test_error, p.genome);
  }
  write_text(path, text);
}

HvTrajectory read_trajectory_csv(const fsys::path& path) {
  HvTrajectory trajectory;
  for (const auto& row : read_csv_rows(path, "evals,hv")) {
    if (row.size() != 2) throw ExperimentError(fmt::format("'{}': ragged row", path.string()));
    trajectory.record(parse_cell<std::size_t>(path, row[0]), parse_cell<double>(path, row[1]));
  }
  return trajectory;
}

std::vector<AssessedPoint> read_front_csv(const fsys::path& path) {
  std::vector<AssessedPoint> front;
  for (const auto& row : read_csv_rows(path, "f1_train,f2,f1_test,genome")) {
    if (row.size() != 4) throw ExperimentError(fmt::format("'{}': ragged row", path.string()));
    front.push_back({parse_cell<double>(path, row[0]), parse_cell<double>(path, row[1]),
                     parse_cell<double>(path, row[2]), row[3]});
  }
  return front;
}

void emit_run(const fsys::path& dir, const RunOutcome& outcome) {
  write_trajectory_csv(trajectory_path(dir, outcome.run, outcome.algorithm), outcome.record.trajectory);
  write_front_csv(front_path(dir, outcome.run, outcome.algorithm), outcome.assessment.final_front);
  write_front_csv(initial_front_path(dir, outcome.run, outcome.algorithm),
                  outcome.assessment.initial_front);
}

void emit_aggregate(const fsys::path& dir, const ExperimentConfig& config,
                    const AggregateReport& report) {
  nlohmann::json j;
  j["status"] = "complete";
  j["config"] = config_to_json(config);
  std::vector<std::uint64_t> seeds;
  for (std::size_t r = 0; r < config.runs; ++r) seeds.push_back(config.seed_for_run(r));
  j["seeds"] = seeds;
  j["report"] = report;
  write_text(dir / "aggregate.json", j.dump(2) + "\n");
}

AggregateReport read_aggregate(const fsys::path& dir) {
  const auto path = dir / "aggregate.json";
  try {
    return nlohmann::json::parse(read_text(path)).at("report").get<AggregateReport>();
  } catch (const nlohmann::json::exception& e) {
    throw ExperimentError(fmt::format("'{}': {}", path.string(), e.what()));
  }
}

AggregateReport aggregate_from_files(const fsys::path& dir, const ExperimentConfig& config) {
  std::vector<RunOutcome> outcomes;
  for (std::size_t r = 0; r < config.runs; ++r) {
    for (auto algorithm : algorithms_of(config.algorithm)) {
      RunOutcome o;
      o.run = r;
      o.algorithm = algorithm;
      o.assessment = summarize(read_front_csv(front_path(dir, r, algorithm)),
                               read_front_csv(initial_front_path(dir, r, algorithm)));
      outcomes.push_back(std::move(o));
    }
  }
  return aggregate(outcomes);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto data = load_data(config);
  const bool emit = !config.out_dir.empty();
  if (emit) {
    std::error_code ec;
    fsys::create_directories(config.out_dir, ec);
    if (ec) {
      throw ExperimentError(fmt::format("cannot create '{}': {}", config.out_dir.string(), ec.message()));
    }
  }

  struct Task {
    std::size_t run;
    Algorithm algorithm;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < config.runs; ++r) {
    for (auto algorithm : algorithms_of(config.algorithm)) tasks.push_back({r, algorithm});
  }

  std::vector<std::optional<RunOutcome>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<std::pair<std::size_t, std::string>> first_error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        const auto problem = make_problem(data, config, tasks[t].run);
        RunOutcome outcome;
        outcome.run = tasks[t].run;
        outcome.algorithm = tasks[t].algorithm;
        outcome.record = optimize(problem, tasks[t].algorithm, config, config.seed_for_run(tasks[t].run));
        outcome.assessment = assess(problem, outcome.record);
        if (emit) emit_run(config.out_dir, outcome);
        results[t] = std::move(outcome);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error || t < first_error->first) first_error.emplace(t, e.what());
        failed.store(true);
      }
    }
  };

  const std::size_t num_workers = std::min(config.workers, tasks.size());
  if (num_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < num_workers; ++w) pool.emplace_back(worker);
  }

  if (first_error) {
    const auto& [t, message] = *first_error;
    if (emit) {
      nlohmann::json status;
      status["status"] = "partial";
      status["error"] = fmt::format("run {} ({}): {}", tasks[t].run, name_of(tasks[t].algorithm), message);
      status["completed"] = nlohmann::json::array();
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (results[i]) {
          status["completed"].push_back({{"run", tasks[i].run}, {"algorithm", name_of(tasks[i].algorithm)}});
        }
      }
      write_text(config.out_dir / "status.json", status.dump(2) + "\n");
    }
    throw ExperimentError(fmt::format("run {} ({}) failed: {}", tasks[t].run,
                                      name_of(tasks[t].algorithm), message));
  }

  ExperimentResult result;
  result.outcomes.reserve(tasks.size());
  for (auto& r : results) result.outcomes.push_back(std::move(*r));
  result.report = aggregate(result.outcomes);
  if (emit) emit_aggregate(config.out_dir, config, result.report);
  return result;
}

SweepResult stepsize_sweep(const ExperimentConfig& config, std::span<const double> step_sizes) {
  if (step_sizes.empty()) throw std::invalid_argument("step-size sweep needs at least one step size");
  SweepResult sweep;
  sweep.step_sizes.assign(step_sizes.begin(), step_sizes.end());

  std::vector<std::vector<HvPoint>> means;
  for (std::size_t i = 0; i < step_sizes.size(); ++i) {
    auto c = config;
    c.algorithm = AlgorithmChoice::cnsga2;
    c.cnsga.step_size = step_sizes[i];
    if (!config.out_dir.empty()) c.out_dir = config.out_dir / fmt::format("step_{}", i);
    sweep.experiments.push_back(run_experiment(c));

    // Runs share one evaluation grid (same N and budget).
    const auto& outcomes = sweep.experiments.back().outcomes;
    std::vector<HvPoint> mean = outcomes.front().record.trajectory.points();
    for (std::size_t p = 0; p < mean.size(); ++p) {
      double sum = 0.0;
      for (const auto& o : outcomes) sum += o.record.trajectory.points()[p].hv;
      mean[p].hv = sum / static_cast<double>(outcomes.size());
    }
    means.push_back(std::move(mean));
  }

  if (!config.out_dir.empty()) {
    std::vector<std::size_t> grid;
    for (std::size_t i = 0; i < means.size(); ++i) {
      HvTrajectory t;
      for (const auto& p : means[i]) {
        t.record(p.evals, p.hv);
        grid.push_back(p.evals);
      }
      write_trajectory_csv(config.out_dir / fmt::format("stepsize_{}_hv.csv", i), t);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::string text = "evals";
    for (double s : step_sizes) text += fmt::format(",step_{}", s);
    text += "\n";
    for (auto evals : grid) {
      text += fmt::format("{}", evals);
      for (const auto& mean : means) {
        auto it = std::find_if(mean.begin(), mean.end(), [&](const HvPoint& p) { return p.evals == evals; });
        if (it == mean.end()) {
          text += ",";
        } else {
          text += fmt::format(",{}", it->hv);
        }
      }
      text += "\n";
    }
    write_text(config.out_dir / "stepsize_sweep.csv", text);
  }
  return sweep;
}

}  // namespace cnsga::harness
