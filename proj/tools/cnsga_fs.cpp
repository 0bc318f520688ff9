// Command-line driver: repeated seeded feature-selection experiments with
// CNSGA-II and NSGA-II, or a CNSGA-II step-size sweep.

#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"

#include "cnsga/experiment.hpp"

using namespace cnsga;

namespace {

void print_report(const harness::AggregateReport& report) {
  fmt::print("{:<8} {:>5} {:>17} {:>17} {:>17} {:>17} {:>17}\n", "alg", "runs", "train HV",
             "test HV", "initial test HV", "min train err", "feature ratio");
  auto cell = [](const harness::MeanStd& v) { return fmt::format("{:.4f}±{:.4f}", v.mean, v.std); };
  for (const auto& a : report.algorithms) {
    fmt::print("{:<8} {:>5} {:>17} {:>17} {:>17} {:>17} {:>17}\n", a.algorithm, a.runs,
               cell(a.final_train_hv), cell(a.final_test_hv), cell(a.initial_test_hv),
               cell(a.min_train_error), cell(a.mean_feature_ratio));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective wrapper feature selection with compact NSGA-II"};
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");

  harness::ExperimentConfig config;
  std::string dataset;
  std::vector<std::size_t> synthetic;
  fs::SyntheticSpec synthetic_spec;
  std::string algorithm = "both";
  std::string out;
  std::size_t max_iterations = 0;
  double mutation_prob = -1.0;
  bool no_loo = false;
  std::vector<double> sweep;

  auto* source = app.add_option_group("source", "Dataset source");
  source->add_option("--dataset", dataset, "CSV file, last column is the class label")
      ->check(CLI::ExistingFile);
  source->add_option("--synthetic", synthetic, "Planted synthetic data: d,relevant,classes,per_class")
      ->delimiter(',')
      ->expected(4);
  source->require_option(1);
  app.add_option("--gap", synthetic_spec.gap, "Synthetic class-center spacing")->capture_default_str();
  app.add_option("--noise", synthetic_spec.noise_amp, "Synthetic irrelevant-feature amplitude")
      ->capture_default_str();
  app.add_option("--data-seed", synthetic_spec.seed, "Synthetic generator seed")->capture_default_str();

  app.add_option("--algorithm", algorithm, "nsga2, cnsga2 or both")
      ->check(CLI::IsMember({"nsga2", "cnsga2", "both"}))
      ->capture_default_str();
  app.add_option("--runs", config.runs, "Independent runs")->capture_default_str();
  app.add_option("--nfc", config.nfc, "Objective evaluations per run")->capture_default_str();
  app.add_option("--k", config.knn_k, "Neighbours for k-NN")->required();
  app.add_option("--test-fraction", config.test_fraction, "Held-out fraction per run")
      ->capture_default_str();
  app.add_option("--seed", config.base_seed, "Base seed; run r uses seed + r")->capture_default_str();
  app.add_flag("--no-loo", no_loo, "Do not exclude a training row from its own neighbours");
  app.add_flag("--normalize", config.normalize, "Min-max scale features on the training rows");

  app.add_option("--step-size", config.cnsga.step_size, "CNSGA-II PV step size")->capture_default_str();
  app.add_option("--num-pvs", config.cnsga.num_pvs, "CNSGA-II number of PVs")->capture_default_str();
  app.add_option("--min-boundary", config.cnsga.min_boundary, "CNSGA-II PV clip boundary")
      ->capture_default_str();
  app.add_option("--max-pop-size", config.cnsga.max_pop_size, "CNSGA-II archive size")
      ->capture_default_str();
  app.add_option("--max-iterations", max_iterations, "CNSGA-II iteration cap (0: budget only)");

  app.add_option("--pop-size", config.nsga2.pop_size, "NSGA-II population size")->capture_default_str();
  app.add_option("--crossover-prob", config.nsga2.crossover_prob, "NSGA-II crossover probability")
      ->capture_default_str();
  app.add_option("--mutation-prob", mutation_prob, "NSGA-II bit-flip probability (default 1/d)");

  app.add_option("--workers", config.workers, "Concurrent runs")->capture_default_str();
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--sweep", sweep, "Run a CNSGA-II step-size sweep over these steps")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (!dataset.empty()) {
      config.dataset_csv = dataset;
    } else {
      synthetic_spec.features = synthetic[0];
      synthetic_spec.relevant = synthetic[1];
      synthetic_spec.classes = synthetic[2];
      synthetic_spec.per_class = synthetic[3];
      config.synthetic = synthetic_spec;
    }
    config.algorithm = harness::parse_algorithm_choice(algorithm);
    config.leave_one_out = !no_loo;
    config.out_dir = out;
    if (max_iterations > 0) config.cnsga.max_iterations = max_iterations;
    if (mutation_prob >= 0.0) config.nsga2.mutation_prob = mutation_prob;

    if (!sweep.empty()) {
      const auto result = harness::stepsize_sweep(config, sweep);
      for (std::size_t i = 0; i < result.step_sizes.size(); ++i) {
        fmt::print("step size {}\n", result.step_sizes[i]);
        print_report(result.experiments[i].report);
      }
    } else {
      print_report(harness::run_experiment(config).report);
    }
    fmt::print("results written to {}\n", out);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
