// Acceptance suite: one line per criterion, non-zero exit if any fails.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "../oracles.hpp"
#include "../test_problems.hpp"

#include "cnsga/compact_nsga2.hpp"
#include "cnsga/experiment.hpp"
#include "cnsga/hypervolume.hpp"
#include "cnsga/nsga2.hpp"

using namespace cnsga;
namespace fsys = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: no limit
  std::function<Outcome()> check;
};

// The desk-scale problem shared by criteria 8-10.
harness::ExperimentConfig desk_experiment() {
  harness::ExperimentConfig c;
  fs::SyntheticSpec s;
  s.features = 500;
  s.relevant = 10;
  s.classes = 4;
  s.per_class = 25;
  s.gap = 1.0;
  s.noise_amp = 2.0;
  s.seed = 2023;
  c.synthetic = s;
  c.knn_k = 5;
  c.nfc = 10000;
  c.runs = 10;
  c.base_seed = 1;
  return c;  // CNSGA-II and NSGA-II at their Table II defaults
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> final_train_hv(const harness::ExperimentResult& r, harness::Algorithm a) {
  std::vector<double> hv;
  for (const auto& o : r.outcomes) {
    if (o.algorithm == a) hv.push_back(o.assessment.final_train_hv);
  }
  return hv;
}

const harness::ExperimentResult& desk_result() {
  static const harness::ExperimentResult result = harness::run_experiment(desk_experiment());
  return result;
}

std::string slurp(const fsys::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome nds_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 50);
  std::size_t mismatches = 0, individuals = 0;
  for (int t = 0; t < 500; ++t) {
    std::vector<Individual> pop(static_cast<std::size_t>(size(rng)));
    std::vector<ObjectiveVector> objs;
    for (auto& ind : pop) {
      ind.objectives = {u(rng), u(rng)};
      objs.push_back(ind.objectives);
    }
    individuals += pop.size();
    mismatches += non_dominated_sort(pop).rank != oracle::strip_ranks(objs);
  }
  return {mismatches == 0, fmt::format("500 populations, {} individuals, {} mismatching", individuals, mismatches)};
}

Outcome hv_oracle() {
  const double a = hypervolume_2d(std::vector<ObjectiveVector>{{0.2, 0.4}});
  const double b = hypervolume_2d(std::vector<ObjectiveVector>{{0.2, 0.4}, {0.5, 0.1}});
  const bool analytic = std::abs(a - 0.48) <= 1e-12 && std::abs(b - 0.63) <= 1e-12;

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 20);
  std::size_t outside = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    // Staircase: errors ascending, ratios descending.
    const auto n = static_cast<std::size_t>(size(rng));
    std::vector<double> xs(n), ys(n);
    for (auto& x : xs) x = u(rng);
    for (auto& y : ys) y = u(rng);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end(), std::greater<>());
    std::vector<ObjectiveVector> front;
    for (std::size_t i = 0; i < n; ++i) front.push_back({xs[i], ys[i]});

    const double exact = hypervolume_2d(front);
    const auto mc = oracle::monte_carlo_hv(front, kDefaultReference, 1000000, 1000 + t);
    const double z = mc.standard_error > 0 ? std::abs(exact - mc.estimate) / mc.standard_error : 0.0;
    worst = std::max(worst, z);
    outside += z > 3.0;
  }
  return {analytic && outside == 0,
          fmt::format("analytic 0.48/0.63 {}; 100 fronts, worst |z| = {:.2f}, {} beyond 3 SE",
                      analytic ? "exact" : "WRONG", worst, outside)};
}

Outcome knn_oracle() {
  std::mt19937_64 rng(3);
  std::size_t queries = 0, mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 6 + rng() % 25, d = 1 + rng() % 10, classes = 2 + rng() % 4;
    auto data = std::make_shared<fs::Dataset>();
    data->rows = n;
    data->features = d;
    data->num_classes = static_cast<int>(classes);
    for (std::size_t i = 0; i < n * d; ++i) {
      // Half the problems on a coarse grid so distance and vote ties occur.
      data->values.push_back(t % 2 ? static_cast<double>(rng() % 3) : std::uniform_real_distribution<double>(0, 1)(rng));
    }
    for (std::size_t i = 0; i < n; ++i) data->labels.push_back(static_cast<int>(i < classes ? i : rng() % classes));
    const auto view = fs::DatasetView::all(data);
    Genome mask(d);
    while (mask.none()) {
      for (std::size_t f = 0; f < d; ++f) mask.set(f, rng() & 1);
    }
    for (std::size_t k = 1; k <= 5 && k < n; ++k) {
      for (std::size_t q = 0; q < n; ++q) {
        ++queries;
        mismatches += fs::knn_classify(view.row(q), view, mask, k, q) !=
                      oracle::knn(view.row(q), view, mask, k, static_cast<long>(q));
        std::vector<double> probe(d);
        for (auto& v : probe) v = t % 2 ? static_cast<double>(rng() % 3) : std::uniform_real_distribution<double>(0, 1)(rng);
        ++queries;
        mismatches += fs::knn_classify(probe, view, mask, k) != oracle::knn(probe, view, mask, k, -1);
      }
    }
  }
  return {mismatches == 0, fmt::format("200 problems, {} queries, {} mismatching", queries, mismatches)};
}

fs::FsProblem desk_problem() {
  const auto config = desk_experiment();
  return harness::make_problem(harness::load_data(config), config, 0);
}

Outcome pv_mechanics() {
  const auto problem = desk_problem();
  std::size_t violations = 0, clipped = 0;
  double lo = 1.0, hi = 0.0;
  // Table II step, plus a large step so that the clip is actually reached.
  for (double step : {1.0 / 500.0, 1.0 / 50.0}) {
    compact::CnsgaConfig c;
    c.step_size = step;
    Rng rng(4);
    auto s = compact::init(c, problem, rng);
    for (int i = 0; i < 200; ++i) {
      compact::iterate(s, c, problem, rng);
      for (const auto& pv : s.pvs) {
        for (double p : pv) {
          lo = std::min(lo, p);
          hi = std::max(hi, p);
          violations += p < 0.01 || p > 0.99;
          clipped += p == 0.01 || p == 0.99;
        }
      }
    }
  }
  compact::CnsgaConfig c;
  const bool arithmetic = compact::update_pv({0.5}, Genome::from_string("1"), c)[0] == 0.502 &&
                          compact::update_pv({0.5}, Genome::from_string("0"), c)[0] == 0.498;
  return {violations == 0 && arithmetic,
          fmt::format("2 x 200 iterations, PV range [{}, {}], {} elements at a bound, {} out of bounds; "
                      "0.5 -> 0.502 {}",
                      lo, hi, clipped, violations, arithmetic ? "exact" : "WRONG")};
}

Outcome archive_invariant() {
  const auto problem = desk_problem();
  std::size_t checked = 0, size_violations = 0, peak_violations = 0, max_peak = 0;
  // Table II archive and a small one that forces trimming.
  for (std::size_t max_pop : {std::size_t{100}, std::size_t{12}}) {
    compact::CnsgaConfig c;
    c.max_pop_size = max_pop;
    Rng rng(5);
    auto s = compact::init(c, problem, rng);
    std::size_t carried_bound = s.population.size();
    while (compact::can_iterate(s, c) && checked < 600) {
      compact::iterate(s, c, problem, rng);
      const std::size_t bound = std::min(c.max_pop_size, std::max(c.num_pvs, s.pareto_front.size()));
      size_violations += s.population.size() != bound;
      peak_violations += s.peak_stored > carried_bound + c.num_pvs;
      max_peak = std::max(max_peak, s.peak_stored);
      carried_bound = bound;
      ++checked;
    }
  }
  return {size_violations == 0 && peak_violations == 0,
          fmt::format("{} iterations, {} size violations, {} peak violations (max peak {})", checked,
                      size_violations, peak_violations, max_peak)};
}

Outcome budget_fairness() {
  const auto problem = desk_problem();
  testing::CountingProblem cn(problem), ns(problem);
  compact::CnsgaConfig cc;
  nsga2::Nsga2Config nc;
  cc.nfc_budget = nc.nfc_budget = 10000;
  const auto a = compact::run(cc, cn, 6);
  const auto b = nsga2::run(nc, ns, 6);
  const bool pass = cn.calls() == 10000 && ns.calls() == 10000 && a.evals_used == 10000 && b.evals_used == 10000;
  return {pass, fmt::format("CNSGA-II {} evaluations ({} iterations), NSGA-II {} ({} generations)", cn.calls(),
                            a.iterations, ns.calls(), b.iterations)};
}

Outcome determinism() {
  const auto root = fsys::temp_directory_path() / "cnsga_acceptance_determinism";
  fsys::remove_all(root);
  auto config = desk_experiment();
  config.synthetic->features = 100;
  config.runs = 3;
  config.nfc = 2000;
  config.out_dir = root / "a";
  harness::run_experiment(config);
  config.out_dir = root / "b";
  config.workers = 2;
  harness::run_experiment(config);

  std::size_t files = 0, different = 0;
  for (const auto& entry : fsys::directory_iterator(root / "a")) {
    ++files;
    const auto other = root / "b" / entry.path().filename();
    different += !fsys::exists(other) || slurp(entry.path()) != slurp(other);
  }
  fsys::remove_all(root);
  return {files > 0 && different == 0, fmt::format("{} files compared, {} differ", files, different)};
}

Outcome directional() {
  const auto& r = desk_result();
  const double c = median(final_train_hv(r, harness::Algorithm::cnsga2));
  const double n = median(final_train_hv(r, harness::Algorithm::nsga2));
  return {c >= n - 0.01, fmt::format("median final train HV: CNSGA-II {:.4f}, NSGA-II {:.4f} (difference {:+.4f}, "
                                     "tolerance -0.01)", c, n, c - n)};
}

Outcome feature_reduction() {
  const auto& r = desk_result();
  bool pass = true;
  std::string detail = "mean selected-feature ratio:";
  for (const auto& a : r.report.algorithms) {
    pass = pass && a.mean_feature_ratio.mean < 0.5;
    detail += fmt::format(" {} {:.4f}±{:.4f}", a.algorithm, a.mean_feature_ratio.mean, a.mean_feature_ratio.std);
  }
  return {pass, detail};
}

Outcome step_size_trend() {
  auto config = desk_experiment();
  const std::vector<double> steps{1.0 / 50.0, 1.0 / 1000.0};
  const auto sweep = harness::stepsize_sweep(config, steps);
  const auto& large = sweep.experiments[0].outcomes;
  const auto& small = sweep.experiments[1].outcomes;
  const std::size_t early_evals = config.nfc / 5;
  int faster = 0, no_worse = 0;
  for (std::size_t r = 0; r < large.size(); ++r) {
    faster += large[r].record.trajectory.hv_at(early_evals) > small[r].record.trajectory.hv_at(early_evals);
    no_worse += small[r].assessment.final_train_hv >= large[r].assessment.final_train_hv - 0.01;
  }
  return {faster >= 7 && no_worse >= 7,
          fmt::format("1/50 ahead at {} evals in {}/10 seeds (need 7); 1/1000 final within 0.01 of 1/50 in "
                      "{}/10 seeds (need 7); mean final HV 1/50 {:.4f}, 1/1000 {:.4f}",
                      early_evals, faster, no_worse, sweep.experiments[0].report.algorithms[0].final_train_hv.mean,
                      sweep.experiments[1].report.algorithms[0].final_train_hv.mean)};
}

Outcome sampling_statistics() {
  Rng rng(11);
  const auto g = compact::sample(compact::ProbabilityVector(10000, 0.8), rng);
  const double freq = static_cast<double>(g.count()) / 10000.0;

  const Genome zero(1000);
  std::size_t flips = 0;
  for (int i = 0; i < 10000; ++i) flips += nsga2::bitflip_mutation(zero, 1.0 / 1000.0, rng).count();
  const double mean_flips = static_cast<double>(flips) / 10000.0;
  return {freq >= 0.78 && freq <= 0.82 && mean_flips >= 0.9 && mean_flips <= 1.1,
          fmt::format("PV 0.8 frequency {:.4f} (need [0.78, 0.82]); mean flips {:.4f} (need [0.9, 1.1])", freq,
                      mean_flips)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "NDS oracle equivalence", 10.0, nds_oracle},
      {2, "HV oracle equivalence", 30.0, hv_oracle},
      {3, "k-NN oracle equivalence", 10.0, knn_oracle},
      {4, "PV mechanics", 0.0, pv_mechanics},
      {5, "archive invariant", 0.0, archive_invariant},
      {6, "budget fairness", 0.0, budget_fairness},
      {7, "determinism", 0.0, determinism},
      {8, "directional result", 0.0, directional},
      {9, "feature reduction", 0.0, feature_reduction},
      {10, "step-size trend", 0.0, step_size_trend},
      {11, "sampling statistics", 0.0, sampling_statistics},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("exception: {}", e.what())};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt::format("{:.1f}s", seconds);
    if (c.time_limit_s > 0 && seconds >= c.time_limit_s) {
      outcome.pass = false;
      timing += fmt::format(" exceeds {:.0f}s limit", c.time_limit_s);
    }
    fmt::print("[{}] AC{:<2} {}: {} ({})\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail, timing);
    std::fflush(stdout);
    failures += !outcome.pass;
  }
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
