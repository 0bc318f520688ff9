#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cnsga/moo.hpp"

using namespace cnsga;

namespace {

Individual make(const char* bits, double error, double ratio) {
  return {Genome::from_string(bits), {error, ratio}};
}

std::vector<Individual> from_objectives(const std::vector<ObjectiveVector>& objs) {
  std::vector<Individual> pop;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    Genome g(16);
    for (std::size_t k = 0; k < 16; ++k) g.set(k, (i >> k) & 1);
    pop.push_back({g, objs[i]});
  }
  return pop;
}

}  // namespace

TEST_CASE("genome basics") {
  auto g = Genome::from_string("0110");
  CHECK(g.size() == 4);
  CHECK(g.count() == 2);
  CHECK(g.to_string() == "0110");
  CHECK_THROWS_AS(Genome::from_string("01x"), std::invalid_argument);
  CHECK(Genome(3).none());
}

TEST_CASE("hamming distance") {
  CHECK(hamming(Genome::from_string("1010"), Genome::from_string("1110")) == 1);
  const auto x = Genome::from_string("10110010");
  CHECK(hamming(x, x) == 0);
  auto complement = x;
  for (std::size_t k = 0; k < x.size(); ++k) complement.flip(k);
  CHECK(hamming(x, complement) == 8);
  CHECK_THROWS_AS(hamming(Genome(3), Genome(4)), std::invalid_argument);
}

TEST_CASE("dominance examples") {
  CHECK(dominates({0.1, 0.9}, {0.2, 0.95}));
  CHECK_FALSE(dominates({0.3, 0.3}, {0.3, 0.3}));
  CHECK_FALSE(dominates({0.1, 0.9}, {0.5, 0.5}));
  CHECK_FALSE(dominates({0.5, 0.5}, {0.1, 0.9}));
  CHECK(dominates({0.1, 0.5}, {0.1, 0.6}));  // one strict inequality suffices
}

TEST_CASE("dominance is irreflexive, antisymmetric and transitive on samples") {
  std::mt19937_64 rng(7);
  // Coarse grid so equal coordinates occur often.
  std::uniform_int_distribution<int> cell(0, 4);
  auto draw = [&] { return ObjectiveVector{cell(rng) / 4.0, cell(rng) / 4.0}; };
  for (int t = 0; t < 5000; ++t) {
    const auto a = draw(), b = draw(), c = draw();
    CHECK_FALSE(dominates(a, a));
    CHECK_FALSE((dominates(a, b) && dominates(b, a)));
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
  }
}

TEST_CASE("non-dominated sort examples") {
  SUBCASE("mixed") {
    auto ranked = non_dominated_sort({make("001", 0.1, 0.9), make("010", 0.5, 0.5), make("100", 0.2, 0.95)});
    CHECK(ranked.rank == std::vector<std::size_t>{0, 0, 1});
    CHECK(ranked.fronts.size() == 2);
  }
  SUBCASE("singleton") {
    auto ranked = non_dominated_sort({make("1", 0.4, 0.4)});
    CHECK(ranked.rank == std::vector<std::size_t>{0});
    CHECK(std::isinf(ranked.crowding[0]));
  }
  SUBCASE("chain") {
    auto ranked = non_dominated_sort({make("00", 0.3, 0.3), make("01", 0.1, 0.1), make("10", 0.2, 0.2)});
    CHECK(ranked.rank == std::vector<std::size_t>{2, 0, 1});
  }
  SUBCASE("empty") {
    auto ranked = non_dominated_sort({});
    CHECK(ranked.size() == 0);
    CHECK(ranked.fronts.empty());
    CHECK(ranked.pareto_front().empty());
  }
}

TEST_CASE("non-dominated sort matches the strip oracle on random populations") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 50), coarse(0, 5);
  for (int t = 0; t < 200; ++t) {
    const bool grid = t % 2 == 0;  // half the trials with heavy ties
    std::vector<ObjectiveVector> objs(static_cast<std::size_t>(size(rng)));
    for (auto& o : objs) o = grid ? ObjectiveVector{coarse(rng) / 5.0, coarse(rng) / 5.0} : ObjectiveVector{u(rng), u(rng)};
    const auto ranked = non_dominated_sort(from_objectives(objs));
    REQUIRE(ranked.rank == oracle::strip_ranks(objs));

    for (std::size_t i = 0; i < objs.size(); ++i) {
      bool dominated_by_previous = ranked.rank[i] == 0;
      for (std::size_t j = 0; j < objs.size(); ++j) {
        if (ranked.rank[j] == ranked.rank[i]) CHECK_FALSE(dominates(objs[j], objs[i]));
        if (ranked.rank[i] > 0 && ranked.rank[j] + 1 == ranked.rank[i] && dominates(objs[j], objs[i])) {
          dominated_by_previous = true;
        }
      }
      CHECK(dominated_by_previous);
    }
  }
}

TEST_CASE("crowding distance examples") {
  const double inf = kInfiniteCrowding;
  SUBCASE("three points") {
    const std::vector<ObjectiveVector> f{{0, 1}, {0.5, 0.5}, {1, 0}};
    CHECK(crowding_distance(f) == std::vector<double>{inf, 2.0, inf});
  }
  SUBCASE("singleton and pair") {
    CHECK(crowding_distance(std::vector<ObjectiveVector>{{0.2, 0.2}}) == std::vector<double>{inf});
    CHECK(crowding_distance(std::vector<ObjectiveVector>{{0, 1}, {1, 0}}) == std::vector<double>{inf, inf});
  }
  SUBCASE("four points") {
    const std::vector<ObjectiveVector> f{{0, 1}, {0.25, 0.75}, {0.5, 0.5}, {1, 0}};
    const auto d = crowding_distance(f);
    CHECK(std::isinf(d[0]));
    CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d[2] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(std::isinf(d[3]));
  }
  SUBCASE("degenerate range contributes nothing") {
    const std::vector<ObjectiveVector> f{{0.3, 0.3}, {0.3, 0.3}, {0.3, 0.3}};
    const auto d = crowding_distance(f);
    CHECK(std::isinf(d[0]));
    CHECK(d[1] == 0.0);
    CHECK(std::isinf(d[2]));
  }
}

TEST_CASE("select_best ordering") {
  SUBCASE("rank first") {
    auto ranked = non_dominated_sort({make("00", 0.5, 0.7), make("01", 0.1, 0.6), make("10", 0.6, 0.6), make("11", 0.6, 0.1)});
    CHECK(ranked.rank == std::vector<std::size_t>{1, 0, 1, 0});
    auto best = select_best(ranked, 2);
    REQUIRE(best.size() == 2);
    CHECK(best[0].genome.to_string() == "01");
    CHECK(best[1].genome.to_string() == "11");
  }
  SUBCASE("infinite crowding beats finite") {
    auto ranked = non_dominated_sort({make("00", 0.5, 0.5), make("01", 0.0, 1.0), make("10", 1.0, 0.0)});
    CHECK(ranked.crowding[0] == doctest::Approx(2.0));
    auto best = select_best(ranked, 2);
    CHECK(best[0].genome.to_string() == "01");
    CHECK(best[1].genome.to_string() == "10");
  }
  SUBCASE("ranks 0 and 1 then best of rank 2") {
    // rank 0: {e}, rank 1: {a, c}, rank 2: {b, d} (both boundary, index breaks the tie)
    auto ranked = non_dominated_sort({make("000", 0.2, 0.3), make("001", 0.35, 0.5), make("010", 0.3, 0.2),
                                      make("011", 0.5, 0.35), make("100", 0.1, 0.1)});
    CHECK(ranked.rank == std::vector<std::size_t>{1, 2, 1, 2, 0});
    auto best = select_best(ranked, 4);
    REQUIRE(best.size() == 4);
    CHECK(best[0].genome.to_string() == "100");
    CHECK(best[1].genome.to_string() == "000");
    CHECK(best[2].genome.to_string() == "010");
    CHECK(best[3].genome.to_string() == "001");
  }
  SUBCASE("n larger than population returns everything, deterministically") {
    auto ranked = non_dominated_sort({make("0", 0.5, 0.5), make("1", 0.4, 0.6)});
    CHECK(select_best(ranked, 5).size() == 2);
    CHECK(best_order(ranked) == best_order(ranked));
  }
}

TEST_CASE("deduplicate is genotypic and keeps the first occurrence") {
  auto out = deduplicate({make("10", 0.1, 0.5), make("01", 0.2, 0.5), make("10", 0.9, 0.9)});
  REQUIRE(out.size() == 2);
  CHECK(out[0].genome.to_string() == "10");
  CHECK(out[0].objectives.error == 0.1);
  CHECK(out[1].genome.to_string() == "01");

  auto same_phenotype = deduplicate({make("10", 0.3, 0.5), make("01", 0.3, 0.5)});
  CHECK(same_phenotype.size() == 2);

  auto distinct = deduplicate({make("00", 0, 0), make("01", 0, 0), make("11", 0, 0)});
  CHECK(distinct.size() == 3);
}
