#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "d2dsim/matching.hpp"
#include "d2dsim/oracles.hpp"
#include "d2dsim/units.hpp"
#include "d2dsim/validation.hpp"

using namespace d2dsim;

namespace {

const PowerLimits kDefaultLimits{dbm_to_mw(23.0), dbm_to_mw(23.0), dbm_to_mw(-114.0)};

WeightMatrix full(std::size_t n, std::size_t m, std::initializer_list<double> row_major) {
  WeightMatrix w(n, m);
  auto it = row_major.begin();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) w.set(i, j, *it++);
  return w;
}

// Random masks and small integer increments: many exact ties.
WeightMatrix random_integer_weights(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick_n(1, 8);
  const std::size_t n = pick_n(rng);
  std::uniform_int_distribution<std::size_t> pick_m(0, std::min<std::size_t>(n, 6));
  const std::size_t m = pick_m(rng);
  std::uniform_int_distribution<int> weight(-2, 3);
  std::bernoulli_distribution edge(0.55);
  WeightMatrix w(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (edge(rng)) w.set(i, j, weight(rng));
  return w;
}

WeightMatrix instance_weights(std::uint64_t seed) {
  const Instance inst = random_instance(seed, 8, 6);
  return build_weights(reuse_candidates(inst.gains, inst.thresholds, inst.limits), inst.gains,
                       inst.limits);
}

void check_feasible(const WeightMatrix& w, const Assignment& a) {
  REQUIRE(a.d2d_to_cu.size() == w.n_d2d());
  std::vector<int> used(w.n_cu(), 0);
  for (std::size_t j = 0; j < w.n_d2d(); ++j) {
    if (!a.d2d_to_cu[j]) continue;
    const std::size_t i = *a.d2d_to_cu[j];
    REQUIRE(i < w.n_cu());
    CHECK(w.is_candidate(i, j));
    CHECK(++used[i] == 1);
  }
  CHECK(a.total_weight_bpshz == doctest::Approx(assignment_weight(w, a)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("two-by-two example picks the crossed matching") {
  // rows are CUs, columns D2Ds
  const WeightMatrix w = full(2, 2, {1.0, 3.0, 2.0, 1.0});
  // the only two perfect matchings: straight = 1 + 1, crossed = 2 + 3
  const Assignment a = hungarian_match(w);
  REQUIRE(a.d2d_to_cu[0]);
  REQUIRE(a.d2d_to_cu[1]);
  CHECK(*a.d2d_to_cu[0] == 1);
  CHECK(*a.d2d_to_cu[1] == 0);
  CHECK(a.total_weight_bpshz == 5.0);
  CHECK(brute_force_match(w).d2d_to_cu == a.d2d_to_cu);
}

TEST_CASE("trivial instances") {
  SUBCASE("one D2D, one candidate") {
    WeightMatrix w(3, 1);
    w.set(2, 0, 0.75);
    for (const Assignment& a : {hungarian_match(w), brute_force_match(w)}) {
      CHECK(a.d2d_to_cu[0] == std::optional<std::size_t>(2));
      CHECK(a.total_weight_bpshz == 0.75);
    }
  }
  SUBCASE("no D2D pairs") {
    const Assignment a = hungarian_match(WeightMatrix(4, 0));
    CHECK(a.d2d_to_cu.empty());
    CHECK(a.total_weight_bpshz == 0.0);
    CHECK(a.served() == 0);
  }
  SUBCASE("empty mask leaves everyone unserved") {
    const WeightMatrix w(3, 2);
    for (const Assignment& a : {hungarian_match(w), brute_force_match(w)}) {
      CHECK(a.served() == 0);
      CHECK(a.unserved() == std::vector<std::size_t>{0, 1});
      CHECK(a.total_weight_bpshz == 0.0);
    }
  }
  SUBCASE("1x1 feasible") {
    const WeightMatrix w = full(1, 1, {2.5});
    CHECK(brute_force_match(w).d2d_to_cu[0] == std::optional<std::size_t>(0));
  }
}

TEST_CASE("every D2D with a candidate is served, even at a loss") {
  WeightMatrix w(2, 1);
  w.set(1, 0, -1.25);
  const Assignment a = hungarian_match(w);
  CHECK(a.d2d_to_cu[0] == std::optional<std::size_t>(1));
  CHECK(a.total_weight_bpshz == -1.25);

  // serving both beats serving one well: 1 + (-0.5) with two served
  WeightMatrix c(2, 2);
  c.set(0, 0, 10.0);
  c.set(1, 0, 1.0);
  c.set(0, 1, -0.5);
  const Assignment b = hungarian_match(c);
  CHECK(b.served() == 2);
  CHECK(b.d2d_to_cu[0] == std::optional<std::size_t>(1));
  CHECK(b.d2d_to_cu[1] == std::optional<std::size_t>(0));
  CHECK(b.total_weight_bpshz == 0.5);

  exclude_unprofitable(c);
  CHECK_FALSE(c.is_candidate(0, 1));
  const Assignment d = hungarian_match(c);
  CHECK(d.served() == 1);
  CHECK(d.total_weight_bpshz == 10.0);
}

TEST_CASE("contention for a single CU leaves the later D2D unserved") {
  WeightMatrix w(3, 2);
  w.set(1, 0, 2.0);
  w.set(1, 1, 2.0);
  const Assignment a = hungarian_match(w);
  CHECK(a.served() == 1);
  // tie on weight: the smaller CU-index vector is (1, none)
  CHECK(a.d2d_to_cu[0] == std::optional<std::size_t>(1));
  CHECK_FALSE(a.d2d_to_cu[1]);
  CHECK(a.unserved() == std::vector<std::size_t>{1});
  CHECK(brute_force_match(w).d2d_to_cu == a.d2d_to_cu);
}

TEST_CASE("tie-break picks the lexicographically smallest CU vector") {
  // Every perfect matching weighs 2.
  const WeightMatrix w = full(3, 2, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
  const Assignment a = hungarian_match(w);
  CHECK(a.d2d_to_cu[0] == std::optional<std::size_t>(0));
  CHECK(a.d2d_to_cu[1] == std::optional<std::size_t>(1));
}

TEST_CASE("brute force refuses more than eight D2D pairs") {
  CHECK_THROWS_AS(brute_force_match(WeightMatrix(9, 9)), MatchSizeError);
  CHECK_NOTHROW(brute_force_match(WeightMatrix(9, 8)));
}

TEST_CASE("Hungarian equals exhaustive enumeration") {
  SUBCASE("allocation-derived instances") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
      const WeightMatrix w = instance_weights(seed);
      const Assignment fast = hungarian_match(w);
      const Assignment exact = brute_force_match(w);
      check_feasible(w, fast);
      CHECK(fast.total_weight_bpshz == doctest::Approx(exact.total_weight_bpshz).epsilon(1e-9));
      CHECK(fast.d2d_to_cu == exact.d2d_to_cu);
    }
  }
  SUBCASE("integer weights with ties") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 400; ++k) {
      const WeightMatrix w = random_integer_weights(rng);
      const Assignment fast = hungarian_match(w);
      const Assignment exact = brute_force_match(w);
      check_feasible(w, fast);
      CHECK(fast.served() == exact.served());
      CHECK(fast.total_weight_bpshz == exact.total_weight_bpshz);
      CHECK(fast.d2d_to_cu == exact.d2d_to_cu);
    }
  }
}

TEST_CASE("adding a candidate edge never hurts") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 300; ++k) {
    WeightMatrix w = random_integer_weights(rng);
    if (w.n_d2d() == 0) continue;
    const Assignment before = hungarian_match(w);
    std::uniform_int_distribution<std::size_t> pi(0, w.n_cu() - 1), pj(0, w.n_d2d() - 1);
    std::uniform_real_distribution<double> weight(-1.0, 3.0);
    const std::size_t i = pi(rng), j = pj(rng);
    if (w.is_candidate(i, j)) continue;
    w.set(i, j, weight(rng));
    const Assignment after = hungarian_match(w);
    // Served count is optimised first; the weight can only drop when it buys
    // an extra served D2D.
    CHECK(after.served() >= before.served());
    if (after.served() == before.served())
      CHECK(after.total_weight_bpshz >= before.total_weight_bpshz - 1e-12);
  }
}

TEST_CASE("permuting CU indices permutes the assignment") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 300; seed < 360; ++seed) {
    const WeightMatrix w = instance_weights(seed);
    std::vector<std::size_t> perm(w.n_cu());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    WeightMatrix p(w.n_cu(), w.n_d2d());
    for (std::size_t i = 0; i < w.n_cu(); ++i)
      for (std::size_t j = 0; j < w.n_d2d(); ++j)
        if (w.is_candidate(i, j)) p.set(perm[i], j, w.delta(i, j));
    const Assignment a = hungarian_match(w);
    const Assignment b = hungarian_match(p);
    CHECK(b.total_weight_bpshz == doctest::Approx(a.total_weight_bpshz).epsilon(1e-12));
    // real-valued increments: the optimum is unique, so it maps exactly
    for (std::size_t j = 0; j < w.n_d2d(); ++j) {
      CHECK(a.d2d_to_cu[j].has_value() == b.d2d_to_cu[j].has_value());
      if (a.d2d_to_cu[j] && b.d2d_to_cu[j]) CHECK(perm[*a.d2d_to_cu[j]] == *b.d2d_to_cu[j]);
    }
  }
}

TEST_CASE("increment weights") {
  SUBCASE("interference-free pair: the CU term cancels") {
    GainTable g;
    g.g_cu_bs = {3e-11, 1e-11};
    g.g_d2d = {4e-9};
    g.h_cu_d2d = {0.0, 1e-6};  // CU 1 drowns the D2D receiver
    g.h_d2d_bs = {0.0};
    const SinrThresholds t{2.887, 2.887};
    const WeightMatrix w = build_weights(reuse_candidates(g, t, kDefaultLimits), g, kDefaultLimits);
    REQUIRE(w.is_candidate(0, 0));
    CHECK(w.delta(0, 0) ==
          doctest::Approx(std::log2(1.0 + kDefaultLimits.p_max_d2d_mw * 4e-9 / kDefaultLimits.noise_mw))
              .epsilon(1e-12));
    CHECK_FALSE(w.is_candidate(1, 0));
  }
  SUBCASE("strong D2D-to-BS interference makes the increment negative") {
    // CU alone: log2(1 + 100); any reuse loses more CU rate than the D2D adds.
    const PairGains pg{100.0, 2.0, 0.01, 10.0};
    const PowerLimits unit{1.0, 1.0, 1.0};
    const SinrThresholds t{1.0, 1.0};
    GainTable g;
    g.g_cu_bs = {pg.g_cu_bs};
    g.g_d2d = {pg.g_d2d};
    g.h_cu_d2d = {pg.h_cu_d2d};
    g.h_d2d_bs = {pg.h_d2d_bs};
    const WeightMatrix w = build_weights(reuse_candidates(g, t, unit), g, unit);
    REQUIRE(w.is_candidate(0, 0));
    CHECK(w.delta(0, 0) < 0.0);
    const auto grid = oracle::grid_best_power(pg, t, unit, 401);
    REQUIRE(grid);
    CHECK(grid->sum_rate_bpshz - std::log2(101.0) < 0.0);
    CHECK(w.delta(0, 0) + std::log2(101.0) >= grid->sum_rate_bpshz - 1e-9);
    CHECK(w.delta(0, 0) + std::log2(101.0) <= grid->sum_rate_bpshz + 1e-2);
  }
}
