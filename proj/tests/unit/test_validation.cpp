#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "d2dsim/validation.hpp"

using namespace d2dsim;

TEST_CASE("random instances respect their size bounds") {
  std::set<std::size_t> cu_sizes;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Instance inst = random_instance(s, 8, 6);
    cu_sizes.insert(inst.gains.n_cu());
    CHECK(inst.gains.n_cu() >= 1);
    CHECK(inst.gains.n_cu() <= 8);
    CHECK(inst.gains.n_d2d() <= std::min<std::size_t>(6, inst.gains.n_cu()));
    CHECK(inst.thresholds.cu > 0.0);
  }
  CHECK(cu_sizes.size() == 8);
  CHECK(random_instance(42, 8, 6).gains == random_instance(42, 8, 6).gains);
}

TEST_CASE("admissible pair sampler") {
  const auto pairs = random_admissible_pairs(3, 50);
  REQUIRE(pairs.size() == 50);
  for (const AdmissiblePair& p : pairs) {
    CHECK(admissible_point(p.gains, p.thresholds, p.limits).has_value());
    CHECK(check_point_a(p.gains, p.thresholds, p.limits).empty());
    CHECK(check_corner_optimality(p.gains, p.thresholds, p.limits).empty());
  }
}

TEST_CASE("a clean run passes every property") {
  ValidationOptions opt;
  opt.instances = 25;
  opt.seed = 7;
  const ValidationReport r = run_validation(opt);
  REQUIRE(r.properties.size() == 5);
  for (const PropertyResult& p : r.properties) {
    INFO(p.name << ": " << p.first_failure);
    CHECK(p.passed());
    CHECK(p.checked > 0);
  }
  CHECK(r.passed());
}

TEST_CASE("flipping the increments is caught and reproducible") {
  ValidationOptions opt;
  opt.instances = 40;
  opt.seed = 11;
  opt.inject_delta_sign_flip = true;
  const ValidationReport r = run_validation(opt);
  CHECK_FALSE(r.passed());

  const PropertyResult* weights = nullptr;
  for (const PropertyResult& p : r.properties)
    if (p.name == "delta_weights") weights = &p;
  REQUIRE(weights != nullptr);
  REQUIRE_FALSE(weights->passed());
  REQUIRE(weights->first_failing_seed.has_value());

  ValidationOptions again = opt;
  again.instances = 1;
  again.seed = *weights->first_failing_seed;
  CHECK_FALSE(run_validation(again).passed());
}

TEST_CASE("zero instances is vacuous") {
  ValidationOptions opt;
  opt.instances = 0;
  const ValidationReport r = run_validation(opt);
  CHECK(r.passed());
  for (const PropertyResult& p : r.properties) CHECK(p.checked == 0);
}

TEST_CASE("check helpers flag a wrong optimum") {
  // CU-dominant pair: the optimum must sit at a box edge.
  const PairGains g{1e-9, 1e-8, 1e-13, 1e-13};
  const SinrThresholds t{2.0, 2.0};
  const PowerLimits limits{200.0, 200.0, 1e-11};
  REQUIRE(admissible_point(g, t, limits).has_value());
  CHECK(check_point_a(g, t, limits).empty());
  CHECK(check_corner_optimality(g, t, limits).empty());
  CHECK(check_point_a(g, t, limits, -1.0).find("SINR") != std::string::npos);
}
