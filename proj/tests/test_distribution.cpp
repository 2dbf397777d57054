#include <doctest.h>

#include <cmath>

#include "dagfuse/distribution.hpp"
#include "dagfuse/oracle.hpp"
#include "dagfuse/verify.hpp"

using namespace dagfuse;

TEST_CASE("empirical_pmf") {
  const auto half = empirical_pmf(CategoricalSample{{0, 0, 1, 1}}, 2);
  CHECK(half(0) == 0.5);
  CHECK(half(1) == 0.5);

  const auto point = empirical_pmf(CategoricalSample{{0}}, 3);
  CHECK(point(0) == 1.0);
  CHECK(point(1) == 0.0);
  CHECK(point(2) == 0.0);

  CHECK_THROWS_AS(empirical_pmf(CategoricalSample{}, 2), EmptySample);
  CHECK_THROWS_AS(empirical_pmf(CategoricalSample{{0, 2}}, 2), OutcomeOutOfRange);
  CHECK_THROWS_AS(empirical_pmf(CategoricalSample{{-1}}, 2), OutcomeOutOfRange);
}

TEST_CASE("empirical_pmf concentrates") {
  Rng rng(2);
  std::uniform_int_distribution<Index> cell(0, 3);
  CategoricalSample s;
  for (int i = 0; i < 10000; ++i) s.outcomes.push_back(cell(rng));
  const auto pmf = empirical_pmf(s, 4);
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(pmf(i) - 0.25) <= 0.02);
  CHECK(std::abs(pmf.sum() - 1.0) <= 1e-12);
}

TEST_CASE("smooth_histogram examples") {
  const SolverConfig<double> cfg;

  SUBCASE("zero penalty reproduces the empirical pmf") {
    const CategoricalSample s{{0, 1, 1, 2, 2, 2}};
    const auto out = smooth_histogram(s, build_chain(3), PenaltyConfig<double>{0, 0}, cfg);
    CHECK(out.pmf() == empirical_pmf(s, 3));
    CHECK(out.certificate.pass);
  }

  SUBCASE("two cells with all mass on the first fuse at lambda_ni = 0.6") {
    const auto out = smooth_histogram(CategoricalSample{{0, 0, 0}}, build_chain(2),
                                      PenaltyConfig<double>{0, 0.6}, cfg);
    CHECK(out.pmf()(0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(out.pmf()(1) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(out.regions.regions.size() == 1);
    CHECK(std::abs(out.pmf().sum() - 1.0) <= 1e-8);
  }

  SUBCASE("large lambda_ni gives a nondecreasing pmf that matches pava") {
    const CategoricalSample s{{0, 0, 0, 0, 1, 1, 1, 2, 3, 3, 4}};
    const auto out = smooth_histogram(s, build_chain(5), PenaltyConfig<double>{0, 1e4}, cfg);
    for (Index i = 0; i + 1 < 5; ++i) CHECK(out.pmf()(i) <= out.pmf()(i + 1) + 1e-4);
    CHECK((out.pmf() - pava_chain(out.empirical)).lpNorm<Eigen::Infinity>() <= 1e-3);
  }
}

TEST_CASE("smooth_histogram keeps the probability contract on random inputs") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = replicate_stream(51, StreamPurpose::kVerify, i);
    const auto inst = verify::random_instance(rng, 20);
    std::uniform_int_distribution<Index> cell(0, inst.dag.n_vertices() - 1);
    CategoricalSample s;
    for (int k = 0; k < 40; ++k) s.outcomes.push_back(cell(rng));
    const auto out = smooth_histogram(s, inst.dag, inst.pen, SolverConfig<double>{});
    CHECK(std::abs(out.pmf().sum() - 1.0) <= 1e-8);
    CHECK(out.pmf().minCoeff() >= out.empirical.minCoeff() - 1e-8);
    CHECK(out.pmf().maxCoeff() <= out.empirical.maxCoeff() + 1e-8);
    CHECK(out.certificate.pass);
  }
}

TEST_CASE("smooth_histogram surfaces failures instead of patching them") {
  const CategoricalSample s{{0, 0, 1, 2, 2, 2, 2}};
  SolverConfig<double> capped;
  capped.max_iters = 1;
  CHECK_THROWS_AS(smooth_histogram(s, build_chain(3), PenaltyConfig<double>{0.1, 0.3}, capped),
                  NotConverged);

  SmoothOptions strict;
  strict.contract_tol = -1;
  CHECK_THROWS_AS(
      smooth_histogram(s, build_chain(3), PenaltyConfig<double>{0.1, 0.3}, SolverConfig<double>{}, strict),
      ProbabilityContractViolated);
}
