#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dagfuse/oracle.hpp"
#include "dagfuse/solver.hpp"
#include "dagfuse/verify.hpp"

using namespace dagfuse;

namespace {

Signal<double> vec(std::initializer_list<double> v) {
  Signal<double> out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

const SolverConfig<double> kCfg{};

}  // namespace

TEST_CASE("two-node nearly-isotonic solutions") {
  const Dag c2 = build_chain(2);
  const Signal<double> y = vec({1, 0});

  SUBCASE("unfused branch: beta = (1 - lambda, lambda) while 1 - 2 lambda > 0") {
    const PenaltyConfig<double> pen{0, 0.2};
    const auto r = solve(y, c2, pen, kCfg);
    CHECK(r.converged);
    CHECK(r.beta(0) == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(r.beta(1) == doctest::Approx(0.2).epsilon(1e-9));
    const auto lattice = grid_oracle(y, c2, pen, -2.0, 2.0, 1e-3);
    CHECK((lattice - r.beta).lpNorm<Eigen::Infinity>() <= 1e-3);
  }

  SUBCASE("fused once lambda >= 1/2") {
    const auto r = solve(y, c2, PenaltyConfig<double>{0, 0.6}, kCfg);
    CHECK(r.converged);
    CHECK(r.beta(0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.beta(1) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.edge_dual(0) == doctest::Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("zero penalty returns y exactly") {
  Rng rng(3);
  const Dag dag = verify::random_dag(rng, 12, 0.4);
  Signal<double> y = Signal<double>::LinSpaced(12, -1.0, 2.5);
  const auto r = solve(y, dag, PenaltyConfig<double>{0, 0}, kCfg);
  CHECK(r.converged);
  CHECK(r.beta == y);
  CHECK(r.objective == 0.0);
}

TEST_CASE("objective values") {
  const Dag c2 = build_chain(2);
  const Signal<double> y = vec({1, 0});
  CHECK(objective(y, c2, PenaltyConfig<double>{0, 0}, y) == 0.0);
  CHECK(objective(y, c2, PenaltyConfig<double>{0, 0.2}, vec({0.8, 0.2})) ==
        doctest::Approx(0.16).epsilon(1e-14));
  // A negative difference counts only toward the fused term.
  CHECK(objective(y, c2, PenaltyConfig<double>{1, 0}, vec({0, 1})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(objective(y, c2, PenaltyConfig<double>{}, vec({1, 2, 3})), DimensionMismatch);
}

TEST_CASE("solve rejects bad inputs") {
  const Dag c3 = build_chain(3);
  CHECK_THROWS_AS(solve(vec({1, 2}), c3, PenaltyConfig<double>{0, 1}, kCfg), DimensionMismatch);
  CHECK_THROWS_AS(solve(vec({1, 2, 3}), c3, PenaltyConfig<double>{-1, 1}, kCfg), PreconditionViolation);
  SolverConfig<double> bad;
  bad.rho = 0;
  CHECK_THROWS_AS(solve(vec({1, 2, 3}), c3, PenaltyConfig<double>{0, 1}, bad), PreconditionViolation);
}

TEST_CASE("iteration cap yields a partial result") {
  SolverConfig<double> cfg;
  cfg.max_iters = 2;
  const Signal<double> y = vec({5, 1, 4, 2, 3});
  const auto r = solve(y, build_chain(5), PenaltyConfig<double>{0.3, 0.7}, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.beta.size() == 5);
  CHECK_THROWS_AS(require_converged(r), NotConverged);
}

TEST_CASE("solve_path on two nodes follows the closed form") {
  const std::vector<PenaltyConfig<double>> lambdas{{0, 0}, {0, 0.25}, {0, 0.5}, {0, 1}};
  const auto path = solve_path(vec({1, 0}), build_chain(2), lambdas, kCfg);
  REQUIRE(path.size() == 4);
  const double expected[4][2] = {{1, 0}, {0.75, 0.25}, {0.5, 0.5}, {0.5, 0.5}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(path[i].converged);
    CHECK(path[i].beta(0) == doctest::Approx(expected[i][0]).epsilon(1e-9));
    CHECK(path[i].beta(1) == doctest::Approx(expected[i][1]).epsilon(1e-9));
  }

  const auto single = solve_path(vec({1, 0}), build_chain(2), {{0.1, 0.3}}, kCfg);
  const auto direct = solve(vec({1, 0}), build_chain(2), PenaltyConfig<double>{0.1, 0.3}, kCfg);
  CHECK((single.front().beta - direct.beta).lpNorm<Eigen::Infinity>() <= 1e-12);

  CHECK_THROWS_AS(solve_path(vec({1, 0}), build_chain(2), {}, kCfg), EmptyInput);
  CHECK_THROWS_AS(solve_path(vec({1, 0}), build_chain(2), {{0, 1}, {0, -1}}, kCfg),
                  PreconditionViolation);
}

TEST_CASE("large lambda_ni pools a decreasing chain to its mean") {
  const auto path =
      solve_path(vec({5, 4, 3, 2, 1}), build_chain(5), {{0, 1e4}}, kCfg);
  CHECK(path.front().converged);
  for (Index i = 0; i < 5; ++i) CHECK(std::abs(path.front().beta(i) - 3.0) <= 1e-4);
}

TEST_CASE("sum and range preservation on random DAGs") {
  double worst_sum = 0;
  double worst_range = 0;
  for (std::uint64_t i = 0; i < 60; ++i) {
    Rng rng = replicate_stream(11, StreamPurpose::kVerify, i);
    const auto inst = verify::random_instance(rng, 30);
    const auto r = solve(inst.y, inst.dag, inst.pen, kCfg);
    REQUIRE(r.converged);
    worst_sum = std::max(worst_sum, std::abs(r.beta.sum() - inst.y.sum()) / (1 + std::abs(inst.y.sum())));
    worst_range = std::max({worst_range, inst.y.minCoeff() - r.beta.minCoeff(),
                            r.beta.maxCoeff() - inst.y.maxCoeff()});
  }
  CHECK(worst_sum <= 1e-8);
  CHECK(worst_range <= 1e-8);
}

TEST_CASE("total positive part is nonincreasing along a lambda_ni path") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = replicate_stream(5, StreamPurpose::kVerify, i);
    const auto inst = verify::random_instance(rng, 20);
    std::vector<PenaltyConfig<double>> lambdas;
    for (double l = 0; l <= 2.0; l += 0.1) lambdas.push_back({inst.pen.lambda_fused, l});
    const auto path = solve_path(inst.y, inst.dag, lambdas, kCfg);
    double prev = INFINITY;
    for (const auto& r : path) {
      double pos = 0;
      for (const Edge& e : inst.dag.edges()) pos += std::max(0.0, r.beta(e.source) - r.beta(e.target));
      CHECK(pos <= prev + 1e-8);
      prev = pos;
    }
  }
}

TEST_CASE("warm start does not change the minimizer") {
  Rng rng = replicate_stream(9, StreamPurpose::kVerify, 0);
  const auto inst = verify::random_instance(rng, 25);
  const auto cold = solve(inst.y, inst.dag, inst.pen, kCfg);
  const auto other = solve(inst.y, inst.dag, PenaltyConfig<double>{0.5, 0.5}, kCfg);
  const auto warm = solve(inst.y, inst.dag, inst.pen, kCfg, &other);
  CHECK((cold.beta - warm.beta).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("solver is generic over the scalar type") {
  Signal<long double> y(2);
  y << 1.0L, 0.0L;
  SolverConfig<long double> cfg;
  const auto r = solve(y, build_chain(2), PenaltyConfig<long double>{0, 0.2L}, cfg);
  CHECK(r.converged);
  CHECK(static_cast<double>(r.beta(0)) == doctest::Approx(0.8).epsilon(1e-9));
}
