#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dagfuse/oracle.hpp"
#include "dagfuse/verify.hpp"

using namespace dagfuse;

namespace {

Signal<double> vec(std::initializer_list<double> v) {
  Signal<double> out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Isotonic fit by the min-max formula: beta_i = max_{s<=i} min_{t>=i} mean(y[s..t]).
Signal<double> minmax_isotonic(const Signal<double>& y) {
  const Index n = y.size();
  Signal<double> out(n);
  for (Index i = 0; i < n; ++i) {
    double best = -INFINITY;
    for (Index s = 0; s <= i; ++s) {
      double inner = INFINITY;
      for (Index t = i; t < n; ++t) inner = std::min(inner, y.segment(s, t - s + 1).mean());
      best = std::max(best, inner);
    }
    out(i) = best;
  }
  return out;
}

}  // namespace

TEST_CASE("pava examples") {
  CHECK(pava_chain(vec({2, 1})) == vec({1.5, 1.5}));
  CHECK(pava_chain(vec({3, 1, 2})) == vec({2, 2, 2}));
  CHECK(pava_chain(vec({1, 2, 3})) == vec({1, 2, 3}));
  CHECK(pava_chain(vec({4})) == vec({4}));
  CHECK_THROWS_AS(pava_chain(Signal<double>()), EmptyInput);
}

TEST_CASE("pava agrees with the min-max formula") {
  Rng rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 200; ++rep) {
    Signal<double> y(1 + rep % 12);
    for (Index i = 0; i < y.size(); ++i) y(i) = u(rng);
    CHECK((pava_chain(y) - minmax_isotonic(y)).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("grid oracle") {
  const Signal<double> y = vec({1, 0});
  const auto b = grid_oracle(y, build_chain(2), PenaltyConfig<double>{0, 0.2}, 0.0, 1.0, 1e-3);
  CHECK(b(0) == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(b(1) == doctest::Approx(0.2).epsilon(1e-9));

  const auto fused = grid_oracle(y, build_chain(2), PenaltyConfig<double>{0, 0.6}, 0.0, 1.0, 1e-3);
  CHECK(fused(0) == doctest::Approx(0.5));
  CHECK(fused(1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(grid_oracle(vec({1, 2, 3, 4}), build_chain(4), PenaltyConfig<double>{}, 0.0, 1.0, 0.1),
                  TooLarge);
  CHECK_THROWS_AS(grid_oracle(y, build_chain(2), PenaltyConfig<double>{}, 1.0, 0.0, 0.1),
                  PreconditionViolation);
}

TEST_CASE("solver objective never exceeds the grid oracle by more than 1e-6") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = replicate_stream(31, StreamPurpose::kVerify, i);
    const auto inst = verify::random_instance(rng, 3);
    const auto lattice = grid_oracle(inst.y, inst.dag, inst.pen, 0.0, 1.0, 1e-3);
    const auto r = solve(inst.y, inst.dag, inst.pen, SolverConfig<double>{});
    CHECK(r.objective <= objective(inst.y, inst.dag, inst.pen, lattice) + 1e-6);
  }
}

TEST_CASE("subgradient oracle approaches the two-node solution") {
  const auto b = subgradient_oracle(vec({1, 0}), build_chain(2), PenaltyConfig<double>{0, 0.2}, 100000);
  CHECK(std::abs(b(0) - 0.8) <= 1e-3);
  CHECK(std::abs(b(1) - 0.2) <= 1e-3);
  CHECK_THROWS_AS(subgradient_oracle(vec({1, 0}), build_chain(2), PenaltyConfig<double>{}, 0),
                  PreconditionViolation);
}

TEST_CASE("solver matches pava at very large lambda_ni") {
  for (int rep = 0; rep < 10; ++rep) {
    Rng rng = replicate_stream(41, StreamPurpose::kVerify, static_cast<std::uint64_t>(rep));
    std::uniform_real_distribution<double> u(0, 1);
    Signal<double> y(2 + rep);
    for (Index i = 0; i < y.size(); ++i) y(i) = u(rng);
    const auto r = solve(y, build_chain(y.size()), PenaltyConfig<double>{0, 1e4}, SolverConfig<double>{});
    CHECK(r.converged);
    CHECK((r.beta - pava_chain(y)).lpNorm<Eigen::Infinity>() <= 1e-3);
  }
}

TEST_CASE("grid oracle trivial cases") {
  const auto near = grid_oracle(vec({0.1234, 0.5678}), build_chain(2), PenaltyConfig<double>{0, 0}, 0.0, 1.0, 1e-3);
  CHECK(near(0) == doctest::Approx(0.123));
  CHECK(near(1) == doctest::Approx(0.568));

  for (double lni : {0.1, 1.0, 5.0}) {
    const auto iso = grid_oracle(vec({0, 1}), build_chain(2), PenaltyConfig<double>{0, lni}, -2.0, 2.0, 1e-3);
    CHECK(std::abs(iso(0)) <= 1e-3);
    CHECK(std::abs(iso(1) - 1.0) <= 1e-3);
  }
}

TEST_CASE("subgradient oracle examples") {
  const auto y = vec({0.3, 0.9, 0.1});
  CHECK((subgradient_oracle(y, build_chain(3), PenaltyConfig<double>{0, 0}, 1000) - y).lpNorm<Eigen::Infinity>() <=
        1e-12);

  const auto fused = subgradient_oracle(vec({1, 0}), build_chain(2), PenaltyConfig<double>{0, 0.6}, 1000000);
  CHECK(std::abs(fused(0) - 0.5) <= 1e-4);
  CHECK(std::abs(fused(1) - 0.5) <= 1e-4);
}

TEST_CASE("subgradient and grid oracles agree within two lattice steps") {
  const double step = 1e-3;
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = replicate_stream(61, StreamPurpose::kVerify, i);
    const auto inst = verify::random_instance(rng, 3);
    const auto lattice = grid_oracle(inst.y, inst.dag, inst.pen, 0.0, 1.0, step);
    const auto sg = subgradient_oracle(inst.y, inst.dag, inst.pen, 1000000);
    CHECK((lattice - sg).lpNorm<Eigen::Infinity>() <= 2 * step);
  }
}
