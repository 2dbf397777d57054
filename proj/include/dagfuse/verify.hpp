#pragma once

// Randomized property suites behind `dagfuse verify`. Each suite is a pure
// function of its options; reports carry worst-case gaps, never timings, so
// identical options give identical reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dagfuse/asymptotics.hpp"
#include "dagfuse/solver.hpp"

namespace dagfuse::verify {

struct Instance {
  std::string family;
  Dag dag;
  Signal<double> y;
  PenaltyConfig<double> pen;
};

/// Random DAG: vertices placed in a random order, each forward pair joined
/// with probability edge_prob.
Dag random_dag(Rng& rng, Index n, double edge_prob);

/// A chain, 2-D grid, diamond or random DAG with at most max_n vertices,
/// y ~ U[0,1]^n and both penalties ~ U[0, max_lambda].
Instance random_instance(Rng& rng, Index max_n, double max_lambda = 2.0);

struct SuiteOptions {
  std::uint64_t seed{0};
  /// 0 selects the suite default.
  std::size_t instances{0};
  std::size_t threads{1};
  SolverConfig<double> solver{};
  /// Iterations of the subgradient oracle in the oracles suite.
  std::size_t subgradient_iters{1000000};
};

struct SuiteReport {
  std::string suite;
  bool pass{true};
  std::size_t instances{0};
  /// Worst-case value of each monitored quantity, with its threshold.
  std::map<std::string, double> worst;
  std::map<std::string, double> thresholds;
  /// Pass flag of each individual check.
  std::map<std::string, bool> checks;
  std::vector<std::string> failures;

  void record(const std::string& name, double value, double threshold);
  void fail(const std::string& message);
};

/// Sum and range preservation of solve() on random instances.
SuiteReport theorem1(const SuiteOptions& options);

/// KKT certificates and fused-region stationarity on the theorem1 instances.
SuiteReport kkt(const SuiteOptions& options);

/// Grid oracle (n <= 3), subgradient oracle (n <= 10) and the PAVA limit on
/// chains at lambda_ni = 1e4.
SuiteReport oracles(const SuiteOptions& options);

/// Concatenation of per-region nearly-isotonic fits on chain(6) and
/// grid(2,3) with block-constant isotonic truth.
SuiteReport decomposition(const SuiteOptions& options);

SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace dagfuse::verify
