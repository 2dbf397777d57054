#include "dagfuse/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "dagfuse/certificate.hpp"
#include "dagfuse/oracle.hpp"
#include "dagfuse/parallel.hpp"

namespace dagfuse::verify {

namespace {

constexpr double kPreservationTol = 1e-8;
constexpr double kKktTol = 1e-6;
constexpr double kGridSlack = 1e-6;
constexpr double kGridStep = 1e-3;
constexpr double kSubgradientRelTol = 1e-6;
constexpr double kPavaTol = 1e-3;
constexpr double kPavaLambda = 1e4;
constexpr double kDecompositionTol = 1e-8;

Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Signal<double> uniform_signal(Rng& rng, Index n) {
  Signal<double> y(n);
  for (Index i = 0; i < n; ++i) y(i) = uniform(rng, 0.0, 1.0);
  return y;
}

// Diamonds stacked end to end: 0 -> {1,2} -> 3 -> {4,5} -> 6 ...
Dag stacked_diamonds(Index count) {
  std::vector<Edge> edges;
  for (Index d = 0; d < count; ++d) {
    const Index top = 3 * d;
    edges.push_back({top, top + 1});
    edges.push_back({top, top + 2});
    edges.push_back({top + 1, top + 3});
    edges.push_back({top + 2, top + 3});
  }
  return Dag::from_edge_list(3 * count + 1, std::move(edges));
}

double sum_gap(const Signal<double>& y, const Signal<double>& beta) {
  return std::abs(beta.sum() - y.sum()) / (1.0 + std::abs(y.sum()));
}

double range_violation(const Signal<double>& y, const Signal<double>& beta) {
  return std::max({0.0, y.minCoeff() - beta.minCoeff(), beta.maxCoeff() - y.maxCoeff()});
}

std::size_t count_or(std::size_t requested, std::size_t fallback) {
  return requested == 0 ? fallback : requested;
}

// Runs body(i, rng) over instances with per-instance streams and collects
// results in index order.
template <typename Result, typename Body>
std::vector<Result> per_instance(const SuiteOptions& options, std::size_t count,
                                 std::uint64_t salt, Body&& body) {
  std::vector<std::optional<Result>> slots(count);
  parallel_for(count, options.threads, [&](std::size_t i) {
    Rng rng = replicate_stream(options.seed, StreamPurpose::kVerify, (salt << 32) | i);
    slots[i].emplace(body(i, rng));
  });
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace

void SuiteReport::record(const std::string& name, double value, double threshold) {
  auto [it, inserted] = worst.emplace(name, value);
  if (!inserted) it->second = std::max(it->second, value);
  thresholds[name] = threshold;
  const bool ok = it->second <= threshold;
  checks[name] = ok;
  if (!ok) pass = false;
}

void SuiteReport::fail(const std::string& message) {
  pass = false;
  failures.push_back(message);
}

Dag random_dag(Rng& rng, Index n, double edge_prob) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> edges;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      if (uniform(rng, 0.0, 1.0) < edge_prob)
        edges.push_back({order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]});
  return Dag::from_edge_list(n, std::move(edges));
}

Instance random_instance(Rng& rng, Index max_n, double max_lambda) {
  const int family = static_cast<int>(uniform_index(rng, 0, max_n >= 4 ? 3 : 1));
  std::optional<Dag> dag;
  std::string name;
  switch (family) {
    case 0:
      name = "chain";
      dag = build_chain(uniform_index(rng, 1, max_n));
      break;
    case 1:
      name = "random";
      dag = random_dag(rng, uniform_index(rng, std::min<Index>(2, max_n), max_n),
                       uniform(rng, 0.1, 0.6));
      break;
    case 2: {
      name = "grid";
      const Index s1 = uniform_index(rng, 1, std::max<Index>(1, max_n / 2));
      const Index s2 = uniform_index(rng, 1, std::max<Index>(1, max_n / s1));
      dag = build_grid2d(s1, s2);
      break;
    }
    default:
      name = "diamond";
      dag = stacked_diamonds(uniform_index(rng, 1, (max_n - 1) / 3));
      break;
  }
  Signal<double> y = uniform_signal(rng, dag->n_vertices());
  PenaltyConfig<double> pen{uniform(rng, 0.0, max_lambda), uniform(rng, 0.0, max_lambda)};
  return Instance{name, std::move(*dag), std::move(y), pen};
}

SuiteReport theorem1(const SuiteOptions& options) {
  struct Outcome {
    bool converged;
    double sum_gap;
    double range_violation;
    std::string family;
  };
  const std::size_t count = count_or(options.instances, 200);
  auto outcomes = per_instance<Outcome>(options, count, 1, [&](std::size_t, Rng& rng) {
    const Instance inst = random_instance(rng, 30);
    const auto fit = solve(inst.y, inst.dag, inst.pen, options.solver);
    return Outcome{fit.converged, sum_gap(inst.y, fit.beta), range_violation(inst.y, fit.beta),
                   inst.family};
  });

  SuiteReport report;
  report.suite = "theorem1";
  report.instances = count;
  report.record("max_sum_gap", 0.0, kPreservationTol);
  report.record("max_range_violation", 0.0, kPreservationTol);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.converged) report.fail("instance " + std::to_string(i) + " (" + o.family + ") did not converge");
    report.record("max_sum_gap", o.sum_gap, kPreservationTol);
    report.record("max_range_violation", o.range_violation, kPreservationTol);
  }
  return report;
}

SuiteReport kkt(const SuiteOptions& options) {
  struct Outcome {
    bool converged;
    KktReport<double> cert;
    double region_gap;
  };
  const std::size_t count = count_or(options.instances, 200);
  // Salt 1: the same instances as theorem1 for the same seed.
  auto outcomes = per_instance<Outcome>(options, count, 1, [&](std::size_t, Rng& rng) {
    const Instance inst = random_instance(rng, 30);
    const auto fit = solve(inst.y, inst.dag, inst.pen, options.solver);
    const auto cert = kkt_certificate(inst.y, inst.dag, inst.pen, fit, kKktTol);
    const auto part = extract_fused_regions(fit.beta, inst.dag);
    const auto predicted = stationary_region_values(inst.y, inst.dag, inst.pen, part);
    double gap = 0;
    for (std::size_t r = 0; r < predicted.size(); ++r)
      gap = std::max(gap, std::abs(predicted[r] - part.region_values[r]));
    return Outcome{fit.converged, cert, gap};
  });

  SuiteReport report;
  report.suite = "kkt";
  report.instances = count;
  for (const char* name : {"max_stationarity_gap", "max_box_violation",
                           "max_complementarity_violation", "max_region_stationarity_gap"})
    report.record(name, 0.0, kKktTol);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.converged) report.fail("instance " + std::to_string(i) + " did not converge");
    if (!o.cert.pass) report.fail("instance " + std::to_string(i) + " failed its KKT certificate");
    report.record("max_stationarity_gap", o.cert.stationarity_gap, kKktTol);
    report.record("max_box_violation", o.cert.box_violation, kKktTol);
    report.record("max_complementarity_violation", o.cert.complementarity_violation, kKktTol);
    report.record("max_region_stationarity_gap", o.region_gap, kKktTol);
  }
  return report;
}

SuiteReport oracles(const SuiteOptions& options) {
  const std::size_t count = count_or(options.instances, 50);
  SuiteReport report;
  report.suite = "oracles";
  report.instances = 3 * count;

  struct GridOutcome {
    double excess;        // solver - grid, must be <= slack
    double sandwich_gap;  // (grid - bound) - solver, must be <= 0
  };
  auto grid = per_instance<GridOutcome>(options, count, 2, [&](std::size_t, Rng& rng) {
    const Instance inst = random_instance(rng, kGridOracleMaxVertices);
    const double solver_obj =
        solve(inst.y, inst.dag, inst.pen, options.solver).objective;
    const auto lattice = grid_oracle(inst.y, inst.dag, inst.pen, 0.0, 1.0, kGridStep);
    const double grid_obj = objective(inst.y, inst.dag, inst.pen, lattice);
    // Per-coordinate Lipschitz bound of the objective on [0,1]^n.
    double lipschitz = 0;
    for (Index v = 0; v < inst.dag.n_vertices(); ++v) {
      Index degree = 0;
      for (const Edge& e : inst.dag.edges()) degree += (e.source == v || e.target == v);
      lipschitz = std::max(lipschitz, 1.0 + static_cast<double>(degree) *
                                                (inst.pen.lambda_fused + inst.pen.lambda_ni));
    }
    const double bound = static_cast<double>(inst.dag.n_vertices()) * kGridStep * lipschitz;
    return GridOutcome{solver_obj - grid_obj, (grid_obj - bound) - solver_obj};
  });
  report.record("grid_max_excess", -1.0, kGridSlack);
  report.record("grid_sandwich_violation", -1.0, 0.0);
  for (const auto& o : grid) {
    report.record("grid_max_excess", o.excess, kGridSlack);
    report.record("grid_sandwich_violation", o.sandwich_gap, 0.0);
  }

  auto sub = per_instance<double>(options, count, 3, [&](std::size_t, Rng& rng) {
    const Instance inst = random_instance(rng, 10);
    const double solver_obj = solve(inst.y, inst.dag, inst.pen, options.solver).objective;
    const auto iterate = subgradient_oracle(inst.y, inst.dag, inst.pen, options.subgradient_iters);
    const double oracle_obj = objective(inst.y, inst.dag, inst.pen, iterate);
    return std::abs(solver_obj - oracle_obj) / std::max(std::abs(oracle_obj), 1e-300);
  });
  report.record("subgradient_max_rel_gap", 0.0, kSubgradientRelTol);
  for (double g : sub) report.record("subgradient_max_rel_gap", g, kSubgradientRelTol);

  auto pava = per_instance<double>(options, count, 4, [&](std::size_t, Rng& rng) {
    const Index n = uniform_index(rng, 1, 20);
    const Signal<double> y = uniform_signal(rng, n);
    const auto fit = solve(y, build_chain(n), PenaltyConfig<double>{0.0, kPavaLambda}, options.solver);
    return (fit.beta - pava_chain(y)).lpNorm<Eigen::Infinity>();
  });
  report.record("pava_max_gap", 0.0, kPavaTol);
  for (double g : pava) report.record("pava_max_gap", g, kPavaTol);
  return report;
}

SuiteReport decomposition(const SuiteOptions& options) {
  struct Case {
    const char* name;
    Dag dag;
    Signal<double> truth;
  };
  Signal<double> chain_truth(6);
  chain_truth << 0, 0, 0, 1, 1, 1;
  // grid(2,3), row-major: [[0,0,1],[0,1,1]]
  Signal<double> grid_truth(6);
  grid_truth << 0, 0, 1, 0, 1, 1;
  std::vector<Case> cases;
  cases.push_back({"chain6", build_chain(6), chain_truth});
  cases.push_back({"grid2x3", build_grid2d(2, 3), grid_truth});

  const std::size_t draws = count_or(options.instances, 100);
  SuiteReport report;
  report.suite = "decomposition";
  report.instances = draws * cases.size();
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const std::string key = std::string(cases[c].name) + "_max_gap";
    report.record(key, 0.0, kDecompositionTol);
    auto gaps = per_instance<double>(options, draws, 5 + c, [&](std::size_t, Rng& rng) {
      LimitLawSpec spec;
      spec.true_signal = cases[c].truth;
      spec.lambda_ni0 = uniform(rng, 0.1, 3.0);
      std::normal_distribution<double> normal;
      Signal<double> psi(cases[c].truth.size());
      for (Index i = 0; i < psi.size(); ++i) psi(i) = normal(rng);
      return decomposition_check(psi, spec, cases[c].dag, options.solver).max_gap;
    });
    for (double g : gaps) report.record(key, g, kDecompositionTol);
  }
  return report;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  if (name == "theorem1") return theorem1(options);
  if (name == "kkt") return kkt(options);
  if (name == "oracles") return oracles(options);
  if (name == "decomposition") return decomposition(options);
  throw PreconditionViolation("unknown verification suite '" + name + "'");
}

}  // namespace dagfuse::verify
