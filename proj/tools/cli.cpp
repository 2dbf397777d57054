#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dagfuse/asymptotics.hpp"
#include "dagfuse/distribution.hpp"
#include "dagfuse/io.hpp"
#include "dagfuse/verify.hpp"

namespace dagfuse::cli {

namespace {

using nlohmann::json;

struct SolverFlags {
  double rho{1.0};
  std::optional<double> tol;
  std::optional<std::size_t> max_iters;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rho", rho, "Splitting penalty")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "Primal and dual residual tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  }

  SolverConfig<double> config() const {
    SolverConfig<double> cfg;
    cfg.rho = rho;
    if (tol) cfg.tol_primal = cfg.tol_dual = *tol;
    if (max_iters) cfg.max_iters = *max_iters;
    return cfg;
  }
};

struct GraphFlags {
  std::string path;
  std::optional<Index> n_vertices;

  void attach(CLI::App* cmd) {
    cmd->add_option("--graph", path, "Graph file (.json or CSV)")->required();
    cmd->add_option("--n-vertices", n_vertices, "Vertex count for CSV graphs");
  }

  Dag load() const { return io::read_graph(path, n_vertices); }
};

double positive_part_total(const Dag& dag, const Signal<double>& beta) {
  double total = 0;
  for (const Edge& e : dag.edges()) total += std::max(0.0, beta(e.source) - beta(e.target));
  return total;
}

int cmd_solve(const GraphFlags& graph, const std::string& signal_path, double lf, double lni,
              const SolverFlags& flags, const std::string& out_path, std::ostream& out) {
  const Dag dag = graph.load();
  const Signal<double> y = io::read_signal_csv(signal_path);
  const auto result = solve(y, dag, PenaltyConfig<double>{lf, lni}, flags.config());
  io::write_text(out_path, io::dump(io::to_json(result)));
  out << "solve: " << result.iterations << " iterations, objective "
      << io::format_double(result.objective) << (result.converged ? "" : " (NOT CONVERGED)")
      << "\n";
  return result.converged ? kOk : kNotConverged;
}

int cmd_path(const GraphFlags& graph, const std::string& signal_path,
             const std::vector<double>& ni_grid, std::vector<double> f_grid,
             const SolverFlags& flags, const std::string& out_path, std::ostream& out) {
  const Dag dag = graph.load();
  const Signal<double> y = io::read_signal_csv(signal_path);
  if (f_grid.empty()) f_grid.push_back(0.0);
  // lambda_f outer, lambda_ni inner: each lambda_ni sweep is contiguous.
  std::vector<PenaltyConfig<double>> lambdas;
  for (double lf : f_grid)
    for (double lni : ni_grid) lambdas.push_back({lf, lni});
  const auto path = solve_path(y, dag, lambdas, flags.config());

  std::string csv = "point,lambda_f,lambda_ni,converged,iterations,objective,positive_part";
  for (Index v = 0; v < dag.n_vertices(); ++v) csv += ",beta_" + std::to_string(v);
  csv += "\n";
  bool all_converged = true;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& r = path[i];
    all_converged = all_converged && r.converged;
    csv += std::to_string(i) + "," + io::format_double(lambdas[i].lambda_fused) + "," +
           io::format_double(lambdas[i].lambda_ni) + "," + (r.converged ? "1" : "0") + "," +
           std::to_string(r.iterations) + "," + io::format_double(r.objective) + "," +
           io::format_double(positive_part_total(dag, r.beta));
    for (Index v = 0; v < r.beta.size(); ++v) csv += "," + io::format_double(r.beta(v));
    csv += "\n";
  }
  io::write_text(out_path, csv);
  out << "path: " << path.size() << " points written to " << out_path << "\n";
  return all_converged ? kOk : kNotConverged;
}

int cmd_smooth(const GraphFlags& graph, const std::string& samples_path, double lf, double lni,
               const SolverFlags& flags, const std::string& out_path, std::ostream& out) {
  const Dag dag = graph.load();
  const CategoricalSample sample = io::read_samples(samples_path);
  const auto smoothed = smooth_histogram(sample, dag, PenaltyConfig<double>{lf, lni}, flags.config());
  io::write_text(out_path, io::dump(io::to_json(smoothed)));
  out << "smooth: " << smoothed.regions.regions.size() << " fused regions, certificate "
      << (smoothed.certificate.pass ? "pass" : "FAIL") << "\n";
  return kOk;
}

struct SimulateArgs {
  std::string truth;
  std::uint64_t n{0};
  std::size_t reps{0};
  double q{0.5};
  double lambda_f0{0};
  double lambda_ni0{0};
  std::uint64_t seed{0};
  std::size_t threads{1};
  double ks_resolution{kDefaultKsResolution};
  std::string out_finite;
  std::string out_limit;
  std::string report;
};

int cmd_simulate(const GraphFlags& graph, const SimulateArgs& a, const SolverFlags& flags,
                 std::ostream& out) {
  const Dag dag = graph.load();
  const Signal<double> p = io::read_signal_csv(a.truth);
  MonteCarloOptions mc;
  mc.solver = flags.config();
  mc.threads = a.threads;
  const PenaltyConfig<double> lambda0{a.lambda_f0, a.lambda_ni0};

  const EmpiricalLaw finite = mc_finite_sample(p, dag, a.n, lambda0, a.q, a.reps, a.seed, mc);
  LimitLawSpec spec;
  spec.true_signal = p;
  spec.lambda_f0 = a.lambda_f0;
  spec.lambda_ni0 = a.lambda_ni0;
  spec.q = a.q;
  const EmpiricalLaw limit = mc_limit(p, spec, dag, a.reps, a.seed, mc);
  io::write_law(a.out_finite, finite);
  io::write_law(a.out_limit, limit);

  const PenaltyConfig<double> used = finite_sample_penalty(lambda0, a.n, a.q);
  json report{{"seed", a.seed},
              {"n", a.n},
              {"reps", a.reps},
              {"q", a.q},
              {"lambda_f0", a.lambda_f0},
              {"lambda_ni0", a.lambda_ni0},
              {"estimator_lambda_f", used.lambda_fused},
              {"estimator_lambda_ni", used.lambda_ni},
              {"finite_sample", io::to_json(finite.meta, finite.seed)},
              {"limit", io::to_json(limit.meta, limit.seed)}};
  if (finite.samples.rows() > 0 && limit.samples.rows() > 0) {
    const json cmp = io::to_json(compare_laws(finite, limit, a.ks_resolution));
    for (const auto& [key, value] : cmp.items()) report[key] = value;
  }
  io::write_text(a.report, io::dump(report));
  out << "simulate: " << finite.samples.rows() << " finite-sample and " << limit.samples.rows()
      << " limit replicates\n";
  return finite.meta.failures + limit.meta.failures == 0 ? kOk : kNotConverged;
}

int cmd_verify(const std::string& suite, const verify::SuiteOptions& options,
               const std::string& out_path, std::ostream& out) {
  const auto report = verify::run_suite(suite, options);
  io::write_text(out_path, io::dump(io::to_json(report)));
  out << "verify " << suite << ": " << (report.pass ? "pass" : "FAIL") << "\n";
  for (const auto& [name, value] : report.worst)
    out << "  " << name << " = " << io::format_double(value) << " (threshold "
        << io::format_double(report.thresholds.at(name)) << ")\n";
  return report.pass ? kOk : kContractViolation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fused nearly-isotonic regression on DAG-indexed signals"};
  app.name("dagfuse");
  app.require_subcommand(1);

  GraphFlags graph;
  SolverFlags flags;
  std::string signal_path;
  std::string out_path;
  double lf = 0;
  double lni = 0;

  auto* solve_cmd = app.add_subcommand("solve", "Solve one penalized problem");
  graph.attach(solve_cmd);
  solve_cmd->add_option("--signal", signal_path, "Signal CSV (vertex,value)")->required();
  solve_cmd->add_option("--lambda-f", lf, "Fused penalty")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--lambda-ni", lni, "Nearly-isotonic penalty")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--out", out_path, "Result JSON")->required();
  flags.attach(solve_cmd);

  std::vector<double> ni_grid;
  std::vector<double> f_grid;
  auto* path_cmd = app.add_subcommand("path", "Warm-started sweep over penalty grids");
  graph.attach(path_cmd);
  path_cmd->add_option("--signal", signal_path, "Signal CSV (vertex,value)")->required();
  path_cmd->add_option("--lambda-ni-grid", ni_grid, "Comma-separated lambda_ni values")
      ->required()
      ->delimiter(',');
  path_cmd->add_option("--lambda-f-grid", f_grid, "Comma-separated lambda_f values")->delimiter(',');
  path_cmd->add_option("--out", out_path, "Path CSV")->required();
  flags.attach(path_cmd);

  std::string samples_path;
  auto* smooth_cmd = app.add_subcommand("smooth", "Smooth the histogram of categorical samples");
  graph.attach(smooth_cmd);
  smooth_cmd->add_option("--samples", samples_path, "One outcome per line, or CSV with 'outcome'")
      ->required();
  smooth_cmd->add_option("--lambda-f", lf, "Fused penalty")->check(CLI::NonNegativeNumber);
  smooth_cmd->add_option("--lambda-ni", lni, "Nearly-isotonic penalty")->check(CLI::NonNegativeNumber);
  smooth_cmd->add_option("--out", out_path, "Output JSON")->required();
  flags.attach(smooth_cmd);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo of the finite-sample and limit laws");
  graph.attach(sim_cmd);
  sim_cmd->add_option("--truth", sim.truth, "True pmf as signal CSV")->required();
  sim_cmd->add_option("--n", sim.n, "Sample size")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--reps", sim.reps, "Replicates")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--q", sim.q, "Rate exponent")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--lambda-f0", sim.lambda_f0, "Limit fused penalty")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--lambda-ni0", sim.lambda_ni0, "Limit nearly-isotonic penalty")
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->required();
  sim_cmd->add_option("--threads", sim.threads, "Worker cap")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--ks-resolution", sim.ks_resolution, "Rounding grid for KS ties (0 = off)")
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--out-finite", sim.out_finite, "Finite-sample law CSV")->required();
  sim_cmd->add_option("--out-limit", sim.out_limit, "Limit law CSV")->required();
  sim_cmd->add_option("--report", sim.report, "Comparison report JSON")->required();
  flags.attach(sim_cmd);

  std::string suite;
  verify::SuiteOptions verify_options;
  auto* verify_cmd = app.add_subcommand("verify", "Run a randomized property suite");
  verify_cmd->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"theorem1", "kkt", "oracles", "decomposition"}));
  verify_cmd->add_option("--seed", verify_options.seed, "RNG seed")->required();
  verify_cmd->add_option("--instances", verify_options.instances, "Instance count (0 = default)");
  verify_cmd->add_option("--subgradient-iters", verify_options.subgradient_iters,
                         "Subgradient oracle iterations")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--threads", verify_options.threads, "Worker cap")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--out", out_path, "Report JSON")->required();
  flags.attach(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(graph, signal_path, lf, lni, flags, out_path, out);
    if (*path_cmd) return cmd_path(graph, signal_path, ni_grid, f_grid, flags, out_path, out);
    if (*smooth_cmd) return cmd_smooth(graph, samples_path, lf, lni, flags, out_path, out);
    if (*sim_cmd) return cmd_simulate(graph, sim, flags, out);
    verify_options.solver = flags.config();
    return cmd_verify(suite, verify_options, out_path, out);
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const ProbabilityContractViolated& e) {
    err << "error: " << e.what() << "\n";
    return kContractViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace dagfuse::cli
