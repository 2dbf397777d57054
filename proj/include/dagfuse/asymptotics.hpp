#pragma once

// Desk-scale laboratory for the limiting distribution of
//   n^q (beta*_n - beta_true),
// the scaled error of the penalized estimator built on an empirical pmf.
//
// Penalty convention. Limit penalties (lambda_f0, lambda_ni0) are expressed in
// the units of the limit objective
//
//   V(w) = -2 psi^T w + w^T w + c^T w
//          + lambda_f0 * sum_{eq edges} |w_i - w_j|
//          + lambda_ni0 * sum_{eq edges} (w_i - w_j)_+,
//
// and the finite-sample penalty sequence is lambda_n = lambda0 * n^q in the
// same units. Rewriting the 1/2-squared-loss objective around beta_true with
// beta = beta_true + w / n^q and multiplying by 2 n^{2q} shows that the
// estimator itself must be run with lambda_n / (2 n^{2q}) = lambda0 / (2 n^q)
// for its scaled error to minimize a sequence of objectives that converges
// to V. finite_sample_penalty() owns that conversion.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dagfuse/solver.hpp"

namespace dagfuse {

struct LimitLawSpec {
  Signal<double> true_signal;
  double lambda_f0{0};
  double lambda_ni0{0};
  double q{0.5};
  double eq_tol{1e-12};

  void validate(const Dag& dag) const;
};

struct EdgeClassification {
  std::vector<Index> eq_edges;
  std::vector<Index> pos_edges;
  std::vector<Index> neg_edges;
};

/// Edge (i, j) is eq when |b_i - b_j| <= eq_tol, pos when b_i - b_j > eq_tol
/// and neg otherwise, for b the true signal.
EdgeClassification classify_edges(const LimitLawSpec& spec, const Dag& dag);

/// Gradient c of the linear part of V:
///   c = lambda_f0 * sum_{pos, neg} sign(b_i - b_j) (e_i - e_j)
///     + lambda_ni0 * sum_{pos} (e_i - e_j).
Signal<double> linear_shift(const LimitLawSpec& spec, const Dag& dag,
                            const EdgeClassification& cls);

/// Literal evaluation of V(w).
double objective_V(const Signal<double>& w, const Signal<double>& psi, const LimitLawSpec& spec,
                   const Dag& dag);

/// argmin_w V(w). Since
///   V(w) / 2 = 1/2 ||w - (psi - c/2)||^2 + (lambda_f0/2) sum_eq |.|
///              + (lambda_ni0/2) sum_eq (.)_+ + const,
/// this is solve() on target psi - c/2 over the eq-edge subgraph with halved
/// penalties. Throws NotConverged if the inner solve does.
Signal<double> limit_law_solve(const Signal<double>& psi, const LimitLawSpec& spec,
                               const Dag& dag, const SolverConfig<double>& cfg);

// Randomness. Every replicate draws from its own stream keyed by
// (seed, purpose, replicate index), so results do not depend on the order in
// which replicates run.

using Rng = std::mt19937_64;

enum class StreamPurpose : std::uint32_t {
  kFiniteSample = 1,
  kLimit = 2,
  kVerify = 3,
};

Rng replicate_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t replicate);

/// Throws InvalidProbabilityVector unless p >= 0 and |sum p - 1| <= 1e-9.
void validate_probability_vector(const Signal<double>& p);

/// One draw of psi ~ N(0, diag(p) - p p^T) via psi = diag(sqrt p)(z - (u^T z) u)
/// with z standard normal and u = sqrt(p). Entries sum to zero.
Signal<double> sample_psi_multinomial(const Signal<double>& p, Rng& rng);

/// Empirical pmf of n categorical draws from p (drawn as multinomial counts).
Signal<double> sample_empirical_pmf(const Signal<double>& p, std::uint64_t n, Rng& rng);

/// Penalty for the estimator at sample size n; see the header comment.
PenaltyConfig<double> finite_sample_penalty(const PenaltyConfig<double>& lambda0, std::uint64_t n,
                                            double q);

struct LawMeta {
  std::string kind;  // "finite_sample" or "limit"
  std::uint64_t sample_size{0};  // 0 for the limit law
  double q{0.5};
  double lambda_f0{0};
  double lambda_ni0{0};
  std::size_t reps_requested{0};
  std::size_t failures{0};
  /// Replicate index of every stored row; failed replicates are absent.
  std::vector<std::size_t> replicate_ids;
  std::vector<std::size_t> failed_replicates;
};

/// Replicates x coordinates.
struct EmpiricalLaw {
  Eigen::MatrixXd samples;
  std::uint64_t seed{0};
  LawMeta meta;
};

struct MonteCarloOptions {
  SolverConfig<double> solver{};
  std::size_t threads{1};
};

/// Per replicate: empirical pmf of n draws from p, solve with
/// finite_sample_penalty(lambda0, n, q), record n^q (beta* - p).
EmpiricalLaw mc_finite_sample(const Signal<double>& p, const Dag& dag, std::uint64_t n,
                              const PenaltyConfig<double>& lambda0, double q, std::size_t reps,
                              std::uint64_t seed, const MonteCarloOptions& options = {});

/// Per replicate: psi from sample_psi_multinomial(p), then limit_law_solve.
EmpiricalLaw mc_limit(const Signal<double>& p, const LimitLawSpec& spec, const Dag& dag,
                      std::size_t reps, std::uint64_t seed,
                      const MonteCarloOptions& options = {});

/// Two-sample Kolmogorov-Smirnov statistic (handles ties).
double ks_statistic(std::vector<double> a, std::vector<double> b);

struct LawComparison {
  double ks_resolution{0};
  std::vector<double> per_coord_ks;
  double mean_gap{0};
  double cov_gap{0};
};

/// Penalized laws carry atoms (a fully fused region has scaled error exactly
/// 0), which solver round-off smears at a scale that differs between the two
/// laws. Before the KS statistics, coordinates are rounded to the nearest
/// multiple of ks_resolution so that values equal within solver precision
/// count as ties; 0 disables rounding. Means and covariances use raw values.
inline constexpr double kDefaultKsResolution = 1e-6;
LawComparison compare_laws(const EmpiricalLaw& a, const EmpiricalLaw& b,
                           double ks_resolution = kDefaultKsResolution);

struct DecompositionReport {
  double max_gap{0};
  std::size_t regions{0};
};

/// Requires lambda_f0 = 0 and an isotonic true signal. Compares
/// limit_law_solve(psi) with nearly-isotonic fits (penalty lambda_ni0 / 2)
/// of psi computed separately on each constant region of the true signal.
DecompositionReport decomposition_check(const Signal<double>& psi, const LimitLawSpec& spec,
                                        const Dag& dag, const SolverConfig<double>& cfg);

}  // namespace dagfuse
