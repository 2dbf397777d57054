#include "dagfuse/distribution.hpp"

#include <cmath>
#include <string>

namespace dagfuse {

Signal<double> empirical_pmf(const CategoricalSample& sample, Index n_vertices) {
  if (sample.outcomes.empty()) throw EmptySample("categorical sample is empty");
  if (n_vertices < 1) throw PreconditionViolation("support needs at least one cell");
  Signal<double> counts = Signal<double>::Zero(n_vertices);
  for (Index o : sample.outcomes) {
    if (o < 0 || o >= n_vertices)
      throw OutcomeOutOfRange("outcome " + std::to_string(o) + " outside [0, " +
                              std::to_string(n_vertices) + ")");
    counts(o) += 1.0;
  }
  return counts / static_cast<double>(sample.outcomes.size());
}

SmoothedHistogram smooth_histogram(const CategoricalSample& sample, const Dag& dag,
                                   const PenaltyConfig<double>& pen,
                                   const SolverConfig<double>& cfg,
                                   const SmoothOptions& options) {
  SmoothedHistogram out;
  out.empirical = empirical_pmf(sample, dag.n_vertices());
  out.fit = solve(out.empirical, dag, pen, cfg);
  require_converged(out.fit);

  const double sum_gap = std::abs(out.fit.beta.sum() - 1.0);
  const double lo = out.empirical.minCoeff();
  const double hi = out.empirical.maxCoeff();
  const double below = lo - out.fit.beta.minCoeff();
  const double above = out.fit.beta.maxCoeff() - hi;
  if (sum_gap > options.contract_tol || below > options.contract_tol ||
      above > options.contract_tol)
    throw ProbabilityContractViolated(
        "smoothed pmf breaks the probability contract: |sum - 1| = " + std::to_string(sum_gap) +
        ", below min by " + std::to_string(below) + ", above max by " + std::to_string(above));

  out.regions = extract_fused_regions(out.fit.beta, dag, options.fuse_tol);
  out.certificate = kkt_certificate(out.empirical, dag, pen, out.fit, options.kkt_tol);
  return out;
}

}  // namespace dagfuse
