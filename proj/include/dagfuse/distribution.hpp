#pragma once

#include <vector>

#include "dagfuse/certificate.hpp"

namespace dagfuse {

/// Raw categorical observations; each outcome is a vertex id.
struct CategoricalSample {
  std::vector<Index> outcomes;

  std::size_t size() const { return outcomes.size(); }
};

/// Relative frequencies count(i) / n.
Signal<double> empirical_pmf(const CategoricalSample& sample, Index n_vertices);

struct SmoothedHistogram {
  Signal<double> empirical;
  SolveResult<double> fit;
  FusedPartition<double> regions;
  KktReport<double> certificate;

  const Signal<double>& pmf() const { return fit.beta; }
};

struct SmoothOptions {
  double fuse_tol{kDefaultFuseTol};
  double kkt_tol{1e-6};
  /// Allowed slack on the sum-to-one and range guarantees before the
  /// result is rejected.
  double contract_tol{1e-8};
};

/// empirical_pmf -> solve -> extract_fused_regions -> kkt_certificate.
///
/// The output is never renormalized or clipped. If it fails to sum to 1 or
/// leaves [min, max] of the empirical pmf by more than contract_tol,
/// ProbabilityContractViolated is thrown. NotConverged propagates.
SmoothedHistogram smooth_histogram(const CategoricalSample& sample, const Dag& dag,
                                   const PenaltyConfig<double>& pen,
                                   const SolverConfig<double>& cfg,
                                   const SmoothOptions& options = {});

}  // namespace dagfuse
