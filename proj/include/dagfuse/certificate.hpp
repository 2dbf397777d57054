#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dagfuse/solver.hpp"

namespace dagfuse {

/// Connected groups of vertices sharing one fitted value.
template <typename Scalar = double>
struct FusedPartition {
  std::vector<std::vector<Index>> regions;
  std::vector<Scalar> region_values;

  /// Region id of every vertex.
  std::vector<Index> labels(Index n_vertices) const {
    std::vector<Index> out(static_cast<std::size_t>(n_vertices), -1);
    for (std::size_t r = 0; r < regions.size(); ++r)
      for (Index v : regions[r]) out[static_cast<std::size_t>(v)] = static_cast<Index>(r);
    return out;
  }
};

/// Default absolute tolerance for treating two fitted values as fused.
inline constexpr double kDefaultFuseTol = 1e-6;

template <typename Scalar>
FusedPartition<Scalar> extract_fused_regions(const Signal<Scalar>& beta, const Dag& dag,
                                             Scalar fuse_tol = Scalar(kDefaultFuseTol)) {
  using std::abs;
  detail::check_dims(beta.size(), dag, "beta");
  FusedPartition<Scalar> part;
  part.regions = connected_components(dag, [&](Index e) {
    return abs(beta(dag.edge(e).source) - beta(dag.edge(e).target)) <= fuse_tol;
  });
  part.region_values.reserve(part.regions.size());
  for (const auto& group : part.regions) {
    Scalar sum(0);
    for (Index v : group) sum += beta(v);
    part.region_values.push_back(sum / Scalar(group.size()));
  }
  return part;
}

template <typename Scalar = double>
struct KktReport {
  Scalar stationarity_gap{0};
  Scalar box_violation{0};
  Scalar complementarity_violation{0};
  bool pass{false};
};

/// Checks beta - y + D^T gamma = 0 with gamma_e in [-lf, lf + lni], pinned to
/// lf + lni where (D beta)_e > tol and to -lf where (D beta)_e < -tol. All
/// gaps are max norms; pass iff each is <= tol.
template <typename Scalar>
KktReport<Scalar> kkt_certificate(const Signal<Scalar>& y, const Dag& dag,
                                  const PenaltyConfig<Scalar>& pen,
                                  const Signal<Scalar>& beta, const EdgeVector<Scalar>& gamma,
                                  Scalar tol) {
  using std::abs;
  using std::max;
  detail::check_dims(y.size(), dag, "y");
  detail::check_dims(beta.size(), dag, "beta");
  if (gamma.size() != dag.n_edges())
    throw DimensionMismatch("edge dual length does not match the edge count");

  KktReport<Scalar> report;
  const Scalar upper = pen.lambda_fused + pen.lambda_ni;
  const Scalar lower = -pen.lambda_fused;
  report.stationarity_gap =
      (beta - y + incidence_transpose_times(dag, gamma)).template lpNorm<Eigen::Infinity>();
  for (Index e = 0; e < dag.n_edges(); ++e) {
    const Scalar g = gamma(e);
    report.box_violation = max(report.box_violation, max(Scalar(0), max(lower - g, g - upper)));
    const Scalar diff = beta(dag.edge(e).source) - beta(dag.edge(e).target);
    if (diff > tol)
      report.complementarity_violation = max(report.complementarity_violation, abs(g - upper));
    else if (diff < -tol)
      report.complementarity_violation = max(report.complementarity_violation, abs(g - lower));
  }
  report.pass = report.stationarity_gap <= tol && report.box_violation <= tol &&
                report.complementarity_violation <= tol;
  return report;
}

template <typename Scalar>
KktReport<Scalar> kkt_certificate(const Signal<Scalar>& y, const Dag& dag,
                                  const PenaltyConfig<Scalar>& pen,
                                  const SolveResult<Scalar>& result, Scalar tol) {
  return kkt_certificate(y, dag, pen, result.beta, result.edge_dual, tol);
}

/// Region values implied by zero derivative of the objective restricted to
/// the fused regions: for region F,
///
///   value_F = mean(y_F) - (1/|F|) * sum over boundary edges of the signed
///             subgradient the edge contributes to F,
///
/// where an edge (a, b) with difference d = beta_a - beta_b contributes
/// lf*sign(d) + lni*1{d > 0} to its source region and the negation to its
/// target region. Internal edges cancel. Uses only the signs of beta across
/// region boundaries, never the solver's dual.
template <typename Scalar>
std::vector<Scalar> stationary_region_values(const Signal<Scalar>& y, const Dag& dag,
                                             const PenaltyConfig<Scalar>& pen,
                                             const FusedPartition<Scalar>& part) {
  detail::check_dims(y.size(), dag, "y");
  const auto label = part.labels(dag.n_vertices());
  std::vector<Scalar> total(part.regions.size(), Scalar(0));
  for (Index v = 0; v < dag.n_vertices(); ++v) total[static_cast<std::size_t>(label[static_cast<std::size_t>(v)])] += y(v);
  for (const Edge& e : dag.edges()) {
    const Index ra = label[static_cast<std::size_t>(e.source)];
    const Index rb = label[static_cast<std::size_t>(e.target)];
    if (ra == rb) continue;
    const Scalar d = part.region_values[static_cast<std::size_t>(ra)] -
                     part.region_values[static_cast<std::size_t>(rb)];
    const Scalar sign = d > Scalar(0) ? Scalar(1) : (d < Scalar(0) ? Scalar(-1) : Scalar(0));
    const Scalar sub = pen.lambda_fused * sign + (d > Scalar(0) ? pen.lambda_ni : Scalar(0));
    total[static_cast<std::size_t>(ra)] -= sub;
    total[static_cast<std::size_t>(rb)] += sub;
  }
  for (std::size_t r = 0; r < total.size(); ++r) total[r] /= Scalar(part.regions[r].size());
  return total;
}

}  // namespace dagfuse
