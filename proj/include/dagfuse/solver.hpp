#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "dagfuse/graph.hpp"
#include "dagfuse/prox.hpp"

namespace dagfuse {

template <typename Scalar = double>
struct SolverConfig {
  Scalar rho{1};
  Scalar tol_primal{1e-10};
  Scalar tol_dual{1e-10};
  std::size_t max_iters{200000};
  Scalar cg_tol{1e-13};
  std::size_t cg_max_iters{1000};

  void validate() const {
    if (!(rho > 0) || !(tol_primal > 0) || !(tol_dual > 0) || !(cg_tol > 0) ||
        max_iters < 1 || cg_max_iters < 1)
      throw PreconditionViolation("solver configuration values must be positive");
  }
};

template <typename Scalar = double>
struct SolveResult {
  Signal<Scalar> beta;
  /// Edge dual gamma certifying optimality: beta - y + D^T gamma = 0.
  EdgeVector<Scalar> edge_dual;
  std::size_t iterations{0};
  Scalar primal_residual{0};
  Scalar dual_residual{0};
  Scalar objective{0};
  bool converged{false};
};

/// Throws NotConverged carrying the diagnostics when the result is partial.
template <typename Scalar>
const SolveResult<Scalar>& require_converged(const SolveResult<Scalar>& r) {
  if (!r.converged)
    throw NotConverged(r.iterations, static_cast<double>(r.primal_residual),
                       static_cast<double>(r.dual_residual));
  return r;
}

namespace detail {

inline void check_dims(Index y_size, const Dag& dag, const char* what) {
  if (y_size != dag.n_vertices())
    throw DimensionMismatch(std::string(what) + " has length " + std::to_string(y_size) +
                            " but the graph has " + std::to_string(dag.n_vertices()) +
                            " vertices");
}

}  // namespace detail

/// 1/2 ||y - beta||^2 + lambda_fused ||D beta||_1 + lambda_ni ||(D beta)_+||_1
template <typename Scalar>
Scalar objective(const Signal<Scalar>& y, const Dag& dag, const PenaltyConfig<Scalar>& pen,
                 const Signal<Scalar>& beta) {
  detail::check_dims(y.size(), dag, "y");
  detail::check_dims(beta.size(), dag, "beta");
  Scalar penalty(0);
  for (const Edge& e : dag.edges()) penalty += edge_penalty(beta(e.source) - beta(e.target), pen);
  return Scalar(0.5) * (y - beta).squaredNorm() + penalty;
}

/// Minimizes objective() over beta by alternating-direction splitting on
/// z = D beta:
///
///   beta <- (I + rho D^T D)^{-1} (y + rho D^T (z - u))   (warm-started CG)
///   z    <- prox_edge_penalty(D beta + u, 1/rho)          (elementwise)
///   u    <- u + D beta - z
///
/// until ||D beta - z||_inf <= tol_primal and rho ||D^T (z - z_prev)||_inf <=
/// tol_dual. The returned edge_dual is rho * u. On exhaustion of max_iters the
/// partial result is returned with converged = false.
///
/// No sum or range constraint is imposed: the minimizer already preserves
/// sum(y) and stays inside [min(y), max(y)].
template <typename Scalar>
SolveResult<Scalar> solve(const Signal<Scalar>& y, const Dag& dag,
                          const PenaltyConfig<Scalar>& pen, const SolverConfig<Scalar>& cfg,
                          const SolveResult<Scalar>* warm_start = nullptr) {
  using Vec = Signal<Scalar>;
  using std::abs;
  detail::check_dims(y.size(), dag, "y");
  pen.validate();
  cfg.validate();
  if (!y.allFinite()) throw PreconditionViolation("y has non-finite entries");

  const Index m = dag.n_edges();
  SolveResult<Scalar> result;
  if (pen.is_zero() || m == 0) {
    result.beta = y;
    result.edge_dual = EdgeVector<Scalar>::Zero(m);
    result.converged = true;
    result.objective = objective(y, dag, pen, result.beta);
    return result;
  }

  const Eigen::SparseMatrix<Scalar> d = incidence<Scalar>(dag);
  const Eigen::SparseMatrix<Scalar> dt = d.transpose();
  Eigen::SparseMatrix<Scalar> system = cfg.rho * (dt * d);
  for (Index i = 0; i < system.rows(); ++i) system.coeffRef(i, i) += Scalar(1);
  system.makeCompressed();

  Eigen::ConjugateGradient<Eigen::SparseMatrix<Scalar>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(cfg.cg_tol);
  cg.setMaxIterations(static_cast<Index>(cfg.cg_max_iters));
  cg.compute(system);

  Vec beta = y;
  EdgeVector<Scalar> u = EdgeVector<Scalar>::Zero(m);
  if (warm_start != nullptr && warm_start->beta.size() == y.size() &&
      warm_start->edge_dual.size() == m) {
    beta = warm_start->beta;
    u = warm_start->edge_dual / cfg.rho;
  }
  EdgeVector<Scalar> z = d * beta;
  EdgeVector<Scalar> z_prev(m);
  EdgeVector<Scalar> dbeta(m);
  const Scalar step = Scalar(1) / cfg.rho;

  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    Vec rhs = y + cfg.rho * (dt * (z - u));
    beta = cg.solveWithGuess(rhs, beta);
    dbeta = d * beta;
    z_prev = z;
    for (Index e = 0; e < m; ++e) z(e) = prox_edge_penalty(dbeta(e) + u(e), step, pen);
    u += dbeta - z;

    result.iterations = it;
    result.primal_residual = (dbeta - z).template lpNorm<Eigen::Infinity>();
    result.dual_residual = cfg.rho * (dt * (z - z_prev)).template lpNorm<Eigen::Infinity>();
    if (result.primal_residual <= cfg.tol_primal && result.dual_residual <= cfg.tol_dual) {
      result.converged = true;
      break;
    }
  }

  result.beta = std::move(beta);
  result.edge_dual = cfg.rho * u;
  result.objective = objective(y, dag, pen, result.beta);
  return result;
}

/// Warm-started sequence of solves, in the order given. Non-convergence is
/// reported per point through SolveResult::converged.
template <typename Scalar>
std::vector<SolveResult<Scalar>> solve_path(const Signal<Scalar>& y, const Dag& dag,
                                            const std::vector<PenaltyConfig<Scalar>>& lambdas,
                                            const SolverConfig<Scalar>& cfg) {
  if (lambdas.empty()) throw EmptyInput("penalty path is empty");
  detail::check_dims(y.size(), dag, "y");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    try {
      lambdas[i].validate();
    } catch (const PreconditionViolation& err) {
      throw PreconditionViolation("path point " + std::to_string(i) + ": " + err.what());
    }
  }
  std::vector<SolveResult<Scalar>> path;
  path.reserve(lambdas.size());
  for (const auto& pen : lambdas)
    path.push_back(solve(y, dag, pen, cfg, path.empty() ? nullptr : &path.back()));
  return path;
}

}  // namespace dagfuse
