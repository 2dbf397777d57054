#pragma once

// Slow, simple reference minimizers used to cross-check solve(). None of them
// shares code with the splitting solver beyond objective().

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "dagfuse/solver.hpp"

namespace dagfuse {

inline constexpr Index kGridOracleMaxVertices = 3;

/// Exhaustive minimization of objective() over the lattice
/// {lo, lo + step, ..., <= hi}^n. Ties go to the lexicographically smallest
/// lattice point. Only for n <= 3.
template <typename Scalar>
Signal<Scalar> grid_oracle(const Signal<Scalar>& y, const Dag& dag,
                           const PenaltyConfig<Scalar>& pen, Scalar lo, Scalar hi,
                           Scalar step) {
  using std::floor;
  detail::check_dims(y.size(), dag, "y");
  pen.validate();
  const Index n = dag.n_vertices();
  if (n > kGridOracleMaxVertices)
    throw TooLarge("grid oracle supports at most 3 vertices, got " + std::to_string(n));
  if (!(lo < hi) || !(step > Scalar(0)))
    throw PreconditionViolation("grid oracle needs lo < hi and step > 0");

  const auto points = static_cast<Index>(floor((hi - lo) / step + Scalar(1e-9))) + 1;
  std::vector<Scalar> lattice(static_cast<std::size_t>(points));
  for (Index k = 0; k < points; ++k) lattice[static_cast<std::size_t>(k)] = lo + Scalar(k) * step;

  // Per-vertex squared-error tables; the three nested loops below read them
  // instead of re-evaluating the loss.
  std::vector<std::vector<Scalar>> loss(3, std::vector<Scalar>(static_cast<std::size_t>(points), Scalar(0)));
  for (Index v = 0; v < n; ++v)
    for (Index k = 0; k < points; ++k) {
      const Scalar r = y(v) - lattice[static_cast<std::size_t>(k)];
      loss[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] = Scalar(0.5) * r * r;
    }

  const Index p0 = points;
  const Index p1 = n >= 2 ? points : 1;
  const Index p2 = n >= 3 ? points : 1;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  Index best_idx[3] = {0, 0, 0};
  Scalar b[3] = {0, 0, 0};
  for (Index i = 0; i < p0; ++i) {
    b[0] = lattice[static_cast<std::size_t>(i)];
    for (Index j = 0; j < p1; ++j) {
      b[1] = lattice[static_cast<std::size_t>(j)];
      for (Index k = 0; k < p2; ++k) {
        b[2] = lattice[static_cast<std::size_t>(k)];
        Scalar f = loss[0][static_cast<std::size_t>(i)] + loss[1][static_cast<std::size_t>(j)] +
                   loss[2][static_cast<std::size_t>(k)];
        for (const Edge& e : dag.edges()) f += edge_penalty(b[e.source] - b[e.target], pen);
        if (f < best) {
          best = f;
          best_idx[0] = i;
          best_idx[1] = j;
          best_idx[2] = k;
        }
      }
    }
  }
  Signal<Scalar> out(n);
  for (Index v = 0; v < n; ++v) out(v) = lattice[static_cast<std::size_t>(best_idx[v])];
  return out;
}

/// Subgradient method beta <- beta - (1/k) g_k started at y, with the
/// midpoint of the subdifferential selected at kinks (0 for |.|, lni/2 for
/// (.)_+). Returns the average of the iterates from the second half of the
/// run.
template <typename Scalar>
Signal<Scalar> subgradient_oracle(const Signal<Scalar>& y, const Dag& dag,
                                  const PenaltyConfig<Scalar>& pen, std::size_t iters) {
  detail::check_dims(y.size(), dag, "y");
  pen.validate();
  if (iters < 1) throw PreconditionViolation("subgradient oracle needs iters >= 1");

  const Index n = dag.n_vertices();
  Signal<Scalar> beta = y;
  Signal<Scalar> grad(n);
  Signal<Scalar> average = Signal<Scalar>::Zero(n);
  const std::size_t average_from = iters / 2 + 1;
  std::size_t averaged = 0;
  for (std::size_t k = 1; k <= iters; ++k) {
    grad = beta - y;
    for (const Edge& e : dag.edges()) {
      const Scalar d = beta(e.source) - beta(e.target);
      Scalar s;
      if (d > Scalar(0))
        s = pen.lambda_fused + pen.lambda_ni;
      else if (d < Scalar(0))
        s = -pen.lambda_fused;
      else
        s = Scalar(0.5) * pen.lambda_ni;
      grad(e.source) += s;
      grad(e.target) -= s;
    }
    beta -= grad / Scalar(k);
    if (k >= average_from) {
      ++averaged;
      average += (beta - average) / Scalar(averaged);
    }
  }
  return average;
}

/// Isotonic (nondecreasing) least-squares fit on the chain 0 < 1 < ... < n-1
/// by pool-adjacent-violators.
template <typename Scalar>
Signal<Scalar> pava_chain(const Signal<Scalar>& y) {
  if (y.size() == 0) throw EmptyInput("pava_chain needs a nonempty vector");
  struct Block {
    Scalar sum;
    Index count;
    Scalar mean() const { return sum / Scalar(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(y.size()));
  for (Index i = 0; i < y.size(); ++i) {
    blocks.push_back({y(i), 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }
  Signal<Scalar> out(y.size());
  Index pos = 0;
  for (const Block& blk : blocks) {
    out.segment(pos, blk.count).setConstant(blk.mean());
    pos += blk.count;
  }
  return out;
}

}  // namespace dagfuse
