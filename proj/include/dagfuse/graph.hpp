#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "dagfuse/error.hpp"

namespace dagfuse {

using Index = Eigen::Index;

struct Edge {
  Index source;
  Index target;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A validated directed acyclic graph. Edge ids are positions in edges();
/// the order is part of the graph's identity since it fixes the row order
/// of the incidence matrix.
///
/// Immutable after construction.
class Dag {
 public:
  /// Validates and builds. Throws VertexOutOfRange, SelfLoop, DuplicateEdge
  /// or CycleDetected.
  static Dag from_edge_list(Index n_vertices, std::vector<Edge> edges);

  Index n_vertices() const { return n_vertices_; }
  Index n_edges() const { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(Index id) const { return edges_[static_cast<std::size_t>(id)]; }

  /// A topological order of the vertices, computed at construction.
  const std::vector<Index>& topological_order() const { return topo_order_; }

  /// Same vertex set, keeping only the edges whose ids are listed (in the
  /// listed order).
  Dag edge_subgraph(const std::vector<Index>& edge_ids) const;

 private:
  Dag(Index n, std::vector<Edge> edges, std::vector<Index> topo)
      : n_vertices_(n), edges_(std::move(edges)), topo_order_(std::move(topo)) {}

  Index n_vertices_;
  std::vector<Edge> edges_;
  std::vector<Index> topo_order_;
};

/// Vertices 0..s-1 with edges (k, k+1).
Dag build_chain(Index s);

/// Bimonotone s1 x s2 grid. Vertex (l, k), 1-based, has id (l-1)*s2 + (k-1).
/// Edges: every ((l,k),(l,k+1)) in lexicographic order, then every
/// ((l,k),(l+1,k)) in lexicographic order.
Dag build_grid2d(Index s1, Index s2);

/// Oriented incidence matrix D (m x n): row e = (i, j) has +1 at column i and
/// -1 at column j, so D * beta lists the edge differences beta_i - beta_j.
template <typename Scalar = double>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> incidence(const Dag& dag) {
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(2 * dag.edges().size());
  for (Index e = 0; e < dag.n_edges(); ++e) {
    triplets.emplace_back(e, dag.edge(e).source, Scalar(1));
    triplets.emplace_back(e, dag.edge(e).target, Scalar(-1));
  }
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> d(dag.n_edges(), dag.n_vertices());
  d.setFromTriplets(triplets.begin(), triplets.end());
  return d;
}

/// D * beta without materializing D.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> edge_differences(
    const Dag& dag, const Eigen::MatrixBase<Derived>& beta) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> d(dag.n_edges());
  for (Index e = 0; e < dag.n_edges(); ++e)
    d(e) = beta(dag.edge(e).source) - beta(dag.edge(e).target);
  return d;
}

/// D^T * v without materializing D.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> incidence_transpose_times(
    const Dag& dag, const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(dag.n_vertices());
  for (Index e = 0; e < dag.n_edges(); ++e) {
    out(dag.edge(e).source) += v(e);
    out(dag.edge(e).target) -= v(e);
  }
  return out;
}

/// Undirected connected components over the edges accepted by keep_edge.
/// Groups are sorted internally and ordered by their smallest vertex.
std::vector<std::vector<Index>> connected_components(
    const Dag& dag, const std::function<bool(Index)>& keep_edge);

}  // namespace dagfuse
