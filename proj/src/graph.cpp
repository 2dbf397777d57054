#include "dagfuse/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace dagfuse {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.source) + "," + std::to_string(e.target) + ")";
}

// Kahn's algorithm; returns fewer than n vertices when a cycle exists.
std::vector<Index> kahn_order(Index n, const std::vector<Edge>& edges) {
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  std::vector<Index> indegree(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges) {
    out[static_cast<std::size_t>(e.source)].push_back(e.target);
    ++indegree[static_cast<std::size_t>(e.target)];
  }
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v)
    if (indegree[static_cast<std::size_t>(v)] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Index w : out[static_cast<std::size_t>(order[head])])
      if (--indegree[static_cast<std::size_t>(w)] == 0) order.push_back(w);
  }
  return order;
}

struct DisjointSets {
  explicit DisjointSets(Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }

  Index find(Index v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      auto& p = parent[static_cast<std::size_t>(v)];
      p = parent[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  }

  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
  }

  std::vector<Index> parent;
};

}  // namespace

Dag Dag::from_edge_list(Index n_vertices, std::vector<Edge> edges) {
  if (n_vertices < 1)
    throw PreconditionViolation("a graph needs at least one vertex");
  std::set<std::pair<Index, Index>> seen;
  for (const Edge& e : edges) {
    if (e.source < 0 || e.source >= n_vertices || e.target < 0 ||
        e.target >= n_vertices)
      throw VertexOutOfRange("edge " + edge_str(e) + " references a vertex outside [0, " +
                             std::to_string(n_vertices) + ")");
    if (e.source == e.target) throw SelfLoop("self-loop at vertex " + std::to_string(e.source));
    if (!seen.emplace(e.source, e.target).second)
      throw DuplicateEdge("edge " + edge_str(e) + " listed twice");
  }
  auto order = kahn_order(n_vertices, edges);
  if (static_cast<Index>(order.size()) != n_vertices)
    throw CycleDetected("edge list contains a directed cycle");
  return Dag(n_vertices, std::move(edges), std::move(order));
}

Dag Dag::edge_subgraph(const std::vector<Index>& edge_ids) const {
  std::vector<Edge> kept;
  kept.reserve(edge_ids.size());
  for (Index id : edge_ids) kept.push_back(edge(id));
  // A subset of an acyclic edge set is acyclic; the parent's order still works.
  return Dag(n_vertices_, std::move(kept), topo_order_);
}

Dag build_chain(Index s) {
  if (s < 1) throw PreconditionViolation("chain length must be >= 1");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(s - 1));
  for (Index k = 0; k + 1 < s; ++k) edges.push_back({k, k + 1});
  return Dag::from_edge_list(s, std::move(edges));
}

Dag build_grid2d(Index s1, Index s2) {
  if (s1 < 1 || s2 < 1) throw PreconditionViolation("grid dimensions must be >= 1");
  auto id = [s2](Index l, Index k) { return l * s2 + k; };  // 0-based (l, k)
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(s1 * (s2 - 1) + s2 * (s1 - 1)));
  for (Index l = 0; l < s1; ++l)
    for (Index k = 0; k + 1 < s2; ++k) edges.push_back({id(l, k), id(l, k + 1)});
  for (Index l = 0; l + 1 < s1; ++l)
    for (Index k = 0; k < s2; ++k) edges.push_back({id(l, k), id(l + 1, k)});
  return Dag::from_edge_list(s1 * s2, std::move(edges));
}

std::vector<std::vector<Index>> connected_components(
    const Dag& dag, const std::function<bool(Index)>& keep_edge) {
  DisjointSets sets(dag.n_vertices());
  for (Index e = 0; e < dag.n_edges(); ++e)
    if (keep_edge(e)) sets.unite(dag.edge(e).source, dag.edge(e).target);

  // Roots are the smallest member, so scanning vertices in order yields
  // groups ordered by smallest vertex with sorted members.
  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(static_cast<std::size_t>(dag.n_vertices()), -1);
  for (Index v = 0; v < dag.n_vertices(); ++v) {
    Index root = sets.find(v);
    auto& s = slot[static_cast<std::size_t>(root)];
    if (s < 0) {
      s = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(s)].push_back(v);
  }
  return groups;
}

}  // namespace dagfuse
