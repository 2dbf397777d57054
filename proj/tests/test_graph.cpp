#include <doctest.h>

#include <algorithm>
#include <set>

#include "dagfuse/graph.hpp"

using namespace dagfuse;

namespace {

Dag diamond() { return Dag::from_edge_list(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

bool is_topological(const Dag& dag) {
  std::vector<Index> pos(static_cast<std::size_t>(dag.n_vertices()));
  const auto& order = dag.topological_order();
  if (static_cast<Index>(order.size()) != dag.n_vertices()) return false;
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<Index>(i);
  return std::all_of(dag.edges().begin(), dag.edges().end(), [&](const Edge& e) {
    return pos[static_cast<std::size_t>(e.source)] < pos[static_cast<std::size_t>(e.target)];
  });
}

}  // namespace

TEST_CASE("from_edge_list accepts valid DAGs and keeps edge order") {
  const Dag two = Dag::from_edge_list(2, {{0, 1}});
  CHECK(two.n_vertices() == 2);
  REQUIRE(two.n_edges() == 1);
  CHECK(two.edge(0) == Edge{0, 1});

  const Dag d = diamond();
  CHECK(d.n_edges() == 4);
  CHECK(d.edge(2) == Edge{1, 3});
  CHECK(is_topological(d));
}

TEST_CASE("from_edge_list rejects invalid edge lists") {
  CHECK_THROWS_AS(Dag::from_edge_list(2, {{0, 1}, {1, 0}}), CycleDetected);
  CHECK_THROWS_AS(Dag::from_edge_list(3, {{0, 1}, {1, 2}, {2, 0}}), CycleDetected);
  CHECK_THROWS_AS(Dag::from_edge_list(2, {{1, 1}}), SelfLoop);
  CHECK_THROWS_AS(Dag::from_edge_list(2, {{0, 1}, {0, 1}}), DuplicateEdge);
  CHECK_THROWS_AS(Dag::from_edge_list(2, {{0, 2}}), VertexOutOfRange);
  CHECK_THROWS_AS(Dag::from_edge_list(2, {{-1, 0}}), VertexOutOfRange);
  CHECK_THROWS_AS(Dag::from_edge_list(0, {}), PreconditionViolation);
}

TEST_CASE("build_chain") {
  const Dag one = build_chain(1);
  CHECK(one.n_vertices() == 1);
  CHECK(one.n_edges() == 0);

  CHECK(build_chain(2).edges() == std::vector<Edge>{{0, 1}});

  const Dag five = build_chain(5);
  CHECK(five.n_edges() == 4);
  CHECK(five.topological_order() == std::vector<Index>{0, 1, 2, 3, 4});
  for (Index k = 0; k < 4; ++k) CHECK(five.edge(k) == Edge{k, k + 1});
}

TEST_CASE("build_grid2d layout") {
  const Dag g11 = build_grid2d(1, 1);
  CHECK(g11.n_vertices() == 1);
  CHECK(g11.n_edges() == 0);

  // (l,k) -> (l,k+1) first, then (l,k) -> (l+1,k); row-major ids.
  const Dag g22 = build_grid2d(2, 2);
  CHECK(g22.edges() == std::vector<Edge>{{0, 1}, {2, 3}, {0, 2}, {1, 3}});

  const Dag g34 = build_grid2d(3, 4);
  CHECK(g34.n_vertices() == 12);
  CHECK(g34.n_edges() == 17);
  const auto d = incidence(g34);
  CHECK(d.rows() == 17);
  CHECK(d.cols() == 12);
  CHECK(g34.edge(0) == Edge{0, 1});
  CHECK(g34.edge(8) == Edge{10, 11});
  CHECK(g34.edge(9) == Edge{0, 4});
  CHECK(g34.edge(16) == Edge{7, 11});
}

TEST_CASE("grid edge count formula, exhaustive up to 8x8") {
  for (Index s1 = 1; s1 <= 8; ++s1)
    for (Index s2 = 1; s2 <= 8; ++s2) {
      const Dag g = build_grid2d(s1, s2);
      CHECK(g.n_edges() == s1 * (s2 - 1) + s2 * (s1 - 1));
      CHECK(is_topological(g));
    }
}

TEST_CASE("incidence orientation and null space") {
  const auto d2 = incidence(build_chain(2));
  CHECK(d2.coeff(0, 0) == 1.0);
  CHECK(d2.coeff(0, 1) == -1.0);

  Eigen::VectorXd beta(3);
  beta << 3, 2, 1;
  const Eigen::VectorXd db = incidence(build_chain(3)) * beta;
  CHECK(db(0) == 1.0);
  CHECK(db(1) == 1.0);
  CHECK(edge_differences(build_chain(3), beta) == db);

  for (const Dag& g : {build_grid2d(3, 4), diamond(), build_chain(7)}) {
    const Eigen::SparseMatrix<double, Eigen::RowMajor> d = incidence(g);
    for (Index r = 0; r < d.rows(); ++r) {
      std::multiset<double> entries;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(d, r); it; ++it)
        entries.insert(it.value());
      CHECK(entries == std::multiset<double>{-1.0, 1.0});
    }
    CHECK((d * Eigen::VectorXd::Ones(g.n_vertices())).isZero(0.0));

    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(g.n_edges(), -2.0, 3.0);
    const Eigen::VectorXd dtv = d.transpose() * v;
    CHECK(dtv.sum() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((incidence_transpose_times(g, v) - dtv).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("connected_components over retained edges") {
  const Dag c3 = build_chain(3);
  auto all = connected_components(c3, [](Index) { return true; });
  CHECK(all == std::vector<std::vector<Index>>{{0, 1, 2}});
  auto none = connected_components(c3, [](Index) { return false; });
  CHECK(none == std::vector<std::vector<Index>>{{0}, {1}, {2}});

  const Dag d = diamond();
  auto first = connected_components(d, [](Index e) { return e == 0; });
  CHECK(first == std::vector<std::vector<Index>>{{0, 1}, {2}, {3}});

  // Direction is ignored: 1 and 2 meet through 3.
  auto lower = connected_components(d, [](Index e) { return e >= 2; });
  CHECK(lower == std::vector<std::vector<Index>>{{0}, {1, 2, 3}});
}

TEST_CASE("edge_subgraph keeps vertices and listed edges") {
  const Dag d = diamond();
  const Dag sub = d.edge_subgraph({3, 0});
  CHECK(sub.n_vertices() == 4);
  CHECK(sub.edges() == std::vector<Edge>{{2, 3}, {0, 1}});
}
