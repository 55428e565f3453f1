#include <set>
#include "hyperfermi/forests.hpp"

#include <gtest/gtest.h>

#include <random>

#include "hyperfermi/errors.hpp"
#include "hyperfermi/linalg.hpp"

namespace hyperfermi {
namespace {

WeightedGraph random_graph(std::mt19937_64& rng, int max_vertices, int max_edges) {
  std::uniform_int_distribution<int> nv(1, max_vertices);
  const int n = nv(rng);
  WeightedGraph g(n);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::uniform_int_distribution<int> num(1, 10);
  std::uniform_int_distribution<int> ne(0, std::min<int>(max_edges, pairs.size()));
  const int edges = ne(rng);
  for (int k = 0; k < edges; ++k) g.add_edge(pairs[k].first, pairs[k].second, Rational(num(rng), 10));
  std::uniform_int_distribution<int> en(0, 10);
  for (int v = 0; v < n; ++v) g.set_eps(v, Rational(en(rng), 10));
  return g;
}

TEST(Forests, Counts) {
  EXPECT_EQ(count_forests(complete_graph(3)), 7U);
  EXPECT_EQ(count_forests(path_graph(2)), 2U);
  EXPECT_EQ(count_forests(path_graph(6)), 32U);
  EXPECT_EQ(count_forests(WeightedGraph(3)), 1U);
  EXPECT_THROW(count_forests(complete_graph(9)), CapacityError);
}

TEST(Forests, ForestsAreAcyclicAndDistinct) {
  auto g = complete_graph(4);
  std::set<std::vector<int>> seen;
  enumerate_forests(g, [&](const Forest& f) {
    EXPECT_EQ(f.edges.size() + f.trees.size(), 4U);  // acyclic: |E| = |V| - components
    SiteMask cover = 0;
    for (SiteMask t : f.trees) {
      EXPECT_EQ(cover & t, 0U);
      cover |= t;
    }
    EXPECT_EQ(cover, g.all());
    EXPECT_TRUE(seen.insert(f.edges).second);
  });
  EXPECT_EQ(seen.size(), 38U);  // forests of K_4
}

TEST(Arboreal, ClosedForms) {
  const Rational beta(2, 7);
  EXPECT_EQ(arboreal_Z(complete_graph(3, beta)), 1 + 3 * beta + 3 * beta * beta);
  WeightedGraph single(1);
  single.set_eps(0, Rational(3, 5));
  EXPECT_EQ(arboreal_Z(single), Rational(8, 5));
  auto g = complete_graph(3, 0);
  g.set_uniform_eps(Rational(1, 2));
  EXPECT_EQ(arboreal_Z(g), Rational(27, 8));
}

TEST(Arboreal, DualityWithFermionicIntegral) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(rng, 5, 8);
    EXPECT_EQ(h02_partition(g), arboreal_Z(g)) << graph_to_json(g);
  }
  auto k3 = complete_graph(3, Rational(1, 3));
  k3.set_eps(0, Rational(1, 2));
  EXPECT_EQ(h02_partition(k3), arboreal_Z(k3));
}

TEST(Arboreal, DisconnectedFactorises) {
  WeightedGraph g(4);
  g.add_edge(0, 1, Rational(1, 2));
  g.add_edge(2, 3, Rational(1, 3));
  WeightedGraph a(2), b(2);
  a.add_edge(0, 1, Rational(1, 2));
  b.add_edge(0, 1, Rational(1, 3));
  EXPECT_EQ(h02_partition(g), h02_partition(a) * h02_partition(b));
}

TEST(Determinant, SmallCases) {
  EXPECT_EQ(determinant({}), 1);
  EXPECT_EQ(determinant({{Rational(3)}}), 3);
  EXPECT_EQ(determinant({{0, 1}, {1, 0}}), -1);
  EXPECT_EQ(determinant({{1, 2}, {2, 4}}), 0);
  RationalMatrix m = {{0, 2, 1}, {1, Rational(1, 2), 3}, {4, 0, Rational(-1, 3)}};
  // cofactor expansion along the first row
  Rational expected = -2 * (Rational(1) * Rational(-1, 3) - 3 * 4) + 1 * (1 * 0 - Rational(1, 2) * 4);
  EXPECT_EQ(determinant(m), expected);
}

TEST(Kirchhoff, MatchesEnumeration) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(rng, 6, 10);
    EXPECT_EQ(kirchhoff_tree_sum(g, g.all()), enumerated_tree_sum(g, g.all()));
    const SiteMask Y = g.all() & 0b10110;
    if (Y != 0) EXPECT_EQ(kirchhoff_tree_sum(g, Y), enumerated_tree_sum(g, Y));
  }
  for (int n = 1; n <= 8; ++n) {
    Rational cayley = n == 1 ? Rational(1) : pow(Rational(n), n - 2);
    EXPECT_EQ(kirchhoff_tree_sum(complete_graph(n), complete_graph(n).all()), cayley);
  }
  WeightedGraph two(2);
  two.add_edge(0, 1, Rational(5, 3));
  EXPECT_EQ(kirchhoff_tree_sum(two, 0b11), Rational(5, 3));
  EXPECT_EQ(kirchhoff_tree_sum(WeightedGraph(2), 0b11), 0);
}

TEST(RootedForest, Identity) {
  WeightedGraph two(2);
  const Rational b(2, 3);
  two.add_edge(0, 1, b);
  const Rational d1(1, 5), d2(7, 2);
  auto r = rooted_forest_det_check(two, {d1, d2});
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.determinant, d1 * d2 + b * (d1 + d2));
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> num(-10, 10);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(rng, 6, 9);
    std::vector<Rational> d;
    for (int v = 0; v < g.num_vertices(); ++v) {
      d.emplace_back(num(rng), 7);
      d.back().canonicalize();
    }
    EXPECT_TRUE(rooted_forest_det_check(g, d).equal);
    auto zero = rooted_forest_det_check(g, std::vector<Rational>(g.num_vertices(), Rational(0)));
    EXPECT_EQ(zero.determinant, 0);
    EXPECT_EQ(zero.forest_sum, 0);
  }
}

}  // namespace
}  // namespace hyperfermi
