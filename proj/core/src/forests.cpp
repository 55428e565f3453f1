#include "hyperfermi/forests.hpp"

#include <numeric>

#include "hyperfermi/errors.hpp"
#include "hyperfermi/grassmann.hpp"
#include "hyperfermi/linalg.hpp"
#include "hyperfermi/model.hpp"

namespace hyperfermi {

namespace {

// Union-find without path compression so that unions can be undone.
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(int n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }

  void rollback() {
    const int b = history_.back();
    history_.pop_back();
    const int a = parent_[b];
    size_[a] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> history_;
};

struct Enumerator {
  const WeightedGraph& g;
  const std::function<void(const Forest&)>& visit;
  SiteMask Y;
  std::vector<int> edges;
  RollbackUnionFind uf;
  Forest current;

  void run(std::size_t k) {
    if (k == edges.size()) {
      current.trees.clear();
      std::vector<SiteMask> by_root(g.num_vertices(), 0);
      for (int v : sites_of(Y)) by_root[uf.find(v)] |= site_bit(v);
      for (SiteMask t : by_root) {
        if (t != 0) current.trees.push_back(t);
      }
      visit(current);
      return;
    }
    run(k + 1);
    const Edge& e = g.edges()[edges[k]];
    if (uf.unite(e.u, e.v)) {
      current.edges.push_back(edges[k]);
      run(k + 1);
      current.edges.pop_back();
      uf.rollback();
    }
  }
};

}  // namespace

void enumerate_forests(const WeightedGraph& g, const std::function<void(const Forest&)>& visit, SiteMask Y) {
  if (Y == 0) Y = g.all();
  Enumerator en{g, visit, Y, g.induced_edges(Y), RollbackUnionFind(g.num_vertices()), {}};
  if (static_cast<int>(en.edges.size()) > kMaxForestEdges) {
    throw CapacityError("forest enumeration limited to " + std::to_string(kMaxForestEdges) + " edges");
  }
  en.run(0);
}

std::size_t count_forests(const WeightedGraph& g) {
  std::size_t n = 0;
  enumerate_forests(g, [&](const Forest&) { ++n; });
  return n;
}

Rational arboreal_Z(const WeightedGraph& g) {
  Rational total = 0;
  enumerate_forests(g, [&](const Forest& f) {
    Rational w = 1;
    for (int e : f.edges) w *= g.edges()[e].weight;
    for (SiteMask t : f.trees) {
      Rational tree = 1;
      for (int v : sites_of(t)) tree += g.eps(v);
      w *= tree;
    }
    total += w;
  });
  return total;
}

Rational h02_partition(const WeightedGraph& g) {
  const int n = g.num_vertices();
  auto alg = make_algebra(n, 1, false, CoefficientMode::exact);
  auto pair = [&](int i, int j) {
    const GeneratorId ids[2] = {{Species::field, i, 1, true}, {Species::field, j, 1, false}};
    return ExactElement::product_of(alg, ids, Rational(1));
  };
  std::vector<Rational> diagonal(n, Rational(1));
  for (int v = 0; v < n; ++v) diagonal[v] += g.eps(v);
  std::vector<ExactElement> factors;
  for (const auto& e : g.edges()) {
    diagonal[e.u] += e.weight;
    diagonal[e.v] += e.weight;
    // off-diagonal part of -(psibar, -Laplacian psi) and the quartic term
    factors.push_back(exp_even((pair(e.u, e.v) + pair(e.v, e.u)) * e.weight));
    factors.push_back(exp_even(-(pair(e.u, e.u) * pair(e.v, e.v)) * e.weight));
  }
  for (int v = 0; v < n; ++v) factors.push_back(exp_even(-(pair(v, v) * diagonal[v])));
  return integrate_factors(std::move(factors), g.all()).scalar_part();
}

Rational kirchhoff_tree_sum(const WeightedGraph& g, SiteMask Y) {
  const auto sites = sites_of(Y);
  if (sites.empty()) throw UsageError("kirchhoff_tree_sum needs a nonempty vertex set");
  if (sites.size() == 1) return 1;
  std::vector<int> pos(g.num_vertices(), -1);
  for (std::size_t k = 0; k < sites.size(); ++k) pos[sites[k]] = static_cast<int>(k);
  const std::size_t n = sites.size() - 1;  // drop the last vertex
  RationalMatrix L(n, std::vector<Rational>(n, Rational(0)));
  for (int e : g.induced_edges(Y)) {
    const Edge& edge = g.edges()[e];
    const int a = pos[edge.u], b = pos[edge.v];
    const bool ka = a < static_cast<int>(n), kb = b < static_cast<int>(n);
    if (ka) L[a][a] += edge.weight;
    if (kb) L[b][b] += edge.weight;
    if (ka && kb) {
      L[a][b] -= edge.weight;
      L[b][a] -= edge.weight;
    }
  }
  return determinant(std::move(L));
}

Rational enumerated_tree_sum(const WeightedGraph& g, SiteMask Y) {
  Rational total = 0;
  enumerate_forests(
      g,
      [&](const Forest& f) {
        if (f.trees.size() != 1) return;
        Rational w = 1;
        for (int e : f.edges) w *= g.edges()[e].weight;
        total += w;
      },
      Y);
  return total;
}

RootedForestCheck rooted_forest_det_check(const WeightedGraph& g, const std::vector<Rational>& d) {
  const int n = g.num_vertices();
  if (static_cast<int>(d.size()) != n) throw UsageError("diagonal size does not match the graph");
  RationalMatrix M(n, std::vector<Rational>(n, Rational(0)));
  for (int v = 0; v < n; ++v) M[v][v] = canonical(d[v]);
  for (const auto& e : g.edges()) {
    M[e.u][e.u] += e.weight;
    M[e.v][e.v] += e.weight;
    M[e.u][e.v] -= e.weight;
    M[e.v][e.u] -= e.weight;
  }
  RootedForestCheck out;
  out.determinant = determinant(std::move(M));
  out.forest_sum = 0;
  enumerate_forests(g, [&](const Forest& f) {
    Rational w = 1;
    for (int e : f.edges) w *= g.edges()[e].weight;
    for (SiteMask t : f.trees) {
      Rational roots = 0;
      for (int v : sites_of(t)) roots += canonical(d[v]);
      w *= roots;
    }
    out.forest_sum += w;
  });
  out.equal = out.determinant == out.forest_sum;
  return out;
}

}  // namespace hyperfermi
