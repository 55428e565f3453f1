#pragma once

// Spanning forests, the arboreal gas and matrix-tree identities.

#include <functional>
#include <vector>

#include "hyperfermi/graph.hpp"

namespace hyperfermi {

/// Enumeration budget on the number of edges.
inline constexpr int kMaxForestEdges = 32;

struct Forest {
  std::vector<int> edges;       ///< indices into WeightedGraph::edges()
  std::vector<SiteMask> trees;  ///< vertex sets of the components, singletons included
};

/// Calls visit once for every acyclic edge subset of g restricted to the
/// vertex set Y (all vertices by default). Throws CapacityError when the
/// induced subgraph has more than kMaxForestEdges edges.
void enumerate_forests(const WeightedGraph& g, const std::function<void(const Forest&)>& visit, SiteMask Y = 0);

std::size_t count_forests(const WeightedGraph& g);

/// Z^arb = sum_F prod_{e in F} beta_e prod_T (1 + sum_{i in T} eps_i), edge
/// weights of g read as beta_e.
Rational arboreal_Z(const WeightedGraph& g);

/// Berezin evaluation (m = 1) of
///   int d psi e^{-(psibar, (-Laplacian + 1 + eps) psi)} e^{-sum_e beta_e psibar_i psi_i psibar_j psi_j}.
Rational h02_partition(const WeightedGraph& g);

/// Weighted spanning-tree sum of the subgraph induced by Y via the
/// matrix-tree theorem; 1 for |Y| = 1.
Rational kirchhoff_tree_sum(const WeightedGraph& g, SiteMask Y);

/// Same sum by brute-force enumeration of spanning trees.
Rational enumerated_tree_sum(const WeightedGraph& g, SiteMask Y);

struct RootedForestCheck {
  Rational determinant;  ///< det(-Laplacian + diag(d))
  Rational forest_sum;   ///< sum_F prod beta_e prod_T sum_{r in T} d_r
  bool equal = false;
};

RootedForestCheck rooted_forest_det_check(const WeightedGraph& g, const std::vector<Rational>& d);

}  // namespace hyperfermi
