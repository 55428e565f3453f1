#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hyperfermi/rational.hpp"

namespace hyperfermi {

/// Bitset over vertex indices; graphs are limited to 64 vertices.
using SiteMask = std::uint64_t;

inline constexpr int kMaxVertices = 64;

struct Edge {
  int u = 0;
  int v = 0;
  Rational weight = 1;
};

/// Vertices 0..n-1 with symmetric nonnegative edge weights and vertex fields.
/// Each unordered pair is stored at most once; zero-weight edges are dropped.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int num_vertices);

  int num_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Rational>& eps() const { return eps_; }
  const Rational& eps(int v) const { return eps_.at(v); }

  /// Adds w to the weight of {u, v}.
  void add_edge(int u, int v, const Rational& w);
  void set_eps(int v, const Rational& value);
  void set_uniform_eps(const Rational& value);

  Rational weight(int u, int v) const;
  SiteMask all() const;
  /// Indices into edges() of the edges with both ends in Y.
  std::vector<int> induced_edges(SiteMask Y) const;
  /// True when Y is connected through edges of nonzero weight.
  bool connected(SiteMask Y) const;
  /// sup_u sum_v J_uv.
  Rational max_weighted_degree() const;
  /// Same graph with every edge weight multiplied by s.
  WeightedGraph scaled(const Rational& s) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Rational> eps_;
};

WeightedGraph path_graph(int n, const Rational& J = 1);
WeightedGraph cycle_graph(int n, const Rational& J = 1);
WeightedGraph complete_graph(int n, const Rational& J = 1);
/// L x W nearest-neighbour grid, vertex (x, y) -> x + L y.
WeightedGraph grid_graph(int L, int W, const Rational& J = 1);

/// "1d:L" or "2d:LxW".
WeightedGraph parse_lattice_spec(std::string_view spec);

/// Reads {"vertices":[...],"edges":[[i,j,"p/q"],...],"eps":{"0":"p/q"}} or
/// {"lattice":{"dim":1,"length":L,"J":"nn"}}. Vertex ids are relabelled to
/// 0..n-1 in ascending order.
WeightedGraph graph_from_json(std::string_view text);
std::string graph_to_json(const WeightedGraph& g);

inline int popcount(SiteMask m) { return __builtin_popcountll(m); }
inline SiteMask site_bit(int v) { return SiteMask{1} << v; }
std::vector<int> sites_of(SiteMask m);

}  // namespace hyperfermi
