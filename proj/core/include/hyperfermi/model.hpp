#pragma once

// The H^{0|2m} model on a weighted graph:
//   W_ij  = beta J_ij (-1 - psi_i . psi_j + z_i z_j)
//   nu_j  = e^{-eps_j (z_j - 1)} / z_j
//   Z     = int d psi  prod_j nu_j  e^{-W(Lambda)}

#include <vector>

#include "hyperfermi/grassmann.hpp"
#include "hyperfermi/graph.hpp"

namespace hyperfermi {

struct ModelParams {
  Rational beta = 0;
  int m = 1;
  CoefficientMode mode = CoefficientMode::exact;
};

/// Integrates the (commuting, even) product of `factors` over the field
/// generators of `sites`, eliminating one site at a time in a greedy order
/// that keeps intermediate products small. When max_source_degree >= 0 every
/// intermediate product is truncated to that degree in the source generators.
template <Scalar T>
Element<T> integrate_factors(std::vector<Element<T>> factors, SiteMask sites, int max_source_degree = -1);

template <Scalar T>
class Model {
 public:
  Model(WeightedGraph graph, const Rational& beta, int m, bool with_sources = false);

  const WeightedGraph& graph() const { return graph_; }
  const Algebra& algebra() const { return algebra_; }
  const Rational& beta() const { return beta_; }
  int m() const { return m_; }
  int num_sites() const { return graph_.num_vertices(); }

  const Element<T>& z(int j) const { return z_.at(j); }
  const Element<T>& inv_z(int j) const { return inv_z_.at(j); }
  const Element<T>& nu(int j) const { return nu_.at(j); }

  /// W_e for the edge with index e in graph().edges().
  Element<T> edge_W(int e) const;
  /// W(Y) = sum of W_ij over edges inside Y.
  Element<T> build_W(SiteMask Y) const;
  /// e^{-W_e}, cached.
  const Element<T>& edge_gibbs(int e) const { return gibbs_.at(e); }
  /// e^{-W(Y)} as a single element.
  Element<T> gibbs(SiteMask Y) const;

  /// Single-site normalisation from the closed form.
  T single_site_Z(int j) const;
  /// prod_{j in Y} single_site_Z(j).
  T product_single_site_Z(SiteMask Y) const;

  /// int d nu_Y e^{-W(Y)} (Y = all sites for the full partition function).
  T partition_function(SiteMask Y) const;
  T partition_function() const { return partition_function(graph_.all()); }

  /// <psibar_{i0,alpha} psi_{j0,alpha}> = int d nu e^{-W} psibar psi / Z.
  T two_point(int i0, int j0, int alpha) const;

  /// Z(rho) = int d nu e^{-W} e^{(psi . rho)}, truncated at the given source
  /// degree. Needs a context built with sources.
  Element<T> generating_function(int rho_degree = 2) const;

  /// Coefficient of the ordered source monomial rho_{i0,alpha} rhobar_{j0,alpha}
  /// in ln Z(rho); equals two_point(i0, j0, alpha).
  T two_point_from_sources(int i0, int j0, int alpha) const;

  /// All nu_j for j in Y.
  std::vector<Element<T>> measure_factors(SiteMask Y) const;

 private:
  T from_rational(const Rational& r) const { return ScalarTraits<T>::from_rational(r); }

  WeightedGraph graph_;
  Rational beta_;
  int m_;
  Algebra algebra_;
  std::vector<Element<T>> z_, inv_z_, nu_, gibbs_;
};

struct DMatrixCheck {
  std::vector<std::vector<double>> D;
  /// Smallest eigenvalue of D (D is symmetric).
  double min_eigenvalue = 0;
  /// Smallest eigenvalue of the congruent matrix e^{t} D e^{t}, a weighted
  /// graph Laplacian plus diag(eps e^{t}).
  double min_congruent_eigenvalue = 0;
  bool symmetric = false;
};

/// D_ij = -beta J_ij (i != j), D_jj = beta sum_i J_ij e^{t_i - t_j} + eps_j e^{-t_j}.
std::vector<std::vector<double>> build_D_matrix(const WeightedGraph& g, double beta, const std::vector<double>& t);

DMatrixCheck check_D_matrix(const WeightedGraph& g, double beta, const std::vector<double>& t);

}  // namespace hyperfermi
