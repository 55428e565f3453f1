#include "hyperfermi/model.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "hyperfermi/singlesite.hpp"

namespace hyperfermi {

namespace {

template <Scalar T>
std::vector<T> convert(const std::vector<Rational>& c) {
  std::vector<T> out;
  out.reserve(c.size());
  for (const auto& r : c) out.push_back(ScalarTraits<T>::from_rational(r));
  return out;
}

SiteMask touched_sites(const AlgebraContext& alg, Monomial support) {
  SiteMask s = 0;
  for (int j = 0; j < alg.num_sites(); ++j) {
    if (support.intersects(alg.site_mask(j))) s |= site_bit(j);
  }
  return s;
}

}  // namespace

template <Scalar T>
Element<T> integrate_factors(std::vector<Element<T>> factors, SiteMask sites, int max_source_degree) {
  if (factors.empty()) throw UsageError("integrate_factors needs at least one factor");
  const Algebra alg = factors.front().algebra();
  const Monomial sources = alg->species_mask(Species::source);
  std::vector<SiteMask> touch;
  for (const auto& f : factors) touch.push_back(touched_sites(*alg, f.support()));

  SiteMask remaining = sites;
  while (remaining != 0) {
    int best = -1;
    int best_cost = 1 << 30;
    for (SiteMask r = remaining; r != 0; r &= r - 1) {
      const int s = __builtin_ctzll(r);
      SiteMask u = site_bit(s);
      for (SiteMask t : touch) {
        if (t & site_bit(s)) u |= t;
      }
      const int cost = popcount(u);
      if (cost < best_cost) {
        best_cost = cost;
        best = s;
      }
    }
    Element<T> prod = Element<T>::constant(alg, T(1));
    std::vector<Element<T>> rest;
    std::vector<SiteMask> rest_touch;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (touch[k] & site_bit(best)) {
        prod = gmul(prod, factors[k]);
        if (max_source_degree >= 0) prod = truncate_degree(prod, sources, max_source_degree);
      } else {
        rest.push_back(std::move(factors[k]));
        rest_touch.push_back(touch[k]);
      }
    }
    const int site[] = {best};
    Element<T> integrated = berezin(prod, site);
    if (integrated.is_zero()) return Element<T>(alg);
    rest_touch.push_back(touched_sites(*alg, integrated.support()));
    rest.push_back(std::move(integrated));
    factors = std::move(rest);
    touch = std::move(rest_touch);
    remaining &= ~site_bit(best);
  }
  Element<T> result = Element<T>::constant(alg, T(1));
  for (const auto& f : factors) {
    result = gmul(result, f);
    if (max_source_degree >= 0) result = truncate_degree(result, sources, max_source_degree);
  }
  return result;
}

template <Scalar T>
Model<T>::Model(WeightedGraph graph, const Rational& beta, int m, bool with_sources)
    : graph_(std::move(graph)), beta_(canonical(beta)), m_(m) {
  if (m < 1) throw UsageError("model needs m >= 1");
  if (beta < 0) throw DomainError("beta must be >= 0");
  algebra_ = make_algebra(graph_.num_vertices(), m, with_sources, ScalarTraits<T>::mode);
  const auto half = convert<T>(binomial_series(Rational(1, 2), m));
  const auto mhalf = convert<T>(binomial_series(Rational(-1, 2), m));
  const auto one = Element<T>::constant(algebra_, T(1));
  for (int j = 0; j < graph_.num_vertices(); ++j) {
    const auto x = symmetric_product<T>(algebra_, j, j);
    z_.push_back(series_apply<T>(half, x));
    inv_z_.push_back(series_apply<T>(mhalf, x));
    nu_.push_back(gmul(inv_z_.back(), exp_even((one - z_.back()) * from_rational(graph_.eps(j)))));
  }
  for (int e = 0; e < static_cast<int>(graph_.edges().size()); ++e) gibbs_.push_back(exp_even(-edge_W(e)));
}

template <Scalar T>
Element<T> Model<T>::edge_W(int e) const {
  const Edge& edge = graph_.edges().at(e);
  const auto one = Element<T>::constant(algebra_, T(1));
  Element<T> w = gmul(z_[edge.u], z_[edge.v]) - one - symmetric_product<T>(algebra_, edge.u, edge.v);
  return w * from_rational(beta_ * edge.weight);
}

template <Scalar T>
Element<T> Model<T>::build_W(SiteMask Y) const {
  Element<T> w(algebra_);
  for (int e : graph_.induced_edges(Y)) w += edge_W(e);
  return w;
}

template <Scalar T>
Element<T> Model<T>::gibbs(SiteMask Y) const {
  Element<T> g = Element<T>::constant(algebra_, T(1));
  for (int e : graph_.induced_edges(Y)) g = gmul(g, gibbs_[e]);
  return g;
}

template <Scalar T>
T Model<T>::single_site_Z(int j) const {
  return from_rational(hyperfermi::single_site_Z({m_, graph_.eps(j)}));
}

template <Scalar T>
T Model<T>::product_single_site_Z(SiteMask Y) const {
  T p(1);
  for (int j : sites_of(Y)) p *= single_site_Z(j);
  return p;
}

template <Scalar T>
std::vector<Element<T>> Model<T>::measure_factors(SiteMask Y) const {
  std::vector<Element<T>> f;
  for (int j : sites_of(Y)) f.push_back(nu_[j]);
  return f;
}

template <Scalar T>
T Model<T>::partition_function(SiteMask Y) const {
  auto factors = measure_factors(Y);
  for (int e : graph_.induced_edges(Y)) factors.push_back(gibbs_[e]);
  return integrate_factors(std::move(factors), Y).scalar_part();
}

template <Scalar T>
T Model<T>::two_point(int i0, int j0, int alpha) const {
  const GeneratorId ids[2] = {{Species::field, i0, alpha, true}, {Species::field, j0, alpha, false}};
  auto factors = measure_factors(graph_.all());
  for (int e = 0; e < static_cast<int>(gibbs_.size()); ++e) factors.push_back(gibbs_[e]);
  const T z = partition_function();
  if (ScalarTraits<T>::is_zero(z)) throw DomainError("partition function vanishes");
  factors.push_back(Element<T>::product_of(algebra_, ids, T(1)));
  return integrate_factors(std::move(factors), graph_.all()).scalar_part() / z;
}

template <Scalar T>
Element<T> Model<T>::generating_function(int rho_degree) const {
  if (!algebra_->with_sources()) throw UsageError("generating_function needs a context with sources");
  const Monomial sources = algebra_->species_mask(Species::source);
  auto factors = measure_factors(graph_.all());
  for (int e = 0; e < static_cast<int>(gibbs_.size()); ++e) factors.push_back(gibbs_[e]);
  for (int j = 0; j < num_sites(); ++j) {
    factors.push_back(truncate_degree(exp_even(source_coupling<T>(algebra_, j)), sources, rho_degree));
  }
  return integrate_factors(std::move(factors), graph_.all(), rho_degree);
}

template <Scalar T>
T Model<T>::two_point_from_sources(int i0, int j0, int alpha) const {
  const Element<T> zr = generating_function(2);
  const T z0 = zr.scalar_part();
  if (ScalarTraits<T>::is_zero(z0)) throw DomainError("partition function vanishes");
  const Element<T> log_z = log_unit(zr * (T(1) / z0));
  const GeneratorId ids[2] = {{Species::source, i0, alpha, false}, {Species::source, j0, alpha, true}};
  return log_z.coefficient_of(ids);
}

std::vector<std::vector<double>> build_D_matrix(const WeightedGraph& g, double beta, const std::vector<double>& t) {
  const int n = g.num_vertices();
  if (static_cast<int>(t.size()) != n) throw UsageError("t-field size does not match the graph");
  std::vector<std::vector<double>> D(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) {
    const double bj = beta * to_double(e.weight);
    D[e.u][e.v] -= bj;
    D[e.v][e.u] -= bj;
    D[e.v][e.v] += bj * std::exp(t[e.u] - t[e.v]);
    D[e.u][e.u] += bj * std::exp(t[e.v] - t[e.u]);
  }
  for (int j = 0; j < n; ++j) D[j][j] += to_double(g.eps(j)) * std::exp(-t[j]);
  return D;
}

DMatrixCheck check_D_matrix(const WeightedGraph& g, double beta, const std::vector<double>& t) {
  DMatrixCheck out;
  out.D = build_D_matrix(g, beta, t);
  const int n = g.num_vertices();
  Eigen::MatrixXd D(n, n), M(n, n);
  out.symmetric = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      D(i, j) = out.D[i][j];
      M(i, j) = std::exp(t[i]) * out.D[i][j] * std::exp(t[j]);
      if (out.D[i][j] != out.D[j][i]) out.symmetric = false;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sd(D, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sm(M, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = sd.eigenvalues().minCoeff();
  out.min_congruent_eigenvalue = sm.eigenvalues().minCoeff();
  return out;
}

template Element<Rational> integrate_factors<Rational>(std::vector<Element<Rational>>, SiteMask, int);
template Element<double> integrate_factors<double>(std::vector<Element<double>>, SiteMask, int);
template class Model<Rational>;
template class Model<double>;

}  // namespace hyperfermi
