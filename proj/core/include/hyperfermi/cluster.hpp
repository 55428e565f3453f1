#pragma once

// Polymer expansion of the H^{0|2m} model:
//   Z / prod_j Z_j = sum over families of disjoint polymers (|Y| >= 2) of prod K(Y),
//   K(Y) = int d nu_Y (e^{-W(Y)})_conn / prod_{j in Y} Z_j.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hyperfermi/model.hpp"

namespace hyperfermi {

/// Largest vertex set for exhaustive polymer enumeration.
inline constexpr int kMaxPolymerSites = 16;

template <Scalar T>
class PolymerSystem {
 public:
  struct Options {
    /// Set the connected part of a J-disconnected polymer to zero without
    /// running the recursion (the recursion gives zero there; see tests).
    bool skip_disconnected = true;
  };

  explicit PolymerSystem(Model<T> model);
  PolymerSystem(Model<T> model, Options options);

  const Model<T>& model() const { return model_; }
  const WeightedGraph& graph() const { return model_.graph(); }

  /// (e^{-W(Y)})_conn; 1 for |Y| = 1.
  const Element<T>& connected_part(SiteMask Y);

  /// K(Y) for |Y| >= 2.
  T activity(SiteMask Y);

  /// int d nu_Y (e^{-W(Y)})_conn psibar_{i0,alpha} psi_{j0,alpha} / prod Z_j.
  /// Zero unless i0, j0 in Y. For |Y| = 1 this is the single-site expectation.
  T activity2(SiteMask Y, int i0, int j0, int alpha);

  /// <psibar_{j,alpha} psi_{j,alpha}> of the single-site measure.
  T single_site_two_point(int j, int alpha);

  /// Second source derivative of the normalised activity at rho = 0:
  ///   |Y| >= 2:  activity2(Y) - 1{i0 = j0 in Y} K(Y) single_site_two_point(i0)
  ///   |Y| = 1:   1{Y = {i0} = {j0}} single_site_two_point(i0)
  /// These are the activities that enter the two-point series.
  T derivative_activity(SiteMask Y, int i0, int j0, int alpha);

  /// Fills the connected-part and activity caches for every subset of the
  /// vertex set, level by level in |Y|, in parallel.
  void precompute();

  /// All subsets with |Y| >= 2, ascending by (size, mask).
  std::vector<SiteMask> polymers() const;

 private:
  Model<T> model_;
  Options options_;
  Element<T> one_;
  std::unordered_map<SiteMask, Element<T>> conn_;
  std::unordered_map<SiteMask, T> activity_;
  std::unordered_map<int, T> single_;

  Element<T> compute_connected(SiteMask Y);
  T compute_activity(SiteMask Y);
};

template <Scalar T>
struct PolymerIdentityResult {
  T lhs;  ///< Z / prod Z_j
  T rhs;  ///< sum over families of disjoint polymers of prod K
  T residual;
  bool equal = false;
};

template <Scalar T>
PolymerIdentityResult<T> polymer_identity_check(PolymerSystem<T>& system);

/// Ursell function of the hard-core interaction prod_{l<l'} 1{Y_l, Y_l' disjoint}.
/// Supports up to 16 polymers.
std::int64_t phi_conn(std::span<const SiteMask> polymers);

template <Scalar T>
struct TwoPointSeries {
  std::vector<T> partial_sums;  ///< S_1 .. S_{N_max}
  double A = 0;
  double B = 0;
  bool convergent = false;
  /// A sum_{N > N_max} B^{N-1}; +inf when B >= 1.
  double tail_bound = 0;
};

template <Scalar T>
TwoPointSeries<T> two_point_series(PolymerSystem<T>& system, int i0, int j0, int alpha, int n_max,
                                   double C = std::exp(1.0));

struct MayerBound {
  double A = 0;  ///< sum_{Y ni i0, j0} |k(Y)| C^{|Y|}, singletons included
  double B = 0;  ///< sup_k sum_{Y ni k, |Y| > 1} |K(Y)| C^{|Y|}
  bool convergent = false;
  double bound = 0;  ///< A / (1 - B), +inf when B >= 1
};

template <Scalar T>
MayerBound mayer_bound(PolymerSystem<T>& system, int i0, int j0, int alpha, double C = std::exp(1.0));

struct ExpIdentityResult {
  std::vector<Rational> lhs;  ///< index N: (1/N!) sum_{partitions of [N]} prod f(|I|)
  std::vector<Rational> rhs;  ///< index N: coefficient of x^N in exp(sum_n f(n) x^n / n!) - 1
  bool equal = false;
};

/// f[n-1] = f(n). Compares both sides for total size 1..n_max.
ExpIdentityResult exp_partition_identity_check(const std::vector<Rational>& f, int n_max);

/// Calls visit(blocks) for every set partition of {0..n-1}; blocks as bitmasks.
void for_each_set_partition(int n, const std::function<void(const std::vector<std::uint32_t>&)>& visit);

}  // namespace hyperfermi
