#pragma once

// Closed-form single-site combinatorics of the H^{0|2m} measure
//   nu = e^{-eps (z - 1)} / z,   z = sqrt(1 + x),   x = psi . psi.
// With P_l(x) = (1 - z)^l / z = sum_k a_k(l) x^k and
//      Q_l(x) = (1 - z)^l     = sum_k b_k(l) x^k
// one has nu = sum_l eps^l / l! P_l(x) and e^{-eps (z - 1)} = sum_l eps^l / l! Q_l(x).

#include <utility>
#include <vector>

#include "hyperfermi/rational.hpp"

namespace hyperfermi {

struct SingleSiteParams {
  int m = 1;
  Rational eps = 0;
};

/// a_k(l) = 1{k >= l} (-1)^k 2^{l-2k} binom(2k - l, k - l).
Rational coeff_a(int k, int l);

/// b_k(l) = 1{k >= l} (-1)^k 2^{l-2k} (l/k) binom(2k - l - 1, k - l), with b_k(0) = 1{k = 0}.
Rational coeff_b(int k, int l);

/// Coefficients of P_l or Q_l up to x^order.
std::vector<Rational> taylor_P(int l, int order);
std::vector<Rational> taylor_Q(int l, int order);

/// Coefficients c_k of nu (with_inverse_z) or of e^{-eps (z-1)} as series in x,
/// up to x^m.
std::vector<Rational> measure_series(const Rational& eps, int m, bool with_inverse_z);

/// Z_{eps,m} = 2^m m! sum_{l=0}^m eps^l / l! |a_m(l)|.
Rational single_site_Z(const SingleSiteParams& p);

/// The same number by Berezin integration of nu = e^{-eps (z-1)} / z built
/// from its defining series.
Rational single_site_Z_engine(const SingleSiteParams& p);

/// ||(psi . psi)^k|| = 2^k m! / (m - k)!, and 0 for k > m.
Integer norm_psi_pow(int k, int m);

/// R_l = sum_{k=l}^m |a_k(l)| / |a_m(l)| 2^{k-m} / (m - k)!.
Rational ratio_R(int l, int m);

/// sum_{j=0}^{m-l} 2^j / j!: an exact upper bound on R_l that is itself
/// strictly below e^2.
Rational ratio_R_majorant(int l, int m);

/// ||e^{-eps(z-1)}|| / Z and ||e^{-eps(z-1)} / z|| / Z computed with the
/// Grassmann engine on a one-site algebra.
std::pair<Rational, Rational> one_point_norm_ratios(const SingleSiteParams& p);

/// Default assertion threshold for the one-point norm ratios.
inline constexpr int kOnePointThreshold = 8;

}  // namespace hyperfermi
