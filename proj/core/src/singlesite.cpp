#include "hyperfermi/singlesite.hpp"

#include <stdexcept>

#include "hyperfermi/errors.hpp"
#include "hyperfermi/grassmann.hpp"

namespace hyperfermi {

namespace {

Rational pow2(int e) {
  Rational r = 1;
  if (e >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned>(e));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned>(-e));
  }
  return r;
}

void require_nonnegative(int k, int l) {
  if (k < 0 || l < 0) throw UsageError("coefficient indices must be >= 0");
}

}  // namespace

Rational coeff_a(int k, int l) {
  require_nonnegative(k, l);
  if (k < l) return 0;
  Rational r = pow2(l - 2 * k) * Rational(binomial(2 * k - l, k - l));
  return k % 2 ? Rational(-r) : r;
}

Rational coeff_b(int k, int l) {
  require_nonnegative(k, l);
  if (l == 0) return k == 0 ? 1 : 0;
  if (k < l) return 0;
  Rational r = pow2(l - 2 * k) * Rational(l, k) * Rational(binomial(2 * k - l - 1, k - l));
  r.canonicalize();
  return k % 2 ? Rational(-r) : r;
}

std::vector<Rational> taylor_P(int l, int order) {
  std::vector<Rational> c;
  for (int k = 0; k <= order; ++k) c.push_back(coeff_a(k, l));
  return c;
}

std::vector<Rational> taylor_Q(int l, int order) {
  std::vector<Rational> c;
  for (int k = 0; k <= order; ++k) c.push_back(coeff_b(k, l));
  return c;
}

std::vector<Rational> measure_series(const Rational& eps, int m, bool with_inverse_z) {
  std::vector<Rational> c(static_cast<std::size_t>(m) + 1, Rational(0));
  const Rational e = canonical(eps);
  Rational w = 1;  // eps^l / l!
  for (int l = 0; l <= m; ++l) {
    for (int k = l; k <= m; ++k) c[k] += w * (with_inverse_z ? coeff_a(k, l) : coeff_b(k, l));
    w *= e;
    w /= l + 1;
  }
  return c;
}

Rational single_site_Z(const SingleSiteParams& p) {
  if (p.m < 0) throw UsageError("m must be >= 0");
  if (p.eps < 0) throw DomainError("eps must be >= 0");
  Rational sum = 0;
  Rational w = 1;
  for (int l = 0; l <= p.m; ++l) {
    sum += w * abs(coeff_a(p.m, l));
    w *= canonical(p.eps);
    w /= l + 1;
  }
  return pow2(p.m) * Rational(factorial(p.m)) * sum;
}

Integer norm_psi_pow(int k, int m) {
  if (k < 0 || m < 0) throw UsageError("norm_psi_pow needs k, m >= 0");
  if (k > m) return 0;
  Integer r = factorial(m) / factorial(m - k);
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned>(k));
  return r;
}

Rational ratio_R(int l, int m) {
  if (l < 0 || l > m) throw UsageError("ratio_R needs 0 <= l <= m");
  const Rational am = abs(coeff_a(m, l));
  Rational sum = 0;
  for (int k = l; k <= m; ++k) {
    sum += abs(coeff_a(k, l)) * pow2(k - m) / Rational(factorial(m - k));
  }
  return sum / am;
}

Rational ratio_R_majorant(int l, int m) {
  if (l < 0 || l > m) throw UsageError("ratio_R_majorant needs 0 <= l <= m");
  Rational sum = 0;
  for (int j = 0; j <= m - l; ++j) sum += pow2(j) / Rational(factorial(j));
  return sum;
}

Rational single_site_Z_engine(const SingleSiteParams& p) {
  if (p.m < 0) throw UsageError("single_site_Z_engine needs m >= 0");
  auto alg = make_algebra(1, p.m, false, CoefficientMode::exact);
  const auto x = symmetric_product<Rational>(alg, 0, 0);
  const auto inv_z = series_apply<Rational>(binomial_series(Rational(-1, 2), p.m), x);
  const auto z = series_apply<Rational>(binomial_series(Rational(1, 2), p.m), x);
  const auto weight = inv_z * exp_even((ExactElement::constant(alg, 1) - z) * canonical(p.eps));
  const int site[] = {0};
  return berezin(weight, site).scalar_part();
}

std::pair<Rational, Rational> one_point_norm_ratios(const SingleSiteParams& p) {
  if (p.m < 1) throw UsageError("one_point_norm_ratios needs m >= 1");
  auto alg = make_algebra(1, p.m, false, CoefficientMode::exact);
  const auto x = symmetric_product<Rational>(alg, 0, 0);
  const Rational z = single_site_Z(p);
  const auto plain = series_apply<Rational>(measure_series(p.eps, p.m, false), x);
  const auto with_inv = series_apply<Rational>(measure_series(p.eps, p.m, true), x);
  return {l1_norm(plain) / z, l1_norm(with_inv) / z};
}

}  // namespace hyperfermi
