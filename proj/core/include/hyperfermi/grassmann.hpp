#pragma once

// Sparse finite-dimensional Grassmann algebra.
//
// Generators are indexed by a fixed total order
//   (species, site, color, conjugate)   field < source, barred < unbarred
// so a monomial is a 128-bit set and the canonical form of a product is the
// generators in ascending index order. The sign of every reordering is
// absorbed into the coefficient when the monomial is built.

#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperfermi/errors.hpp"
#include "hyperfermi/scalar.hpp"

namespace hyperfermi {

/// Generator budget of one algebra context.
inline constexpr int kMaxGenerators = 128;

enum class Species : std::uint8_t { field = 0, source = 1 };

struct GeneratorId {
  Species species = Species::field;
  int site = 0;
  int color = 1;  ///< 1..m
  bool conjugate = false;

  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
};

class Monomial {
 public:
  constexpr Monomial() = default;

  static constexpr Monomial bit(int index) {
    Monomial m;
    if (index < 64) {
      m.lo_ = std::uint64_t{1} << index;
    } else {
      m.hi_ = std::uint64_t{1} << (index - 64);
    }
    return m;
  }

  constexpr bool test(int index) const {
    return index < 64 ? ((lo_ >> index) & 1U) != 0 : ((hi_ >> (index - 64)) & 1U) != 0;
  }
  constexpr int degree() const { return std::popcount(lo_) + std::popcount(hi_); }
  constexpr bool empty() const { return lo_ == 0 && hi_ == 0; }
  constexpr bool intersects(Monomial o) const { return ((lo_ & o.lo_) | (hi_ & o.hi_)) != 0; }
  constexpr bool contains(Monomial o) const { return (lo_ & o.lo_) == o.lo_ && (hi_ & o.hi_) == o.hi_; }

  /// Number of generators in this monomial with index strictly below `index`.
  constexpr int count_below(int index) const {
    if (index < 64) {
      return std::popcount(lo_ & ((std::uint64_t{1} << index) - 1));
    }
    const int h = index - 64;
    return std::popcount(lo_) + std::popcount(hi_ & ((std::uint64_t{1} << h) - 1));
  }

  constexpr Monomial operator|(Monomial o) const { return {lo_ | o.lo_, hi_ | o.hi_}; }
  constexpr Monomial operator&(Monomial o) const { return {lo_ & o.lo_, hi_ & o.hi_}; }
  constexpr Monomial without(Monomial o) const { return {lo_ & ~o.lo_, hi_ & ~o.hi_}; }

  /// Calls f(index) for every generator, ascending.
  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t w = lo_; w != 0; w &= w - 1) f(std::countr_zero(w));
    for (std::uint64_t w = hi_; w != 0; w &= w - 1) f(64 + std::countr_zero(w));
  }

  constexpr std::uint64_t low_word() const { return lo_; }
  constexpr std::uint64_t high_word() const { return hi_; }

  friend constexpr bool operator==(Monomial, Monomial) = default;
  friend constexpr bool operator<(Monomial a, Monomial b) {
    return a.hi_ != b.hi_ ? a.hi_ < b.hi_ : a.lo_ < b.lo_;
  }

 private:
  constexpr Monomial(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {}
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
};

struct MonomialHash {
  std::size_t operator()(Monomial m) const noexcept {
    std::uint64_t h = m.low_word() * 0x9e3779b97f4a7c15ULL;
    h ^= m.high_word() + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Sign (+1/-1) of moving `b` past `a`, i.e. of a*b relative to the canonical
/// monomial a|b. Callers must check that a and b are disjoint.
int product_sign(Monomial a, Monomial b);

/// Fixes the generator universe and coefficient mode.
class AlgebraContext {
 public:
  AlgebraContext(int num_sites, int colors, bool with_sources, CoefficientMode mode);

  int num_sites() const { return num_sites_; }
  int colors() const { return colors_; }
  bool with_sources() const { return with_sources_; }
  CoefficientMode mode() const { return mode_; }
  int size() const { return size_; }

  int index(const GeneratorId& g) const;
  GeneratorId generator(int index) const;

  /// All generators of one species at a site.
  Monomial site_mask(int site, Species species = Species::field) const;
  /// All generators of one species.
  Monomial species_mask(Species species) const;

  std::string generator_name(int index) const;
  /// Space-separated generator list, e.g. "psibar[0,1] psi[0,1]"; "1" when empty.
  std::string monomial_name(Monomial m) const;

  friend bool operator==(const AlgebraContext& a, const AlgebraContext& b) {
    return a.num_sites_ == b.num_sites_ && a.colors_ == b.colors_ &&
           a.with_sources_ == b.with_sources_ && a.mode_ == b.mode_;
  }

 private:
  int num_sites_;
  int colors_;
  bool with_sources_;
  CoefficientMode mode_;
  int size_;
};

using Algebra = std::shared_ptr<const AlgebraContext>;

/// Throws CapacityError when 2 m num_sites (1 + with_sources) > kMaxGenerators.
Algebra make_algebra(int num_sites, int m, bool with_sources, CoefficientMode mode);

template <Scalar T>
struct Term {
  Monomial monomial;
  T coeff;
};

/// Immutable-by-convention element: terms sorted by monomial, no zero
/// coefficients stored.
template <Scalar T>
class Element {
 public:
  using scalar_type = T;

  explicit Element(Algebra algebra);

  static Element constant(Algebra algebra, const T& value);
  static Element generator(Algebra algebra, const GeneratorId& id);
  /// Builds c * g_1 g_2 ... g_k from an arbitrarily ordered generator list,
  /// absorbing the reordering sign. Repeated generators give zero.
  static Element product_of(Algebra algebra, std::span<const GeneratorId> ids, const T& c);

  const Algebra& algebra() const { return algebra_; }
  const std::vector<Term<T>>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  T scalar_part() const;
  T coefficient(Monomial m) const;
  /// Coefficient of the ordered product g_1 ... g_k (sign-corrected).
  T coefficient_of(std::span<const GeneratorId> ordered) const;

  bool is_even() const;
  bool is_odd() const;
  int max_degree() const;
  /// Union of all generators appearing.
  Monomial support() const;

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(const T& s);
  Element operator-() const;

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const T& s) { return a *= s; }
  friend Element operator*(const T& s, Element a) { return a *= s; }
  friend Element operator*(const Element& a, const Element& b) { return gmul(a, b); }

  friend bool operator==(const Element& a, const Element& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coeff != b.terms_[i].coeff) {
        return false;
      }
    }
    return true;
  }

  /// Builds from an unsorted list with possible duplicate monomials.
  static Element from_terms(Algebra algebra, std::vector<Term<T>> terms);

  template <Scalar U>
  friend Element<U> gmul(const Element<U>& a, const Element<U>& b);

 private:
  void check_same(const Element& o) const;

  Algebra algebra_;
  std::vector<Term<T>> terms_;
};

template <Scalar T>
Element<T> gmul(const Element<T>& a, const Element<T>& b);

/// psi_i . psi_j = sum_alpha (psibar_{i,alpha} psi_{j,alpha} + psibar_{j,alpha} psi_{i,alpha}).
template <Scalar T>
Element<T> symmetric_product(const Algebra& algebra, int i, int j);

/// psi_j . rho_j, the source coupling at one site.
template <Scalar T>
Element<T> source_coupling(const Algebra& algebra, int j);

/// sum_k coeffs[k] x^k for an even nilpotent x (zero scalar part).
template <Scalar T>
Element<T> series_apply(std::span<const T> coeffs, const Element<T>& x);

/// Exponential of an even element. In exact mode the scalar part must be 0.
template <Scalar T>
Element<T> exp_even(const Element<T>& x);

/// log(x) for an even x whose scalar part is exactly 1.
template <Scalar T>
Element<T> log_unit(const Element<T>& x);

/// Berezin integration over the field generators of `sites`: for each site j
/// and color alpha apply d/dpsibar_{j,alpha} d/dpsi_{j,alpha}, rightmost
/// first, with left derivatives.
template <Scalar T>
Element<T> berezin(const Element<T>& x, std::span<const int> sites);

/// Drops every term with more than max_degree generators inside `mask`.
template <Scalar T>
Element<T> truncate_degree(const Element<T>& x, Monomial mask, int max_degree);

template <Scalar T>
T l1_norm(const Element<T>& x);

template <Scalar T>
std::string to_string(const Element<T>& x);

template <Scalar T>
std::ostream& operator<<(std::ostream& os, const Element<T>& x) {
  return os << to_string(x);
}

using ExactElement = Element<Rational>;
using FloatElement = Element<double>;

}  // namespace hyperfermi
