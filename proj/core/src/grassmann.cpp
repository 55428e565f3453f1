#include "hyperfermi/grassmann.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace hyperfermi {

namespace {

// Bit x of the result is the parity of the set bits of w strictly below x.
constexpr std::uint64_t prefix_parity(std::uint64_t w) {
  std::uint64_t p = w << 1;
  p ^= p << 1;
  p ^= p << 2;
  p ^= p << 4;
  p ^= p << 8;
  p ^= p << 16;
  p ^= p << 32;
  return p;
}

template <Scalar T>
using Traits = ScalarTraits<T>;

template <Scalar T>
void require_mode(const Algebra& algebra) {
  if (!algebra) throw UsageError("null algebra context");
  if (algebra->mode() != Traits<T>::mode) {
    throw UsageError("coefficient type does not match the algebra mode");
  }
}

}  // namespace

int product_sign(Monomial a, Monomial b) {
  // a*b -> a|b: every generator y of b moves left past the generators of a
  // above y. Counted from a's side: each x in a passes the b-generators below x.
  const std::uint64_t plo = prefix_parity(b.low_word());
  std::uint64_t phi = prefix_parity(b.high_word());
  if (std::popcount(b.low_word()) & 1) phi = ~phi;
  const int parity = std::popcount(a.low_word() & plo) + std::popcount(a.high_word() & phi);
  return (parity & 1) ? -1 : 1;
}

AlgebraContext::AlgebraContext(int num_sites, int colors, bool with_sources, CoefficientMode mode)
    : num_sites_(num_sites),
      colors_(colors),
      with_sources_(with_sources),
      mode_(mode),
      size_(2 * colors * num_sites * (with_sources ? 2 : 1)) {}

int AlgebraContext::index(const GeneratorId& g) const {
  if (g.site < 0 || g.site >= num_sites_) throw UsageError("site out of range");
  if (g.color < 1 || g.color > colors_) throw UsageError("color out of range");
  if (g.species == Species::source && !with_sources_) throw UsageError("sources not enabled");
  const int offset = g.species == Species::source ? num_sites_ * 2 * colors_ : 0;
  return offset + g.site * 2 * colors_ + (g.color - 1) * 2 + (g.conjugate ? 0 : 1);
}

GeneratorId AlgebraContext::generator(int index) const {
  if (index < 0 || index >= size_) throw UsageError("generator index out of range");
  GeneratorId g;
  const int block = num_sites_ * 2 * colors_;
  if (index >= block) {
    g.species = Species::source;
    index -= block;
  }
  g.site = index / (2 * colors_);
  const int r = index % (2 * colors_);
  g.color = r / 2 + 1;
  g.conjugate = (r % 2) == 0;
  return g;
}

Monomial AlgebraContext::site_mask(int site, Species species) const {
  Monomial m;
  if (colors_ == 0) return m;
  const int first = index({species, site, 1, true});
  for (int k = 0; k < 2 * colors_; ++k) m = m | Monomial::bit(first + k);
  return m;
}

Monomial AlgebraContext::species_mask(Species species) const {
  Monomial m;
  if (species == Species::source && !with_sources_) return m;
  for (int s = 0; s < num_sites_; ++s) m = m | site_mask(s, species);
  return m;
}

std::string AlgebraContext::generator_name(int idx) const {
  const GeneratorId g = generator(idx);
  std::string name = g.species == Species::field ? "psi" : "rho";
  if (g.conjugate) name += "bar";
  return name + "[" + std::to_string(g.site) + "," + std::to_string(g.color) + "]";
}

std::string AlgebraContext::monomial_name(Monomial m) const {
  if (m.empty()) return "1";
  std::string out;
  m.for_each([&](int i) {
    if (!out.empty()) out += ' ';
    out += generator_name(i);
  });
  return out;
}

Algebra make_algebra(int num_sites, int m, bool with_sources, CoefficientMode mode) {
  if (num_sites < 1) throw UsageError("num_sites must be >= 1");
  if (m < 0) throw UsageError("m must be >= 0");
  const long long total = 2LL * m * num_sites * (with_sources ? 2 : 1);
  if (total > kMaxGenerators) {
    throw CapacityError("algebra needs " + std::to_string(total) + " generators, cap is " +
                        std::to_string(kMaxGenerators));
  }
  return std::make_shared<const AlgebraContext>(num_sites, m, with_sources, mode);
}

// ---------------------------------------------------------------------------
// Element

template <Scalar T>
Element<T>::Element(Algebra algebra) : algebra_(std::move(algebra)) {
  require_mode<T>(algebra_);
}

template <Scalar T>
Element<T> Element<T>::constant(Algebra algebra, const T& value) {
  Element e(std::move(algebra));
  if (!Traits<T>::is_zero(value)) e.terms_.push_back({Monomial{}, value});
  return e;
}

template <Scalar T>
Element<T> Element<T>::generator(Algebra algebra, const GeneratorId& id) {
  Element e(std::move(algebra));
  e.terms_.push_back({Monomial::bit(e.algebra_->index(id)), T(1)});
  return e;
}

template <Scalar T>
Element<T> Element<T>::product_of(Algebra algebra, std::span<const GeneratorId> ids, const T& c) {
  Element e(std::move(algebra));
  Monomial acc;
  int sign = 1;
  for (const auto& g : ids) {
    const Monomial b = Monomial::bit(e.algebra_->index(g));
    if (acc.intersects(b)) return e;
    sign *= product_sign(acc, b);
    acc = acc | b;
  }
  if (!Traits<T>::is_zero(c)) e.terms_.push_back({acc, sign < 0 ? T(-c) : c});
  return e;
}

template <Scalar T>
Element<T> Element<T>::from_terms(Algebra algebra, std::vector<Term<T>> terms) {
  Element e(std::move(algebra));
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term<T>& a, const Term<T>& b) { return a.monomial < b.monomial; });
  for (auto& t : terms) {
    if (!e.terms_.empty() && e.terms_.back().monomial == t.monomial) {
      e.terms_.back().coeff += t.coeff;
    } else {
      if (!e.terms_.empty() && Traits<T>::is_zero(e.terms_.back().coeff)) e.terms_.pop_back();
      e.terms_.push_back(std::move(t));
    }
  }
  if (!e.terms_.empty() && Traits<T>::is_zero(e.terms_.back().coeff)) e.terms_.pop_back();
  return e;
}

template <Scalar T>
void Element<T>::check_same(const Element& o) const {
  if (algebra_ != o.algebra_ && !(*algebra_ == *o.algebra_)) {
    throw UsageError("elements belong to different algebra contexts");
  }
}

template <Scalar T>
T Element<T>::scalar_part() const {
  return coefficient(Monomial{});
}

template <Scalar T>
T Element<T>::coefficient(Monomial m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term<T>& t, Monomial k) { return t.monomial < k; });
  if (it != terms_.end() && it->monomial == m) return it->coeff;
  return T(0);
}

template <Scalar T>
T Element<T>::coefficient_of(std::span<const GeneratorId> ordered) const {
  Monomial acc;
  int sign = 1;
  for (const auto& g : ordered) {
    const Monomial b = Monomial::bit(algebra_->index(g));
    if (acc.intersects(b)) return T(0);
    sign *= product_sign(acc, b);
    acc = acc | b;
  }
  T c = coefficient(acc);
  return sign < 0 ? T(-c) : c;
}

template <Scalar T>
bool Element<T>::is_even() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term<T>& t) { return t.monomial.degree() % 2 == 0; });
}

template <Scalar T>
bool Element<T>::is_odd() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term<T>& t) { return t.monomial.degree() % 2 == 1; });
}

template <Scalar T>
int Element<T>::max_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
  return d;
}

template <Scalar T>
Monomial Element<T>::support() const {
  Monomial s;
  for (const auto& t : terms_) s = s | t.monomial;
  return s;
}

template <Scalar T>
Element<T>& Element<T>::operator+=(const Element& o) {
  check_same(o);
  std::vector<Term<T>> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->monomial < b->monomial)) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->monomial < a->monomial) {
      out.push_back(*b++);
    } else {
      T c = a->coeff + b->coeff;
      if (!Traits<T>::is_zero(c)) out.push_back({a->monomial, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

template <Scalar T>
Element<T>& Element<T>::operator-=(const Element& o) {
  return *this += -o;
}

template <Scalar T>
Element<T>& Element<T>::operator*=(const T& s) {
  if (Traits<T>::is_zero(s)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  if constexpr (std::is_same_v<T, double>) {
    std::erase_if(terms_, [](const Term<T>& t) { return t.coeff == 0.0; });
  }
  return *this;
}

template <Scalar T>
Element<T> Element<T>::operator-() const {
  Element e = *this;
  for (auto& t : e.terms_) t.coeff = -t.coeff;
  return e;
}

template <Scalar T>
Element<T> gmul(const Element<T>& a, const Element<T>& b) {
  a.check_same(b);
  Element<T> out(a.algebra_);
  if (a.terms_.empty() || b.terms_.empty()) return out;
  std::unordered_map<Monomial, std::size_t, MonomialHash> slot;
  slot.reserve(a.terms_.size() * b.terms_.size() / 2 + 8);
  std::vector<Term<T>> acc;
  T prod;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      if (ta.monomial.intersects(tb.monomial)) continue;
      const Monomial m = ta.monomial | tb.monomial;
      prod = ta.coeff * tb.coeff;
      if (product_sign(ta.monomial, tb.monomial) < 0) prod = -prod;
      auto [it, inserted] = slot.try_emplace(m, acc.size());
      if (inserted) {
        acc.push_back({m, prod});
      } else {
        acc[it->second].coeff += prod;
      }
    }
  }
  std::erase_if(acc, [](const Term<T>& t) { return Traits<T>::is_zero(t.coeff); });
  std::sort(acc.begin(), acc.end(),
            [](const Term<T>& x, const Term<T>& y) { return x.monomial < y.monomial; });
  out.terms_ = std::move(acc);
  return out;
}

template <Scalar T>
Element<T> symmetric_product(const Algebra& algebra, int i, int j) {
  std::vector<Term<T>> terms;
  for (int a = 1; a <= algebra->colors(); ++a) {
    for (auto [p, q] : {std::pair{i, j}, std::pair{j, i}}) {
      const GeneratorId ids[2] = {{Species::field, p, a, true}, {Species::field, q, a, false}};
      auto e = Element<T>::product_of(algebra, ids, T(1));
      for (const auto& t : e.terms()) terms.push_back(t);
    }
  }
  return Element<T>::from_terms(algebra, std::move(terms));
}

template <Scalar T>
Element<T> source_coupling(const Algebra& algebra, int j) {
  if (!algebra->with_sources()) throw UsageError("sources not enabled");
  std::vector<Term<T>> terms;
  for (int a = 1; a <= algebra->colors(); ++a) {
    const GeneratorId first[2] = {{Species::field, j, a, true}, {Species::source, j, a, false}};
    const GeneratorId second[2] = {{Species::source, j, a, true}, {Species::field, j, a, false}};
    for (const auto* ids : {first, second}) {
      const auto e = Element<T>::product_of(algebra, std::span<const GeneratorId>(ids, 2), T(1));
      for (const auto& t : e.terms()) terms.push_back(t);
    }
  }
  return Element<T>::from_terms(algebra, std::move(terms));
}

template <Scalar T>
Element<T> series_apply(std::span<const T> coeffs, const Element<T>& x) {
  if (!x.is_even()) throw DomainError("series_apply needs an even element");
  if (!Traits<T>::is_zero(x.scalar_part())) {
    throw DomainError("series_apply needs a nilpotent element (zero scalar part)");
  }
  Element<T> result(x.algebra());
  if (coeffs.empty()) return result;
  result = Element<T>::constant(x.algebra(), coeffs[0]);
  Element<T> power = x;
  for (std::size_t k = 1; k < coeffs.size() && !power.is_zero(); ++k) {
    if (!Traits<T>::is_zero(coeffs[k])) result += power * coeffs[k];
    if (k + 1 < coeffs.size()) power = gmul(power, x);
  }
  return result;
}

namespace {

// Number of nonzero powers an even nilpotent element can have.
template <Scalar T>
std::size_t nilpotency_bound(const Element<T>& n) {
  int min_degree = 1 << 20;
  for (const auto& t : n.terms()) min_degree = std::min(min_degree, t.monomial.degree());
  if (n.is_zero()) return 1;
  return static_cast<std::size_t>(n.support().degree() / std::max(min_degree, 1)) + 1;
}

template <Scalar T>
Element<T> exp_nilpotent(const Element<T>& n) {
  std::vector<T> coeffs;
  const std::size_t order = nilpotency_bound(n);
  T c(1);
  for (std::size_t k = 0; k <= order; ++k) {
    coeffs.push_back(c);
    c /= T(static_cast<double>(k + 1));
  }
  return series_apply<T>(coeffs, n);
}

}  // namespace

template <Scalar T>
Element<T> exp_even(const Element<T>& x) {
  if (!x.is_even()) throw DomainError("exp_even needs an even element");
  const T c = x.scalar_part();
  if (Traits<T>::is_zero(c)) return exp_nilpotent(x);
  if constexpr (std::is_same_v<T, Rational>) {
    throw DomainError("exp_even in exact mode needs a zero scalar part");
  } else {
    Element<T> n = x - Element<T>::constant(x.algebra(), c);
    return exp_nilpotent(n) * std::exp(c);
  }
}

template <Scalar T>
Element<T> log_unit(const Element<T>& x) {
  if (!x.is_even()) throw DomainError("log_unit needs an even element");
  if (x.scalar_part() != T(1)) throw DomainError("log_unit needs scalar part 1");
  const Element<T> n = x - Element<T>::constant(x.algebra(), T(1));
  std::vector<T> coeffs{T(0)};
  const std::size_t order = nilpotency_bound(n);
  for (std::size_t k = 1; k <= order; ++k) {
    T c = T(1) / T(static_cast<double>(k));
    coeffs.push_back(k % 2 == 1 ? c : T(-c));
  }
  return series_apply<T>(coeffs, n);
}

template <Scalar T>
Element<T> berezin(const Element<T>& x, std::span<const int> sites) {
  const auto& alg = *x.algebra();
  Monomial all;
  std::vector<int> order;  // generator indices in application order
  for (int s : sites) {
    if (s < 0 || s >= alg.num_sites()) throw UsageError("site out of range");
    const Monomial mask = alg.site_mask(s);
    if (all.intersects(mask)) continue;
    all = all | mask;
    for (int a = alg.colors(); a >= 1; --a) {
      order.push_back(alg.index({Species::field, s, a, false}));
      order.push_back(alg.index({Species::field, s, a, true}));
    }
  }
  std::vector<Term<T>> out;
  for (const auto& t : x.terms()) {
    if (!t.monomial.contains(all)) continue;
    Monomial cur = t.monomial;
    int parity = 0;
    for (int g : order) {
      parity += cur.count_below(g);
      cur = cur.without(Monomial::bit(g));
    }
    out.push_back({cur, (parity & 1) ? T(-t.coeff) : t.coeff});
  }
  return Element<T>::from_terms(x.algebra(), std::move(out));
}

template <Scalar T>
Element<T> truncate_degree(const Element<T>& x, Monomial mask, int max_degree) {
  std::vector<Term<T>> kept;
  for (const auto& t : x.terms()) {
    if ((t.monomial & mask).degree() <= max_degree) kept.push_back(t);
  }
  return Element<T>::from_terms(x.algebra(), std::move(kept));
}

template <Scalar T>
T l1_norm(const Element<T>& x) {
  T s(0);
  for (const auto& t : x.terms()) s += Traits<T>::abs(t.coeff);
  return s;
}

template <Scalar T>
std::string to_string(const Element<T>& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : x.terms()) {
    if (!first) os << " + ";
    first = false;
    os << Traits<T>::str(t.coeff);
    if (!t.monomial.empty()) os << " " << x.algebra()->monomial_name(t.monomial);
  }
  return os.str();
}

#define HYPERFERMI_INSTANTIATE(T)                                                    \
  template class Element<T>;                                                         \
  template Element<T> gmul<T>(const Element<T>&, const Element<T>&);                 \
  template Element<T> symmetric_product<T>(const Algebra&, int, int);                \
  template Element<T> source_coupling<T>(const Algebra&, int);                       \
  template Element<T> series_apply<T>(std::span<const T>, const Element<T>&);        \
  template Element<T> exp_even<T>(const Element<T>&);                                \
  template Element<T> log_unit<T>(const Element<T>&);                                \
  template Element<T> berezin<T>(const Element<T>&, std::span<const int>);           \
  template Element<T> truncate_degree<T>(const Element<T>&, Monomial, int);         \
  template T l1_norm<T>(const Element<T>&);                                          \
  template std::string to_string<T>(const Element<T>&);

HYPERFERMI_INSTANTIATE(Rational)
HYPERFERMI_INSTANTIATE(double)

#undef HYPERFERMI_INSTANTIATE

}  // namespace hyperfermi
