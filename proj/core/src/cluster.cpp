#include "hyperfermi/cluster.hpp"

#include <algorithm>
#include <limits>

#include "hyperfermi/errors.hpp"
#include "hyperfermi/parallel.hpp"

namespace hyperfermi {

namespace {

template <Scalar T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

SiteMask lowest(SiteMask m) { return m & (~m + 1); }

}  // namespace

template <Scalar T>
PolymerSystem<T>::PolymerSystem(Model<T> model) : PolymerSystem(std::move(model), Options{}) {}

template <Scalar T>
PolymerSystem<T>::PolymerSystem(Model<T> model, Options options)
    : model_(std::move(model)), options_(options), one_(Element<T>::constant(model_.algebra(), T(1))) {
  if (model_.num_sites() > kMaxPolymerSites) {
    throw CapacityError("polymer enumeration limited to " + std::to_string(kMaxPolymerSites) + " sites");
  }
}

template <Scalar T>
Element<T> PolymerSystem<T>::compute_connected(SiteMask Y) {
  if (popcount(Y) == 1) return one_;
  if (options_.skip_disconnected && !graph().connected(Y)) return Element<T>(model_.algebra());
  Element<T> result = model_.gibbs(Y);
  const SiteMask anchor = lowest(Y);
  const SiteMask rest = Y & ~anchor;
  // S = anchor | R over proper subsets R of rest
  for (SiteMask R = (rest - 1) & rest;; R = (R - 1) & rest) {
    const SiteMask S = anchor | R;
    const Element<T>& cs = connected_part(S);
    if (!cs.is_zero()) result -= gmul(cs, model_.gibbs(Y & ~S));
    if (R == 0) break;
  }
  return result;
}

template <Scalar T>
const Element<T>& PolymerSystem<T>::connected_part(SiteMask Y) {
  if (Y == 0 || (Y & ~graph().all()) != 0) throw UsageError("polymer must be a nonempty subset of the vertices");
  if (auto it = conn_.find(Y); it != conn_.end()) return it->second;
  Element<T> c = compute_connected(Y);
  return conn_.emplace(Y, std::move(c)).first->second;
}

template <Scalar T>
T PolymerSystem<T>::compute_activity(SiteMask Y) {
  const Element<T>& c = connected_part(Y);
  if (c.is_zero()) return T(0);
  auto factors = model_.measure_factors(Y);
  factors.push_back(c);
  return integrate_factors(std::move(factors), Y).scalar_part() / model_.product_single_site_Z(Y);
}

template <Scalar T>
T PolymerSystem<T>::activity(SiteMask Y) {
  if (popcount(Y) < 2) throw UsageError("activities are defined for polymers with at least two sites");
  if (auto it = activity_.find(Y); it != activity_.end()) return it->second;
  T k = compute_activity(Y);
  activity_.emplace(Y, k);
  return k;
}

template <Scalar T>
T PolymerSystem<T>::activity2(SiteMask Y, int i0, int j0, int alpha) {
  if (!(Y & site_bit(i0)) || !(Y & site_bit(j0))) return T(0);
  const Element<T>& c = connected_part(Y);
  if (c.is_zero()) return T(0);
  const GeneratorId ids[2] = {{Species::field, i0, alpha, true}, {Species::field, j0, alpha, false}};
  auto factors = model_.measure_factors(Y);
  factors.push_back(c);
  factors.push_back(Element<T>::product_of(model_.algebra(), ids, T(1)));
  return integrate_factors(std::move(factors), Y).scalar_part() / model_.product_single_site_Z(Y);
}

template <Scalar T>
T PolymerSystem<T>::single_site_two_point(int j, int alpha) {
  const int key = j * 1024 + alpha;
  if (auto it = single_.find(key); it != single_.end()) return it->second;
  T v = activity2(site_bit(j), j, j, alpha);
  single_.emplace(key, v);
  return v;
}

template <Scalar T>
T PolymerSystem<T>::derivative_activity(SiteMask Y, int i0, int j0, int alpha) {
  if (popcount(Y) == 1) {
    return (i0 == j0 && Y == site_bit(i0)) ? single_site_two_point(i0, alpha) : T(0);
  }
  T k2 = activity2(Y, i0, j0, alpha);
  if (i0 == j0 && (Y & site_bit(i0))) k2 -= activity(Y) * single_site_two_point(i0, alpha);
  return k2;
}

template <Scalar T>
std::vector<SiteMask> PolymerSystem<T>::polymers() const {
  std::vector<SiteMask> out;
  const SiteMask all = graph().all();
  for (SiteMask Y = 1; Y <= all; ++Y) {
    if (popcount(Y) >= 2) out.push_back(Y);
  }
  std::stable_sort(out.begin(), out.end(), [](SiteMask a, SiteMask b) { return popcount(a) < popcount(b); });
  return out;
}

template <Scalar T>
void PolymerSystem<T>::precompute() {
  const auto all = polymers();
  // singletons and smaller levels are cached first, so workers only read conn_
  for (int j = 0; j < model_.num_sites(); ++j) connected_part(site_bit(j));
  std::size_t begin = 0;
  while (begin < all.size()) {
    std::size_t end = begin;
    while (end < all.size() && popcount(all[end]) == popcount(all[begin])) ++end;
    std::vector<SiteMask> todo;
    for (std::size_t k = begin; k < end; ++k) {
      if (!conn_.contains(all[k])) todo.push_back(all[k]);
    }
    std::vector<Element<T>> conn(todo.size(), Element<T>(model_.algebra()));
    parallel_for(todo.size(), [&](std::size_t k) { conn[k] = compute_connected(todo[k]); });
    for (std::size_t k = 0; k < todo.size(); ++k) conn_.emplace(todo[k], std::move(conn[k]));
    todo.clear();
    for (std::size_t k = begin; k < end; ++k) {
      if (!activity_.contains(all[k])) todo.push_back(all[k]);
    }
    std::vector<T> act(todo.size());
    parallel_for(todo.size(), [&](std::size_t k) { act[k] = compute_activity(todo[k]); });
    for (std::size_t k = 0; k < todo.size(); ++k) activity_.emplace(todo[k], act[k]);
    begin = end;
  }
}

template <Scalar T>
PolymerIdentityResult<T> polymer_identity_check(PolymerSystem<T>& system) {
  const auto& model = system.model();
  const SiteMask all = system.graph().all();
  system.precompute();
  PolymerIdentityResult<T> out;
  out.lhs = model.partition_function() / model.product_single_site_Z(all);
  // R(S) = R(S \ a) + sum_{T ni a, T subset S, |T| >= 2} K(T) R(S \ T), a = min S
  std::vector<T> R(static_cast<std::size_t>(all) + 1, T(0));
  R[0] = T(1);
  for (SiteMask S = 1; S <= all; ++S) {
    const SiteMask a = lowest(S);
    const SiteMask rest = S & ~a;
    T r = R[rest];
    for (SiteMask Q = rest; Q != 0; Q = (Q - 1) & rest) {
      const T k = system.activity(a | Q);
      if (!ScalarTraits<T>::is_zero(k)) r += k * R[S & ~(a | Q)];
    }
    R[S] = r;
  }
  out.rhs = R[all];
  out.residual = out.lhs - out.rhs;
  out.equal = out.lhs == out.rhs;
  return out;
}

std::int64_t phi_conn(std::span<const SiteMask> polymers) {
  const int n = static_cast<int>(polymers.size());
  if (n == 0) throw UsageError("phi_conn needs at least one polymer");
  if (n > 16) throw CapacityError("phi_conn supports at most 16 polymers");
  const std::uint32_t full = (1U << n) - 1;
  thread_local std::vector<std::int64_t> phi, conn;
  thread_local std::vector<SiteMask> uni;
  thread_local std::vector<int> size;
  phi.assign(full + 1, 0);
  conn.assign(full + 1, 0);
  uni.assign(full + 1, 0);
  size.assign(full + 1, 0);
  phi[0] = 1;
  for (std::uint32_t I = 1; I <= full; ++I) {
    const int low = __builtin_ctz(I);
    const std::uint32_t prev = I & (I - 1);
    uni[I] = uni[prev] | polymers[low];
    size[I] = size[prev] + popcount(polymers[low]);
    phi[I] = (phi[prev] != 0 && popcount(uni[I]) == size[I]) ? 1 : 0;
  }
  for (std::uint32_t I = 1; I <= full; ++I) {
    const std::uint32_t a = I & (~I + 1);
    const std::uint32_t rest = I & ~a;
    std::int64_t c = phi[I];
    // proper S = a | R, R strict subset of rest
    if (rest != 0) {
      for (std::uint32_t R = (rest - 1) & rest;; R = (R - 1) & rest) {
        c -= conn[a | R] * phi[rest & ~R];
        if (R == 0) break;
      }
    }
    conn[I] = c;
  }
  return conn[full];
}

template <Scalar T>
MayerBound mayer_bound(PolymerSystem<T>& system, int i0, int j0, int alpha, double C) {
  const int n = system.model().num_sites();
  MayerBound out;
  auto weight = [&](SiteMask Y) { return std::pow(C, popcount(Y)); };
  if (i0 == j0) out.A += std::fabs(to_double(system.derivative_activity(site_bit(i0), i0, j0, alpha))) * C;
  std::vector<double> per_site(n, 0.0);
  for (SiteMask Y : system.polymers()) {
    const double w = weight(Y);
    if ((Y & site_bit(i0)) && (Y & site_bit(j0))) {
      out.A += std::fabs(to_double(system.derivative_activity(Y, i0, j0, alpha))) * w;
    }
    const double k = std::fabs(to_double(system.activity(Y))) * w;
    for (int s : sites_of(Y)) per_site[s] += k;
  }
  out.B = *std::max_element(per_site.begin(), per_site.end());
  out.convergent = out.B < 1.0;
  out.bound = out.convergent ? out.A / (1.0 - out.B) : std::numeric_limits<double>::infinity();
  return out;
}

template <Scalar T>
TwoPointSeries<T> two_point_series(PolymerSystem<T>& system, int i0, int j0, int alpha, int n_max, double C) {
  if (n_max < 1) throw UsageError("two_point_series needs n_max >= 1");
  system.precompute();
  std::vector<SiteMask> first, others;
  std::vector<T> k2, k;
  for (SiteMask Y : system.polymers()) {
    const T d = system.derivative_activity(Y, i0, j0, alpha);
    if (!ScalarTraits<T>::is_zero(d)) {
      first.push_back(Y);
      k2.push_back(d);
    }
    const T a = system.activity(Y);
    if (!ScalarTraits<T>::is_zero(a)) {
      others.push_back(Y);
      k.push_back(a);
    }
  }
  TwoPointSeries<T> out;
  T sum = i0 == j0 ? system.single_site_two_point(i0, alpha) : T(0);
  std::vector<SiteMask> family;
  T factorial(1);
  for (int N = 1; N <= n_max; ++N) {
    if (N > 1) factorial *= T(N - 1);
    T term(0);
    family.assign(N, 0);
    // odometer over (first index, others indices)
    std::vector<std::size_t> idx(N, 0);
    if (!first.empty() && (N == 1 || !others.empty())) {
      while (true) {
        family[0] = first[idx[0]];
        T w = k2[idx[0]];
        for (int l = 1; l < N; ++l) {
          family[l] = others[idx[l]];
          w *= k[idx[l]];
        }
        const std::int64_t phi = phi_conn(family);
        if (phi != 0) term += w * T(static_cast<double>(phi));
        int pos = N - 1;
        while (pos >= 0) {
          const std::size_t limit = pos == 0 ? first.size() : others.size();
          if (++idx[pos] < limit) break;
          idx[pos] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    }
    sum += term / factorial;
    out.partial_sums.push_back(sum);
  }
  const MayerBound mb = mayer_bound(system, i0, j0, alpha, C);
  out.A = mb.A;
  out.B = mb.B;
  out.convergent = mb.convergent;
  out.tail_bound =
      mb.convergent ? mb.A * std::pow(mb.B, n_max) / (1.0 - mb.B) : std::numeric_limits<double>::infinity();
  return out;
}

void for_each_set_partition(int n, const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  if (n < 0 || n > 16) throw UsageError("set partitions supported for 0 <= n <= 16");
  std::vector<std::uint32_t> blocks;
  std::function<void(int)> place = [&](int i) {
    if (i == n) {
      visit(blocks);
      return;
    }
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      blocks[k] |= 1U << i;
      place(i + 1);
      blocks[k] &= ~(1U << i);
    }
    blocks.push_back(1U << i);
    place(i + 1);
    blocks.pop_back();
  };
  place(0);
}

ExpIdentityResult exp_partition_identity_check(const std::vector<Rational>& f, int n_max) {
  if (n_max < 1) throw UsageError("exp_partition_identity_check needs n_max >= 1");
  auto fval = [&](int size) { return size <= static_cast<int>(f.size()) ? canonical(f[size - 1]) : Rational(0); };
  ExpIdentityResult out;
  out.lhs.assign(n_max + 1, Rational(0));
  for (int N = 1; N <= n_max; ++N) {
    Rational total = 0;
    for_each_set_partition(N, [&](const std::vector<std::uint32_t>& blocks) {
      Rational p = 1;
      for (auto b : blocks) p *= fval(__builtin_popcount(b));
      total += p;
    });
    out.lhs[N] = total / Rational(factorial(N));
  }
  // exp(g) - 1 with g(x) = sum_n f(n) x^n / n!, as truncated power series
  std::vector<Rational> g(n_max + 1, Rational(0));
  for (int n = 1; n <= n_max; ++n) g[n] = fval(n) / Rational(factorial(n));
  std::vector<Rational> power(n_max + 1, Rational(0));
  power[0] = 1;
  out.rhs.assign(n_max + 1, Rational(0));
  for (int M = 1; M <= n_max; ++M) {
    std::vector<Rational> next(n_max + 1, Rational(0));
    for (int a = 0; a <= n_max; ++a) {
      if (sgn(power[a]) == 0) continue;
      for (int b = 1; a + b <= n_max; ++b) next[a + b] += power[a] * g[b];
    }
    power = std::move(next);
    const Rational inv = Rational(1) / Rational(factorial(M));
    for (int N = 1; N <= n_max; ++N) out.rhs[N] += power[N] * inv;
  }
  out.equal = out.lhs == out.rhs;
  return out;
}

template class PolymerSystem<Rational>;
template class PolymerSystem<double>;
template PolymerIdentityResult<Rational> polymer_identity_check<Rational>(PolymerSystem<Rational>&);
template PolymerIdentityResult<double> polymer_identity_check<double>(PolymerSystem<double>&);
template MayerBound mayer_bound<Rational>(PolymerSystem<Rational>&, int, int, int, double);
template MayerBound mayer_bound<double>(PolymerSystem<double>&, int, int, int, double);
template TwoPointSeries<Rational> two_point_series<Rational>(PolymerSystem<Rational>&, int, int, int, int, double);
template TwoPointSeries<double> two_point_series<double>(PolymerSystem<double>&, int, int, int, int, double);

}  // namespace hyperfermi
