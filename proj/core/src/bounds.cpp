#include "hyperfermi/bounds.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "hyperfermi/cluster.hpp"
#include "hyperfermi/errors.hpp"
#include "hyperfermi/forests.hpp"
#include "hyperfermi/singlesite.hpp"

namespace hyperfermi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelativeCut = 1e-30;

int default_radius(int d) {
  // (radius + 1)^d points in the positive orthant, about 4e6 at most
  const double r = std::floor(std::pow(4e6, 1.0 / d)) - 1;
  return std::max(4, static_cast<int>(std::min(r, 1e6)));
}

// sum over j != 0, |j|_inf <= radius of f(|j|_2), folded onto the positive
// orthant with multiplicity 2^{#nonzero coordinates}
template <class F>
double orthant_sum(int d, int radius, F&& f) {
  std::vector<int> j(d, 0);
  double total = 0;
  for (;;) {
    int k = 0;
    while (k < d && j[k] == radius) j[k++] = 0;
    if (k == d) break;
    ++j[k];
    double r2 = 0;
    int nonzero = 0;
    for (int c : j) {
      r2 += static_cast<double>(c) * c;
      nonzero += c != 0;
    }
    total += std::ldexp(f(std::sqrt(r2)), nonzero);
  }
  return total;
}

}  // namespace

std::string to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::nearest_neighbour:
      return "nn";
    case InteractionKind::exponential:
      return "exp";
    case InteractionKind::polynomial:
      return "poly";
  }
  return "?";
}

std::string to_string(Metric metric) { return metric == Metric::euclidean ? "euclidean" : "log"; }

InteractionKind parse_interaction(std::string_view text) {
  if (text == "nn") return InteractionKind::nearest_neighbour;
  if (text == "exp") return InteractionKind::exponential;
  if (text == "poly") return InteractionKind::polynomial;
  throw std::invalid_argument("unknown interaction class '" + std::string(text) + "'");
}

Metric parse_metric(std::string_view text) {
  if (text == "euclidean") return Metric::euclidean;
  if (text == "log") return Metric::log;
  throw std::invalid_argument("unknown metric '" + std::string(text) + "'");
}

TreeSeries tree_series(double x, int n_min, int shift) {
  if (n_min < 1 || shift < 1 || shift > 2) throw UsageError("tree_series needs n_min >= 1, shift in {1, 2}");
  if (x < 0) throw DomainError("tree_series needs x >= 0");
  auto log_term = [&](int N) {
    return (N - n_min) * std::log(x) + (N - 2) * std::log(static_cast<double>(N)) -
           std::lgamma(std::max(N - shift, 0) + 1.0);
  };
  TreeSeries out;
  if (x == 0) {
    out.value = std::pow(static_cast<double>(n_min), n_min - 2) / std::tgamma(std::max(n_min - shift, 0) + 1.0);
    out.terms = 1;
    out.convergent = true;
    return out;
  }
  if (x * std::exp(1.0) >= 1) {
    out.value = out.tail = kInf;
    return out;
  }
  // For N >= shift the term ratio is x (N+1)^{N-1} / (N^{N-2} (N+1-shift))
  // <= x e N / (N + 1 - shift), non-increasing in N.
  for (int N = n_min; N < 1000000; ++N) {
    const double t = std::exp(log_term(N));
    out.value += t;
    out.terms = N - n_min + 1;
    if (N < shift) continue;
    const double q = x * std::exp(1.0) * N / (N + 1 - shift);
    if (q >= 1) continue;
    const double tail = t * q / (1 - q);
    if (tail <= kRelativeCut * out.value) {
      out.tail = tail;
      out.convergent = true;
      return out;
    }
  }
  throw CapacityError("tree_series did not reach its truncation criterion");
}

namespace {

LatticeSum radial_lattice_sum(double rate, Metric metric, int d, int radius) {
  if (d < 1) throw UsageError("dimension must be >= 1");
  if (rate <= 0) throw DomainError("decay rate must be positive");
  LatticeSum out;
  out.radius = radius > 0 ? radius : default_radius(d);
  const int R = out.radius;
  if (metric == Metric::log && rate <= d) {
    out.finite = false;
    out.value = out.tail = kInf;
    return out;
  }
  if (metric == Metric::euclidean) {
    out.value = orthant_sum(d, R, [&](double r) { return std::exp(-rate * r); });
    // shell k holds at most 2d (2k+1)^{d-1} points, all with |j|_2 >= k
    const double q = std::pow((2.0 * R + 5) / (2.0 * R + 3), d - 1) * std::exp(-rate);
    if (q >= 1) throw CapacityError("lattice radius too small for a geometric tail");
    out.tail = 2.0 * d * std::pow(2.0 * R + 3, d - 1) * std::exp(-rate * (R + 1)) / (1 - q);
  } else {
    out.value = orthant_sum(d, R, [&](double r) { return std::pow(1 + r, -rate); });
    // (2k+1)^{d-1} <= 2^{d-1} (1+k)^{d-1}, then compare with the integral from R
    out.tail = 2.0 * d * std::pow(2.0, d - 1) * std::pow(1.0 + R, d - rate) / (rate - d);
  }
  return out;
}

}  // namespace

LatticeSum exp_lattice_sum(double rate, Metric metric, int d, int radius) {
  return radial_lattice_sum(rate, metric, d, radius);
}

LatticeSum poly_lattice_sum(double a, int d, int radius) { return radial_lattice_sum(a, Metric::log, d, radius); }

ConvolutionConstant convolution_constant(double a, int d, int radius, int r_max) {
  if (a <= d) throw DomainError("convolution constant needs a > d");
  if (r_max < 0 || radius <= r_max) throw UsageError("convolution constant needs 0 <= r_max < radius");
  ConvolutionConstant out;
  out.radius = radius;
  out.r_max = r_max;
  const int span = radius + r_max;
  const int width = 2 * span + 1;
  std::size_t cells = 1;
  for (int k = 0; k < d; ++k) {
    cells *= width;
    if (cells > 50'000'000) throw CapacityError("convolution box too large");
  }
  // f on the box [-span, span]^d, row-major
  std::vector<double> f(cells);
  {
    std::vector<int> c(d, -span);
    for (std::size_t idx = 0; idx < cells; ++idx) {
      double r2 = 0;
      for (int v : c) r2 += static_cast<double>(v) * v;
      f[idx] = std::pow(1 + std::sqrt(r2), -a);
      for (int k = d - 1; k >= 0; --k) {
        if (++c[k] <= span) break;
        c[k] = -span;
      }
    }
  }
  std::vector<std::size_t> stride(d, 1);
  for (int k = d - 2; k >= 0; --k) stride[k] = stride[k + 1] * width;
  auto index = [&](const std::vector<int>& v) {
    std::size_t idx = 0;
    for (int k = 0; k < d; ++k) idx += static_cast<std::size_t>(v[k] + span) * stride[k];
    return idx;
  };
  const double tail_common = 2.0 * d * std::pow(2.0 * (1 + r_max), d - 1) *
                             std::pow(1.0 + radius - r_max, d - 2 * a) / (2 * a - d);
  std::vector<int> r(d, 0), y(d), diff(d);
  for (;;) {
    double sum = 0;
    std::fill(y.begin(), y.end(), -radius);
    for (;;) {
      for (int k = 0; k < d; ++k) diff[k] = r[k] - y[k];
      sum += f[index(y)] * f[index(diff)];
      int k = d - 1;
      while (k >= 0 && y[k] == radius) y[k--] = -radius;
      if (k < 0) break;
      ++y[k];
    }
    const double fr = f[index(r)];
    out.value = std::max(out.value, (sum + tail_common) / fr);
    out.tail = std::max(out.tail, tail_common / fr);
    int k = d - 1;
    while (k >= 0 && r[k] == r_max) r[k--] = 0;
    if (k < 0) break;
    ++r[k];
  }
  const LatticeSum sigma = poly_lattice_sum(a, d);
  out.analytic_bound = std::pow(2.0, a + 1) * (1 + sigma.value + sigma.tail);
  return out;
}

namespace {

void finish(DecayBoundReport& rep, double A_pref, const TreeSeries& sa, double B_pref, const TreeSeries& sb) {
  rep.A_value = A_pref * sa.value;
  rep.B_value = B_pref * sb.value;
  const double A_up = A_pref * (sa.value + sa.tail);
  const double B_up = B_pref * (sb.value + sb.tail);
  rep.truncation_tail = A_pref * sa.tail + B_pref * sb.tail;
  rep.convergent = sa.convergent && sb.convergent && B_up < 1;
  rep.bound = rep.convergent ? A_up / (1 - B_up) : kInf;
  if (!rep.convergent) rep.truncation_tail = kInf;
}

void check_common(double beta, int m, double C, double C_activity) {
  if (beta < 0) throw DomainError("beta must be nonnegative");
  if (m < 1) throw DomainError("m must be >= 1");
  if (C <= 0 || C_activity <= 0) throw DomainError("constants must be positive");
}

}  // namespace

DecayBoundReport nn_decay_bound(double beta, int m, int d, int dist, double C, double C_activity) {
  check_common(beta, m, C, C_activity);
  if (d < 1) throw UsageError("dimension must be >= 1");
  if (dist < 0) throw UsageError("distance must be >= 0");
  DecayBoundReport rep;
  rep.kind = InteractionKind::nearest_neighbour;
  rep.beta = beta;
  rep.m = m;
  rep.d = d;
  rep.dist = dist;
  rep.C = C;
  rep.C_activity = C_activity;
  const double c = C * C_activity;
  const double bm = beta * m;
  rep.lattice_factor = 2.0 * d;
  const double x = rep.lattice_factor * c * bm;
  rep.C0 = std::exp(1.0) * rep.lattice_factor * c;
  rep.scaling = std::pow(rep.C0 * bm, dist);
  // A <= c sum_{N >= dist+1} (c beta m)^{N-1} N^{N-2} (2d)^N / |N-2|!
  const int n_min = dist + 1;
  const TreeSeries sa = tree_series(x, n_min, 2);
  const TreeSeries sb = tree_series(x, 2, 1);
  finish(rep, c * rep.lattice_factor * std::pow(x, n_min - 1), sa, c * x, sb);
  return rep;
}

DecayBoundReport exp_decay_bound(double beta, int m, double a, Metric metric, double dist, int d, double C,
                                 double C_activity) {
  check_common(beta, m, C, C_activity);
  if (a <= 0) throw DomainError("decay rate a must be positive");
  if (dist < 0) throw UsageError("distance must be >= 0");
  const LatticeSum sigma = exp_lattice_sum(a / 2, metric, d);
  if (!sigma.finite) throw DomainError("sum of e^{-(a/2) dist} diverges");
  DecayBoundReport rep;
  rep.kind = InteractionKind::exponential;
  rep.metric = metric;
  rep.beta = beta;
  rep.m = m;
  rep.d = d;
  rep.a = a;
  rep.dist = dist;
  rep.C = C;
  rep.C_activity = C_activity;
  const double c = C * C_activity;
  const double bm = beta * m;
  rep.lattice_factor = sigma.value + sigma.tail;
  rep.C0 = std::exp(1.0) * c * rep.lattice_factor;
  const double x = c * bm * rep.lattice_factor;
  const int l0 = dist > 0 ? 2 : 1;
  const double metric_dist = metric == Metric::euclidean ? dist : std::log1p(dist);
  const double decay = std::exp(-(a / 2) * metric_dist);
  const TreeSeries sa = tree_series(x, l0, 2);
  const TreeSeries sb = tree_series(x, 2, 1);
  finish(rep, decay * std::pow(c, l0) * std::pow(bm, l0 - 1), sa, c * x, sb);
  return rep;
}

DecayBoundReport poly_decay_bound(double beta, int m, double a, int d, double dist, double C, double C_activity) {
  check_common(beta, m, C, C_activity);
  if (d < 1) throw UsageError("dimension must be >= 1");
  if (a <= d) throw DomainError("polynomial decay needs a > d");
  if (dist < 0) throw UsageError("distance must be >= 0");
  const LatticeSum sigma = poly_lattice_sum(a, d);
  const int radius = d == 1 ? 200 : d == 2 ? 100 : 30;
  const ConvolutionConstant conv = convolution_constant(a, d, radius, radius / 10);
  DecayBoundReport rep;
  rep.kind = InteractionKind::polynomial;
  rep.beta = beta;
  rep.m = m;
  rep.d = d;
  rep.a = a;
  rep.dist = dist;
  rep.C = C;
  rep.C_activity = C_activity;
  rep.convolution = conv.value;
  const double c = C * C_activity;
  const double bm = beta * m;
  const double sig = sigma.value + sigma.tail;
  rep.lattice_factor = std::max(conv.value, sig);
  rep.C0 = std::exp(1.0) * c * rep.lattice_factor;
  const int l0 = dist > 0 ? 2 : 1;
  const double decay = std::pow(1 + dist, -a);
  const TreeSeries sa = tree_series(c * bm * rep.lattice_factor, l0, 2);
  const double xb = c * bm * sig;
  const TreeSeries sb = tree_series(xb, 2, 1);
  finish(rep, decay * std::pow(c, l0) * std::pow(bm, l0 - 1), sa, c * xb, sb);
  return rep;
}

namespace {

Rational to_rational(const Rational& r) { return r; }
Rational to_rational(double r) { return Rational(r); }

template <Scalar T>
ActivityBoundReport activity_check_impl(const WeightedGraph& g, const ModelParams& p, int y_max, double C_probe) {
  ActivityBoundReport out;
  out.C_probe = C_probe;
  PolymerSystem<T> sys(Model<T>(g, p.beta, p.m));
  const int n = g.num_vertices();
  if (y_max >= n) sys.precompute();
  const Rational bm = canonical(p.beta) * p.m;
  auto consider = [&](SiteMask Y, const T& value, const Rational& tree, double& slot) {
    const Rational v = abs(to_rational(value));
    const int size = popcount(Y);
    const Rational denom = pow(bm, static_cast<unsigned>(size - 1)) * tree;
    if (sgn(denom) == 0) {
      if (sgn(v) != 0) out.counterexamples.push_back(Y);
      return;
    }
    const double c = std::pow(to_double(Rational(v / denom)), 1.0 / size);
    slot = std::max(slot, c);
    if (c >= out.C_emp) {
      out.C_emp = c;
      out.worst = Y;
    }
  };
  for (SiteMask Y = 1; Y <= g.all() && Y != 0; ++Y) {
    const int size = popcount(Y);
    if (size > y_max) continue;
    ++out.polymers_checked;
    const Rational tree = kirchhoff_tree_sum(g, Y);
    if (size >= 2) consider(Y, sys.activity(Y), tree, out.C_emp_K);
    for (int i0 : sites_of(Y)) {
      for (int j0 : sites_of(Y)) {
        consider(Y, sys.derivative_activity(Y, i0, j0, 1), tree, out.C_emp_two_point);
        if (size >= 2) consider(Y, sys.activity2(Y, i0, j0, 1), tree, out.C_emp_two_point);
      }
    }
    if (Y == g.all()) break;
  }
  out.pass = out.counterexamples.empty() && out.C_emp <= C_probe;
  return out;
}

}  // namespace

ActivityBoundReport activity_bound_check(const WeightedGraph& g, const ModelParams& p, int y_max, double C_probe) {
  if (p.beta < 0) throw DomainError("beta must be nonnegative");
  if (p.beta * p.m > 1) throw DomainError("activity bounds need beta m <= 1");
  if (y_max < 1) throw UsageError("y_max must be >= 1");
  if (p.mode == CoefficientMode::exact) return activity_check_impl<Rational>(g, p, y_max, C_probe);
  return activity_check_impl<double>(g, p, y_max, C_probe);
}

NormReport verify_norm_estimates(const WeightedGraph& g, const Rational& beta_in, int m,
                                 const std::vector<Rational>& s_grid) {
  const Rational beta = canonical(beta_in);
  if (beta < 0) throw DomainError("beta must be nonnegative");
  if (m < 1) throw DomainError("m must be >= 1");
  NormReport rep;
  rep.C = 2 * (1 + g.max_weighted_degree());
  const Rational exp_low = exp_lower_bound(rep.C * m * beta, 30);
  const Algebra alg = make_algebra(2, m, false, CoefficientMode::exact);
  const ExactElement one = ExactElement::constant(alg, 1);
  const ExactElement x0 = symmetric_product<Rational>(alg, 0, 0);
  const ExactElement x1 = symmetric_product<Rational>(alg, 1, 1);
  const ExactElement zz = (one + x0) * (one + x1);  // z_l^2 z_l'^2
  const Rational zz_norm = pow(Rational(1 + 2 * m), 2);
  const Rational cut("1/1000000000000000000000000000000");

  auto push = [&](std::string name, const Edge& e, const Rational& s, const Rational& lhs, const Rational& rhs,
                  bool pass) { rep.checks.push_back({std::move(name), e.u, e.v, s, lhs, rhs, pass}); };

  for (const Edge& e : g.edges()) {
    const Rational& J = e.weight;
    const ExactElement A = Rational(-beta) * (one + symmetric_product<Rational>(alg, 0, 1));
    const Rational a_norm = l1_norm(A);
    push("A_norm_formula", e, 0, a_norm, beta * (1 + 2 * m), a_norm == beta * (1 + 2 * m));
    push("A_norm", e, 0, a_norm, 3 * m * beta, a_norm <= 3 * m * beta);

    for (const Rational& s_in : s_grid) {
      const Rational s = canonical(s_in);
      const Rational w = s * beta * J;
      const Rational w2 = w * w;
      const Rational y2 = w2 * zz_norm;  // bounds (s beta J)^2 ||z_l^2 z_l'^2||
      ExactElement b0(alg), b1(alg);
      ExactElement zpow = one;
      Rational wpow = 1;  // (s beta J)^{2k}
      Rational ypow = 1;  // y2^k
      Rational tail0, tail1;
      for (unsigned k = 0;; ++k) {
        if (k >= 1) b0 += zpow * (wpow / Rational(factorial(2 * k)));
        b1 += zpow * (wpow / Rational(factorial(2 * k + 1)));
        // remainders over k' > k, each with a geometric majorant
        const Rational next = ypow * y2;
        const Rational r0 = y2 / Rational((2 * k + 3) * (2 * k + 4));
        const Rational r1 = y2 / Rational((2 * k + 4) * (2 * k + 5));
        if (r0 < 1 && r1 < 1) {
          tail0 = next / Rational(factorial(2 * k + 2)) / (1 - r0);
          tail1 = abs(s * J) * next / Rational(factorial(2 * k + 3)) / (1 - r1);
          if (k >= 1 && tail0 <= cut && tail1 <= cut) break;
        }
        zpow = zpow * zz;
        wpow *= w2;
        ypow = next;
      }
      b1 *= Rational(-s * J);
      const Rational b0_up = l1_norm(b0) + tail0;
      const Rational b1_up = l1_norm(b1) + tail1;
      const Rational b0_rhs = 3 * m * beta * J * exp_low;
      const Rational b1_rhs = J * exp_low;
      push("B0_norm", e, s, b0_up, b0_rhs, b0_up <= b0_rhs);
      push("B1_norm", e, s, b1_up, b1_rhs, b1_up <= b1_rhs);
    }

    const ExactElement s0 = series_apply<Rational>(measure_series(g.eps(e.u), m, false), x0);
    const ExactElement s1 = series_apply<Rational>(measure_series(g.eps(e.v), m, false), x1);
    const Rational sp = l1_norm(s0 * s1);
    const Rational sp_rhs =
        rep.C * rep.C * single_site_Z({m, g.eps(e.u)}) * single_site_Z({m, g.eps(e.v)});
    push("spurious_edge", e, 0, sp, sp_rhs, sp <= sp_rhs);
  }
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const NormCheck& c) { return c.pass; });
  return rep;
}

}  // namespace hyperfermi
