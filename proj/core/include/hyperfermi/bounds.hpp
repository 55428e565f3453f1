#pragma once

// Decay certificates for the two-point function from tree-counted activity
// bounds, and exact checks of the norm estimates that feed them.
//
// With a per-vertex constant C (Mayer weight times activity constant) the
// two-point function is dominated by A / (1 - B), where
//   A = sum_{Y ni i0, j0} C^{|Y|} (beta m)^{|Y|-1} T(Y),
//   B = sup_k sum_{Y ni k, |Y| > 1} C^{|Y|} (beta m)^{|Y|-1} T(Y),
// and T(Y) is the weighted spanning-tree sum. The lattice sums over the
// positions of the free vertices are bounded per interaction class.
// |N - 2|! is read as max(N - 2, 0)!.

#include <cmath>
#include <string>
#include <vector>

#include "hyperfermi/graph.hpp"
#include "hyperfermi/model.hpp"

namespace hyperfermi {

enum class InteractionKind { nearest_neighbour, exponential, polynomial };
enum class Metric { euclidean, log };

std::string to_string(InteractionKind kind);
std::string to_string(Metric metric);
InteractionKind parse_interaction(std::string_view text);
Metric parse_metric(std::string_view text);

/// sum_{N >= n_min} x^{N - n_min} N^{N-2} / max(N - shift, 0)!, shift in {1, 2},
/// truncated once the certified remainder drops below 1e-30 of the sum.
struct TreeSeries {
  double value = 0;
  double tail = 0;  ///< certified bound on the omitted terms
  int terms = 0;
  bool convergent = false;
};

TreeSeries tree_series(double x, int n_min, int shift);

/// sum_{j in Z^d, j != 0} f(j) over |j|_inf <= radius plus a certified tail.
struct LatticeSum {
  double value = 0;  ///< truncated sum
  double tail = 0;   ///< bound on the remainder
  int radius = 0;
  bool finite = true;
};

/// f(j) = e^{-rate dist(0, j)}.
LatticeSum exp_lattice_sum(double rate, Metric metric, int d, int radius = 0);
/// f(j) = (1 + |j|)^{-a}; infinite for a <= d.
LatticeSum poly_lattice_sum(double a, int d, int radius = 0);

/// sup over 0 <= r_k <= r_max of sum_y f(y) f(r - y) / f(r) for
/// f(v) = (1 + |v|)^{-a}, y summed over |y|_inf <= radius plus tail.
struct ConvolutionConstant {
  double value = 0;  ///< measured sup, including tails
  double tail = 0;   ///< largest tail used
  double analytic_bound = 0;  ///< 2^{a+1} (1 + sigma), valid for every r
  int radius = 0;
  int r_max = 0;
};

ConvolutionConstant convolution_constant(double a, int d, int radius = 200, int r_max = 20);

struct DecayBoundReport {
  InteractionKind kind = InteractionKind::nearest_neighbour;
  Metric metric = Metric::euclidean;
  double beta = 0;
  int m = 1;
  int d = 1;
  double a = 0;
  double dist = 0;

  double C = std::exp(1.0);  ///< Mayer weight per vertex
  double C_activity = 1;     ///< activity constant per vertex
  double C0 = 0;             ///< decay-rate constant: the A series ratio is C0 beta m
  double lattice_factor = 0;  ///< per-vertex lattice sum (2d, sigma or max(c_a, sigma))
  double convolution = 0;     ///< c_a, polynomial class only

  double A_value = 0;
  double B_value = 0;
  double bound = 0;          ///< A / (1 - B) with both tails added; +inf if not convergent
  double scaling = 0;        ///< (C0 beta m)^dist, nearest neighbour only
  double truncation_tail = 0;
  bool convergent = false;
};

DecayBoundReport nn_decay_bound(double beta, int m, int d, int dist, double C = std::exp(1.0),
                                double C_activity = 1);

/// Throws DomainError when the lattice sum of e^{-(a/2) dist} diverges.
DecayBoundReport exp_decay_bound(double beta, int m, double a, Metric metric, double dist, int d = 1,
                                 double C = std::exp(1.0), double C_activity = 1);

/// Throws DomainError for a <= d.
DecayBoundReport poly_decay_bound(double beta, int m, double a, int d, double dist, double C = std::exp(1.0),
                                  double C_activity = 1);

struct ActivityBoundReport {
  double C_probe = 0;
  /// max over polymers of (|K| / ((beta m)^{|Y|-1} T(Y)))^{1/|Y|}
  double C_emp_K = 0;
  /// same for the two-point activities, singletons included
  double C_emp_two_point = 0;
  double C_emp = 0;
  SiteMask worst = 0;
  int polymers_checked = 0;
  /// Polymers with vanishing tree sum but nonzero activity.
  std::vector<SiteMask> counterexamples;
  bool pass = false;
};

/// Exhaustive over Y with |Y| <= y_max. Needs beta m <= 1.
ActivityBoundReport activity_bound_check(const WeightedGraph& g, const ModelParams& p, int y_max,
                                         double C_probe = std::exp(1.0));

struct NormCheck {
  std::string name;
  int u = 0;
  int v = 0;
  Rational s = 0;
  Rational lhs;  ///< norm, or a certified upper bound on it
  Rational rhs;
  bool pass = false;
};

struct NormReport {
  Rational C;  ///< 2 (1 + sup_l sum_l' J_ll')
  std::vector<NormCheck> checks;
  bool pass = false;
};

/// Checks on every edge of g and every s in s_grid:
///   ||A|| = beta (1 + 2m) <= 3 m beta,
///   ||B0|| <= 3 m beta J e^{C m beta},   ||B1|| <= J e^{C m beta},
///   ||z_l z_l' nu_l nu_l'|| <= C^2 Z_l Z_l'.
/// B0 and B1 are truncated power series in z_l^2 z_l'^2 with a rational
/// remainder bound, e^{C m beta} is replaced by a rational lower bound.
NormReport verify_norm_estimates(const WeightedGraph& g, const Rational& beta, int m,
                                 const std::vector<Rational>& s_grid = {0, Rational(1, 2), 1});

}  // namespace hyperfermi
