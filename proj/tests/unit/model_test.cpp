#include "hyperfermi/model.hpp"

#include <gtest/gtest.h>

#include <random>

#include "hyperfermi/forests.hpp"
#include "hyperfermi/singlesite.hpp"

namespace hyperfermi {
namespace {

Rational q(long p, long d) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

TEST(Model, WHasZeroScalarPartAndIsEven) {
  for (int m = 1; m <= 3; ++m) {
    Model<Rational> model(complete_graph(3), q(1, 7), m);
    for (int e = 0; e < 3; ++e) {
      auto w = model.edge_W(e);
      EXPECT_EQ(w.scalar_part(), 0);
      EXPECT_TRUE(w.is_even());
    }
    EXPECT_TRUE(model.build_W(0b001).is_zero());
  }
}

TEST(Model, NuMatchesSingleSite) {
  for (int m = 1; m <= 5; ++m) {
    auto g = path_graph(1);
    g.set_eps(0, q(1, 2));
    Model<Rational> model(g, q(1, 10), m);
    const int site[] = {0};
    EXPECT_EQ(berezin(model.nu(0), site).scalar_part(), single_site_Z({m, q(1, 2)}));
    EXPECT_EQ(model.partition_function(), single_site_Z({m, q(1, 2)}));
  }
  Model<Rational> m1(path_graph(1), 1, 1);
  auto a = m1.algebra();
  const GeneratorId ids[2] = {{Species::field, 0, 1, true}, {Species::field, 0, 1, false}};
  EXPECT_EQ(m1.nu(0), ExactElement::constant(a, 1) - ExactElement::product_of(a, ids, 1));
}

TEST(Model, SweepMatchesFullProductIntegral) {
  auto g = complete_graph(3);
  g.set_uniform_eps(q(1, 3));
  Model<Rational> model(g, q(1, 4), 2);
  ExactElement full = model.gibbs(g.all());
  for (int j = 0; j < 3; ++j) full = full * model.nu(j);
  const int sites[] = {0, 1, 2};
  EXPECT_EQ(berezin(full, sites).scalar_part(), model.partition_function());
  EXPECT_EQ(model.gibbs(g.all()), exp_even(-model.build_W(g.all())));
}

TEST(Model, BetaZeroFactorises) {
  auto g = path_graph(3);
  g.set_eps(1, q(1, 3));
  Model<Rational> model(g, 0, 2);
  EXPECT_EQ(model.partition_function(), model.product_single_site_Z(g.all()));
  EXPECT_EQ(model.two_point(0, 2, 1), 0);
}

TEST(Model, DualityWithArborealGas) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(1, 9);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = trial % 2 ? complete_graph(4) : path_graph(4);
    for (int v = 0; v < 4; ++v) g.set_eps(v, q(num(rng) - 1, 8));
    const Rational beta = q(num(rng), 20);
    Model<Rational> model(g, beta, 1);
    EXPECT_EQ(model.partition_function(), arboreal_Z(g.scaled(beta)));
    EXPECT_EQ(model.partition_function(), h02_partition(g.scaled(beta)));
  }
}

TEST(Model, TwoPointColorIndependentAndSymmetric) {
  auto g = path_graph(3);
  g.set_uniform_eps(q(1, 2));
  Model<Rational> model(g, q(1, 5), 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(model.two_point(i, j, 1), model.two_point(i, j, 2));
      // reflection i -> 2 - i is an automorphism of the path
      EXPECT_EQ(model.two_point(i, j, 1), model.two_point(2 - i, 2 - j, 1));
    }
  }
}

TEST(Model, TwoPointSingleSiteOracle) {
  Model<Rational> model(path_graph(1), 1, 1);
  // <psibar psi> = int (1 - psibar psi) psibar psi / 1 = -1
  EXPECT_EQ(model.two_point(0, 0, 1), -1);
}

TEST(Model, GeneratingFunction) {
  for (int n : {2, 3}) {
    auto g = path_graph(n);
    g.set_uniform_eps(q(1, 3));
    Model<Rational> plain(g, q(1, 10), 1);
    Model<Rational> src(g, q(1, 10), 1, true);
    auto zr = src.generating_function(2);
    EXPECT_EQ(zr.scalar_part(), plain.partition_function());
    for (const auto& t : zr.terms()) EXPECT_NE(t.monomial.degree(), 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) EXPECT_EQ(src.two_point_from_sources(i, j, 1), plain.two_point(i, j, 1));
    }
  }
}

TEST(Model, FloatModeAgrees) {
  auto g = complete_graph(3);
  g.set_uniform_eps(q(1, 2));
  Model<Rational> exact(g, q(1, 10), 2);
  Model<double> approx(g, q(1, 10), 2);
  EXPECT_NEAR(approx.partition_function(), exact.partition_function().get_d(), 1e-12);
  EXPECT_NEAR(approx.two_point(0, 1, 1), exact.two_point(0, 1, 1).get_d(), 1e-12);
}

TEST(Model, CapacityChecked) {
  EXPECT_THROW(Model<Rational>(path_graph(33), 1, 2), CapacityError);
  EXPECT_THROW(Model<Rational>(path_graph(17), 1, 2, true), CapacityError);
}

TEST(DMatrix, ZeroFieldIsShiftedLaplacian) {
  auto g = path_graph(4, 2);
  g.set_uniform_eps(q(1, 10));
  auto check = check_D_matrix(g, 0.5, std::vector<double>(4, 0.0));
  for (int i = 0; i < 4; ++i) {
    double row = 0;
    for (int j = 0; j < 4; ++j) row += check.D[i][j];
    EXPECT_NEAR(row, 0.1, 1e-14);
  }
  EXPECT_DOUBLE_EQ(check.D[0][0], 1.0 + 0.1);
  EXPECT_DOUBLE_EQ(check.D[1][1], 2.0 + 0.1);
  EXPECT_DOUBLE_EQ(check.D[0][1], -1.0);
  EXPECT_TRUE(check.symmetric);
  EXPECT_GT(check.min_eigenvalue, 0);
}

TEST(DMatrix, RandomFieldsPositive) {
  auto g = path_graph(4);
  g.set_uniform_eps(q(1, 10));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> t(4);
    for (auto& x : t) x = u(rng);
    auto c = check_D_matrix(g, 1.0, t);
    EXPECT_GT(c.min_eigenvalue, 1e-10);
    EXPECT_GT(c.min_congruent_eigenvalue, 1e-10);
  }
}

TEST(Model, NonCanonicalInputs) {
  const Rational raw(7, 28), eps_raw(6, 4);
  WeightedGraph g = path_graph(3);
  g.set_uniform_eps(eps_raw);
  WeightedGraph h = path_graph(3);
  h.set_uniform_eps(Rational(3, 2));
  EXPECT_EQ(Model<Rational>(g, raw, 1).partition_function(), Model<Rational>(h, Rational(1, 4), 1).partition_function());
  EXPECT_EQ(single_site_Z({2, eps_raw}), single_site_Z({2, Rational(3, 2)}));
  EXPECT_EQ(single_site_Z_engine({2, eps_raw}), single_site_Z({2, Rational(3, 2)}));
}

}  // namespace
}  // namespace hyperfermi
