#include "hyperfermi/grassmann.hpp"

#include <gtest/gtest.h>

#include <random>

#include "random_elements.hpp"

namespace hyperfermi {
namespace {

using testing::random_element;

GeneratorId psi(int site, int color = 1) { return {Species::field, site, color, false}; }
GeneratorId psibar(int site, int color = 1) { return {Species::field, site, color, true}; }

ExactElement gen(const Algebra& a, GeneratorId g) { return ExactElement::generator(a, g); }
ExactElement one(const Algebra& a) { return ExactElement::constant(a, 1); }

TEST(Algebra, GeneratorCounts) {
  EXPECT_EQ(make_algebra(1, 1, false, CoefficientMode::exact)->size(), 2);
  EXPECT_EQ(make_algebra(1, 0, false, CoefficientMode::exact)->size(), 0);
  EXPECT_EQ(make_algebra(4, 2, false, CoefficientMode::exact)->size(), 16);
  EXPECT_EQ(make_algebra(4, 2, true, CoefficientMode::exact)->size(), 32);
  EXPECT_THROW(make_algebra(33, 2, false, CoefficientMode::exact), CapacityError);
  EXPECT_NO_THROW(make_algebra(32, 2, false, CoefficientMode::exact));
}

TEST(Algebra, IndexRoundTrip) {
  auto a = make_algebra(3, 2, true, CoefficientMode::exact);
  for (int i = 0; i < a->size(); ++i) EXPECT_EQ(a->index(a->generator(i)), i);
  EXPECT_EQ(a->generator_name(0), "psibar[0,1]");
  EXPECT_EQ(a->generator_name(1), "psi[0,1]");
  EXPECT_EQ(a->generator_name(12), "rhobar[0,1]");
  EXPECT_THROW(a->index({Species::field, 0, 3, false}), UsageError);
}

TEST(ProductSign, MatchesTranspositionCount) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> bit(0, 127);
  for (int trial = 0; trial < 2000; ++trial) {
    Monomial a, b;
    for (int k = 0; k < 5; ++k) a = a | Monomial::bit(bit(rng));
    for (int k = 0; k < 5; ++k) b = b | Monomial::bit(bit(rng));
    b = b.without(a);
    int inversions = 0;
    a.for_each([&](int x) { b.for_each([&](int y) { inversions += y < x; }); });
    EXPECT_EQ(product_sign(a, b), inversions % 2 ? -1 : 1);
  }
}

TEST(Gmul, SignAndNilpotency) {
  auto a = make_algebra(1, 1, false, CoefficientMode::exact);
  const auto p = gen(a, psi(0));
  const auto pb = gen(a, psibar(0));
  const auto prod = p * pb;
  ASSERT_EQ(prod.size(), 1U);
  EXPECT_EQ(prod.terms()[0].coeff, -1);
  EXPECT_EQ(to_string(prod), "-1 psibar[0,1] psi[0,1]");
  EXPECT_TRUE((p * p).is_zero());
  const auto x = pb * p;
  EXPECT_EQ((one(a) + x) * (one(a) - x), one(a));
}

TEST(Gmul, MismatchedContextsRejected) {
  auto a = make_algebra(1, 1, false, CoefficientMode::exact);
  auto b = make_algebra(2, 1, false, CoefficientMode::exact);
  EXPECT_THROW(gen(a, psi(0)) * gen(b, psi(0)), UsageError);
  auto a2 = make_algebra(1, 1, false, CoefficientMode::exact);
  EXPECT_NO_THROW(gen(a, psi(0)) * gen(a2, psibar(0)));
  EXPECT_THROW(ExactElement(make_algebra(1, 1, false, CoefficientMode::float64)), UsageError);
}

TEST(Gmul, RingLaws) {
  auto a = make_algebra(4, 1, false, CoefficientMode::exact);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = random_element(a, rng, 6, 4);
    auto g = random_element(a, rng, 6, 4);
    auto h = random_element(a, rng, 6, 4);
    EXPECT_EQ((f * g) * h, f * (g * h));
    EXPECT_EQ(f * (g + h), f * g + f * h);
    EXPECT_LE(l1_norm(f * g), l1_norm(f) * l1_norm(g));
    auto e = random_element(a, rng, 6, 4, 0);
    EXPECT_EQ(e * f, f * e);
  }
  for (int i = 0; i < a->size(); ++i) {
    for (int j = 0; j < a->size(); ++j) {
      if (i == j) continue;
      auto x = gen(a, a->generator(i));
      auto y = gen(a, a->generator(j));
      EXPECT_EQ(x * y, -(y * x));
    }
  }
}

TEST(Gmul, FloatModeAgreesWithExact) {
  auto ea = make_algebra(3, 1, false, CoefficientMode::exact);
  auto fa = make_algebra(3, 1, false, CoefficientMode::float64);
  std::mt19937_64 rng(5);
  auto convert = [&](const ExactElement& e) {
    std::vector<Term<double>> t;
    for (const auto& term : e.terms()) t.push_back({term.monomial, term.coeff.get_d()});
    return FloatElement::from_terms(fa, t);
  };
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_element(ea, rng, 5, 3);
    auto g = random_element(ea, rng, 5, 3);
    auto exact = convert(f * g);
    auto approx = convert(f) * convert(g);
    ASSERT_EQ(exact.size(), approx.size());
    for (std::size_t k = 0; k < exact.size(); ++k) {
      EXPECT_NEAR(exact.terms()[k].coeff, approx.terms()[k].coeff, 1e-12);
    }
  }
}

TEST(SymmetricProduct, DiagonalAndNorms) {
  for (int m = 1; m <= 4; ++m) {
    auto a = make_algebra(2, m, false, CoefficientMode::exact);
    auto d = symmetric_product<Rational>(a, 0, 0);
    EXPECT_TRUE(d.is_even());
    EXPECT_EQ(l1_norm(symmetric_product<Rational>(a, 0, 1)), 2 * m);
    auto p = one(a);
    for (int k = 0; k <= m; ++k) p = p * d;
    EXPECT_TRUE(p.is_zero());
  }
  auto a = make_algebra(1, 1, false, CoefficientMode::exact);
  EXPECT_EQ(symmetric_product<Rational>(a, 0, 0), (gen(a, psibar(0)) * gen(a, psi(0))) * Rational(2));
}

TEST(Series, SquareRootAndInverse) {
  for (int m = 1; m <= 6; ++m) {
    auto a = make_algebra(1, m, false, CoefficientMode::exact);
    auto x = symmetric_product<Rational>(a, 0, 0);
    auto half = binomial_series(Rational(1, 2), m);
    auto mhalf = binomial_series(Rational(-1, 2), m);
    auto z = series_apply<Rational>(half, x);
    auto iz = series_apply<Rational>(mhalf, x);
    EXPECT_EQ(z * z, one(a) + x) << "m=" << m;
    EXPECT_EQ(z * iz, one(a)) << "m=" << m;
    EXPECT_EQ(l1_norm(z * z), 1 + 2 * m);
  }
  auto a = make_algebra(1, 1, false, CoefficientMode::exact);
  auto z = series_apply<Rational>(binomial_series(Rational(1, 2), 1), symmetric_product<Rational>(a, 0, 0));
  EXPECT_EQ(z, one(a) + gen(a, psibar(0)) * gen(a, psi(0)));
}

TEST(Series, RejectsBadInput) {
  auto a = make_algebra(1, 1, false, CoefficientMode::exact);
  std::vector<Rational> c{1, 1};
  EXPECT_THROW(series_apply<Rational>(c, gen(a, psi(0))), DomainError);
  EXPECT_THROW(series_apply<Rational>(c, one(a)), DomainError);
  EXPECT_THROW(exp_even(gen(a, psi(0))), DomainError);
  EXPECT_THROW(exp_even(one(a)), DomainError);
}

TEST(Exp, BasicsAndGroupLaw) {
  auto a = make_algebra(3, 1, false, CoefficientMode::exact);
  EXPECT_EQ(exp_even(ExactElement(a)), one(a));
  auto x = gen(a, psibar(0)) * gen(a, psi(0));
  EXPECT_EQ(exp_even(x), one(a) + x);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto e = random_element(a, rng, 6, 4, 0);
    e -= ExactElement::constant(a, e.scalar_part());
    EXPECT_EQ(exp_even(e) * exp_even(-e), one(a));
    EXPECT_EQ(log_unit(exp_even(e)), e);
  }
}

TEST(Exp, FloatScalarPart) {
  auto a = make_algebra(1, 1, false, CoefficientMode::float64);
  auto x = FloatElement::constant(a, 0.5) +
           FloatElement::generator(a, psibar(0)) * FloatElement::generator(a, psi(0));
  auto e = exp_even(x);
  EXPECT_NEAR(e.scalar_part(), std::exp(0.5), 1e-15);
  EXPECT_NEAR(e.terms().back().coeff, std::exp(0.5), 1e-15);
}

TEST(Berezin, SignConventionAnchors) {
  auto a = make_algebra(1, 1, false, CoefficientMode::exact);
  const int site[] = {0};
  auto x = gen(a, psibar(0)) * gen(a, psi(0));
  EXPECT_EQ(berezin(x, site).scalar_part(), -1);
  EXPECT_EQ(berezin(one(a) - x, site), one(a));
  EXPECT_TRUE(berezin(one(a), site).is_zero());
}

// Independent oracle: literal left derivatives on an explicit ordered word.
Rational berezin_oracle(const ExactElement& f, int site, int m) {
  const auto& alg = *f.algebra();
  Rational total = 0;
  for (const auto& t : f.terms()) {
    std::vector<int> word;
    t.monomial.for_each([&](int g) { word.push_back(g); });
    int sign = 1;
    bool alive = true;
    for (int alpha = m; alpha >= 1 && alive; --alpha) {
      for (bool bar : {false, true}) {
        const int g = alg.index({Species::field, site, alpha, bar});
        auto it = std::find(word.begin(), word.end(), g);
        if (it == word.end()) {
          alive = false;
          break;
        }
        if ((it - word.begin()) % 2) sign = -sign;
        word.erase(it);
      }
    }
    if (alive && word.empty()) total += sign * t.coeff;
  }
  return total;
}

TEST(Berezin, MatchesLiteralDerivatives) {
  std::mt19937_64 rng(23);
  for (int m = 1; m <= 3; ++m) {
    auto a = make_algebra(1, m, false, CoefficientMode::exact);
    for (int trial = 0; trial < 20; ++trial) {
      auto f = random_element(a, rng, 10, 2 * m);
      const int site[] = {0};
      EXPECT_EQ(berezin(f, site).scalar_part(), berezin_oracle(f, 0, m));
    }
  }
}

TEST(Berezin, OrderIndependentAndNormBounded) {
  auto a = make_algebra(3, 1, false, CoefficientMode::exact);
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = random_element(a, rng, 30, 6, 0);
    const int fwd[] = {0, 1, 2};
    const int rev[] = {2, 0, 1};
    auto v = berezin(f, fwd);
    EXPECT_EQ(v, berezin(f, rev));
    EXPECT_LE(abs(v.scalar_part()), l1_norm(f));
    const int s0[] = {0};
    const int s12[] = {1, 2};
    EXPECT_EQ(berezin(berezin(f, s0), s12), v);
  }
}

TEST(Norm, Basics) {
  auto a = make_algebra(1, 1, false, CoefficientMode::exact);
  EXPECT_EQ(l1_norm(one(a)), 1);
  EXPECT_EQ(l1_norm(ExactElement(a)), 0);
}

TEST(CoefficientOf, OrderedProducts) {
  auto a = make_algebra(2, 1, true, CoefficientMode::exact);
  const GeneratorId ids[] = {{Species::source, 0, 1, false}, psi(1)};
  auto e = ExactElement::product_of(a, ids, Rational(3));
  EXPECT_EQ(e.coefficient_of(ids), 3);
  const GeneratorId swapped[] = {psi(1), {Species::source, 0, 1, false}};
  EXPECT_EQ(e.coefficient_of(swapped), -3);
}

}  // namespace
}  // namespace hyperfermi
