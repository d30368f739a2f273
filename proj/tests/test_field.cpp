#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "expsum/errors.hpp"
#include "expsum/field.hpp"

using namespace expsum;

namespace {

// Reference arithmetic in F_9 = F_3[t]/(t^2 + 1) written out by hand.
std::uint32_t f9_mul(std::uint32_t a, std::uint32_t b) {
  const int a0 = a % 3, a1 = a / 3, b0 = b % 3, b1 = b / 3;
  const int c0 = ((a0 * b0 - a1 * b1) % 3 + 3) % 3;
  const int c1 = (a0 * b1 + a1 * b0) % 3;
  return static_cast<std::uint32_t>(c0 + 3 * c1);
}

}  // namespace

TEST(Field, PrimalityAndFactors) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(101));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(91));
  EXPECT_EQ(prime_factors(360), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(mod_inverse(3, 7), 5u);
  EXPECT_THROW(mod_inverse(4, 8), DomainError);
}

TEST(Field, RejectsBadInput) {
  EXPECT_THROW(FieldCtx::create(9), DomainError);
  EXPECT_THROW(FieldCtx::create(2, 0), DomainError);
  EXPECT_THROW(FieldCtx::create(2, 30), CapExceeded);
  EXPECT_THROW(FieldCtx::create_with_modulus(3, {2, 0, 1}), DomainError);  // t^2 + 2 = (t-1)(t+1)
}

TEST(Field, DefaultModulusOfF9) {
  auto f = FieldCtx::create(3, 2);
  EXPECT_EQ(f->modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
  EXPECT_EQ(f->size(), 9u);
  for (std::uint32_t a = 0; a < 9; ++a) {
    for (std::uint32_t b = 0; b < 9; ++b) EXPECT_EQ(f->mul(a, b), f9_mul(a, b));
  }
}

TEST(Field, IrreducibleCounts) {
  // Number of monic irreducibles of degree m over F_p by Moebius inversion.
  EXPECT_EQ(irreducible_moduli(2, 4, 100).size(), 3u);
  EXPECT_EQ(irreducible_moduli(3, 3, 100).size(), 8u);
  EXPECT_EQ(irreducible_moduli(5, 2, 100).size(), 10u);
}

TEST(Field, TableAndSlowPathsAgree) {
  FieldOptions no_tables;
  no_tables.table_cap = 1;
  for (auto [p, m] : {std::pair{2u, 5u}, {3u, 3u}, {5u, 2u}, {7u, 1u}}) {
    auto fast = FieldCtx::create(p, m);
    auto slow = FieldCtx::create(p, m, no_tables);
    ASSERT_TRUE(fast->has_tables());
    ASSERT_FALSE(slow->has_tables());
    for (std::uint32_t a = 0; a < fast->size(); ++a) {
      EXPECT_EQ(fast->trace(a), fast->trace_by_frobenius(a));
      EXPECT_EQ(fast->trace(a), slow->trace(a));
      EXPECT_EQ(fast->norm(a), slow->norm(a));
      if (a != 0) {
        EXPECT_EQ(fast->dlog(a), slow->dlog(a));
        EXPECT_EQ(fast->mul(a, fast->inv(a)), 1u);
        EXPECT_EQ(slow->mul(a, slow->inv(a)), 1u);
      }
      for (std::uint32_t b = 0; b < fast->size(); b += 3) {
        EXPECT_EQ(fast->mul(a, b), slow->mul(a, b));
        EXPECT_EQ(fast->add(a, b), slow->add(a, b));
      }
    }
  }
}

TEST(Field, TraceIsLinearAndSurjective) {
  auto f = FieldCtx::create(5, 3);
  std::vector<int> hits(5, 0);
  for (std::uint32_t a = 0; a < f->size(); ++a) {
    hits[f->trace(a)]++;
    const std::uint32_t b = (a * 37 + 11) % f->size();
    EXPECT_EQ(f->trace(f->add(a, b)), (f->trace(a) + f->trace(b)) % 5);
  }
  for (int h : hits) EXPECT_EQ(h, 25);
}

TEST(Field, GeneratorIsPrimitive) {
  auto f = FieldCtx::create(2, 6);
  std::vector<bool> seen(f->size(), false);
  FieldCtx::Code x = 1;
  for (std::uint64_t k = 0; k + 1 < f->size(); ++k) {
    EXPECT_FALSE(seen[x]);
    seen[x] = true;
    x = f->mul(x, f->generator());
  }
  EXPECT_EQ(x, 1u);
  EXPECT_EQ(FieldCtx::create(7)->base_generator(), 3u);
  EXPECT_EQ(FieldCtx::create(41)->base_generator(), 6u);
}

TEST(Field, CharactersAtZeroAndOrders) {
  auto f = FieldCtx::create(13);
  const auto z = f->mult_char(0, 4);
  EXPECT_FALSE(z.index.has_value());
  EXPECT_EQ(z.value, std::complex<double>(0.0, 0.0));
  EXPECT_THROW(f->mult_char(1, 5), DomainError);
  // Quadratic character matches the Legendre symbol.
  for (std::uint32_t a = 1; a < 13; ++a) {
    const double leg = mod_pow(a, 6, 13) == 1 ? 1.0 : -1.0;
    EXPECT_NEAR(f->mult_char(a, 2).value.real(), leg, 1e-12);
  }
}

TEST(Field, LiftedCharacterFactorsThroughNorm) {
  auto f = FieldCtx::create(5, 2);
  auto base = FieldCtx::create(5);
  for (std::uint32_t a = 1; a < f->size(); ++a) {
    const auto lifted = f->lifted_mult_char(a, 4);
    const auto direct = base->mult_char(f->norm(a), 4);
    EXPECT_NEAR(std::abs(lifted.value - direct.value), 0.0, 1e-12);
  }
}

TEST(Field, QuadraticGaussSumSign) {
  // tau^2 = chi(-1) p and, with psi(x) = e(x/p), tau = sqrt(p) or i sqrt(p).
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 101u}) {
    auto f = FieldCtx::create(p);
    const auto tau = gauss_sum(*f, 2);
    const double s = std::sqrt(static_cast<double>(p));
    if (p % 4 == 1) {
      EXPECT_NEAR(std::abs(tau - std::complex<double>(s, 0)), 0.0, 1e-9);
    } else {
      EXPECT_NEAR(std::abs(tau - std::complex<double>(0, s)), 0.0, 1e-9);
    }
  }
}

TEST(Field, GaussSumOverExtension) {
  auto f = FieldCtx::create(3, 2);
  for (std::uint64_t k = 1; k < 8; ++k) {
    EXPECT_NEAR(std::abs(gauss_sum(*f, 8, k)), 3.0, 1e-12);
  }
  EXPECT_THROW(gauss_sum(*f, 8, 8), DomainError);
}

TEST(Field, FieldElemOperators) {
  auto f = FieldCtx::create(7, 2);
  const FieldElem a(*f, 10), b(*f, 33);
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a + (-a), FieldElem(*f, 0));
  EXPECT_EQ(a.pow(48), FieldElem(*f, 1));
  EXPECT_EQ(FieldElem::from_coeffs(*f, a.coeffs()), a);
  EXPECT_EQ(trace_to_base(a), f->trace(10));
}
