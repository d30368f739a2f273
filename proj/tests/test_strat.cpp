#include <gtest/gtest.h>

#include <cmath>

#include "expsum/errors.hpp"
#include "expsum/strat.hpp"

using namespace expsum;

namespace {

VarietyChain equation_chain(std::size_t n, const std::vector<std::vector<std::string>>& strata) {
  VarietyChain c;
  c.ambient_n = n;
  for (const auto& eqs : strata) c.strata.push_back(Stratum::from_equations(AffineVariety::parse(n, eqs)));
  return c;
}

KLDatum linear_datum(const std::vector<std::string>& perp) {
  KLDatum d;
  d.chain = equation_chain(3, {perp, {"1"}, {"1"}});
  d.C = 1.0;
  d.d = 1;
  return d;
}

SumGrid line_grid(const FieldCtx& ctx) {
  SumSpec s(3);
  s.variety = AffineVariety::parse(3, {"x1", "x2"});
  return complete_grid(s, ctx);
}

}  // namespace

TEST(Strat, StratumIndexExamples) {
  auto f5 = FieldCtx::create(5);
  const auto c = equation_chain(2, {{"x1*x2"}, {"x1", "x2"}});
  EXPECT_EQ(stratum_index(c, {0, 0}, *f5), 2u);
  EXPECT_EQ(stratum_index(c, {0, 3}, *f5), 1u);
  EXPECT_EQ(stratum_index(c, {2, 0}, *f5), 1u);
  EXPECT_EQ(stratum_index(c, {1, 1}, *f5), 0u);
  EXPECT_NO_THROW(validate_chain(c, *f5));
}

TEST(Strat, StrataPartitionTheSpace) {
  auto f7 = FieldCtx::create(7);
  const auto c = equation_chain(2, {{"x1*x2"}, {"x1", "x2"}});
  const CompiledChain cc(c, *f7);
  std::vector<std::uint64_t> counts(3, 0);
  for (FieldCtx::Code a = 0; a < 7; ++a) {
    for (FieldCtx::Code b = 0; b < 7; ++b) {
      const FieldCtx::Code h[2] = {a, b};
      ++counts[cc.stratum_index(h)];
    }
  }
  EXPECT_EQ(counts[0], 36u);
  EXPECT_EQ(counts[1], 12u);
  EXPECT_EQ(counts[2], 1u);
}

TEST(Strat, NonNestedChainIsRejected) {
  auto f3 = FieldCtx::create(3);
  const auto c = equation_chain(2, {{"x1"}, {"x2"}});
  try {
    validate_chain(c, *f3);
    FAIL() << "expected ChainError";
  } catch (const ChainError& e) {
    EXPECT_NE(std::string(e.what()).find("X_2"), std::string::npos) << e.what();
  }
}

TEST(Strat, ValidateSkipsLargeCases) {
  auto f17 = FieldCtx::create(17);
  const auto c = equation_chain(2, {{"x1"}, {"x2"}});
  EXPECT_FALSE(validate_chain(c, *f17));
}

TEST(Strat, LinearSpaceBoundHolds) {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    auto ctx = FieldCtx::create(p);
    const auto rep = verify_kl(linear_datum({"x3"}), line_grid(*ctx));
    EXPECT_TRUE(rep.pass()) << p;
    EXPECT_FALSE(rep.excluded_prime);
    ASSERT_EQ(rep.records.size(), 4u);
    EXPECT_EQ(rep.records[0].max_abs, 0.0);
    EXPECT_NEAR(rep.records[1].max_abs, p, 1e-9);
    EXPECT_EQ(rep.records[1].count, p * p);
    EXPECT_NEAR(rep.measured_C(), 1.0, 1e-9);
  }
}

TEST(Strat, ShiftedChainIsCaught) {
  auto f7 = FieldCtx::create(7);
  const auto rep = verify_kl(linear_datum({"x1"}), line_grid(*f7));
  EXPECT_FALSE(rep.pass());
  EXPECT_GT(rep.violation_count, 0u);
  ASSERT_FALSE(rep.violations.empty());
  EXPECT_EQ(rep.violations.front().h[2], 0u);
  EXPECT_NE(rep.violations.front().h[0], 0u);
}

TEST(Strat, ExcludedPrimeIsFlagged) {
  auto f5 = FieldCtx::create(5);
  auto d = linear_datum({"x3"});
  d.N = 10;
  EXPECT_TRUE(verify_kl(d, line_grid(*f5)).excluded_prime);
}

TEST(Strat, ExplicitExponents) {
  KLDatum d = linear_datum({"x3"});
  EXPECT_EQ(d.exponent(0), 1);
  EXPECT_EQ(d.exponent(2), 3);
  d.exponents = std::vector<int>{0, 2, 2, 2};
  EXPECT_EQ(d.exponent(1), 2);
  auto f5 = FieldCtx::create(5);
  const auto rep = verify_kl(d, line_grid(*f5));
  EXPECT_TRUE(rep.pass());
  EXPECT_NEAR(rep.records[1].min_C, 1.0, 1e-12);
}

TEST(Strat, EmpiricalExponentMap) {
  auto f5 = FieldCtx::create(5);
  const auto m = empirical_exponent_map(line_grid(*f5));
  EXPECT_NEAR(m[0], 2.0, 1e-12);
  EXPECT_TRUE(std::isinf(m[1]) && m[1] < 0);
}

TEST(Strat, PointCountShadow) {
  auto f5 = FieldCtx::create(5);
  const auto c = equation_chain(2, {{"x1*x2"}, {"x1", "x2"}});
  const auto s = point_count_shadow(c, *f5, 2.0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].count, 9u);
  EXPECT_TRUE(s[0].ok);
  EXPECT_EQ(s[1].count, 1u);
  EXPECT_TRUE(s[1].ok);
}

TEST(Strat, ConicDualIsTheDualConic) {
  const auto F = IntPolynomial::parse("x1^2 + x2^2 - x3^2");
  for (std::uint32_t p : {5u, 7u}) {
    auto ctx = FieldCtx::create(p);
    const DualVarietyIndex index(F, *ctx, 2);
    EXPECT_TRUE(index.complete());
    EXPECT_FALSE(index.singular());
    for (std::uint32_t a = 0; a < p; ++a) {
      for (std::uint32_t b = 0; b < p; ++b) {
        for (std::uint32_t c = 0; c < p; ++c) {
          const bool on_dual = (a * a + b * b + p * p - c * c) % p == 0;
          const FieldCtx::Code v[3] = {a, b, c};
          EXPECT_EQ(index.contains(v), on_dual) << a << b << c;
          if (a + b + c == 0) continue;
          const auto direct = dual_variety_membership(F, {a, b, c}, *ctx, 2);
          EXPECT_EQ(direct, on_dual ? DualMembership::member : DualMembership::nonmember);
        }
      }
    }
  }
}

TEST(Strat, CubicDualIndexMatchesDirectSearch) {
  const auto F = IntPolynomial::parse("x1^3 + x2^3 + x3^3");
  auto f7 = FieldCtx::create(7);
  const DualVarietyIndex index(F, *f7, 2);
  EXPECT_TRUE(index.complete());
  std::size_t members = 0;
  for (std::uint32_t a = 0; a < 7; ++a) {
    for (std::uint32_t b = 0; b < 7; ++b) {
      for (std::uint32_t c = 0; c < 7; ++c) {
        if (a + b + c == 0) continue;
        const FieldCtx::Code v[3] = {a, b, c};
        const bool in = index.contains(v);
        members += in;
        EXPECT_EQ(dual_variety_membership(F, {a, b, c}, *f7, 2) == DualMembership::member, in) << a << b << c;
      }
    }
  }
  EXPECT_GT(members, 0u);
}

TEST(Strat, SingularPoints) {
  const auto F = IntPolynomial::parse("x1^3 + x2^3 + x3^3");
  EXPECT_TRUE(has_singular_point(F, 3, 1));
  EXPECT_FALSE(has_singular_point(F, 7, 2));
  EXPECT_TRUE(has_singular_point(IntPolynomial::parse("x1*x2*x3"), 5, 1));
  EXPECT_EQ(dual_search_bound(2, 3), 1u);
  EXPECT_EQ(dual_search_bound(3, 3), 2u);
  EXPECT_EQ(dual_search_bound(3, 4), 4u);
}
