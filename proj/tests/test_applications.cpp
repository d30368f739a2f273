#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "expsum/applications.hpp"
#include "expsum/errors.hpp"

using namespace expsum;

namespace {

DiscrepancySpec one_poly(const std::string& P, std::uint32_t p, std::uint64_t w, double a, double b) {
  DiscrepancySpec s;
  s.polys = {IntPolynomial::parse(P)};
  s.p = p;
  s.w = w;
  s.alpha = {a};
  s.beta = {b};
  return s;
}

// |sum_x e(h.x / p) r_F(x)| for F = y^2 - x1 x2 - 1 by plain loops.
double brute_sf(long p, long h1, long h2) {
  std::complex<double> s = 0;
  for (long x1 = 0; x1 < p; ++x1) {
    for (long x2 = 0; x2 < p; ++x2) {
      long r = 0;
      for (long y = 0; y < p; ++y) r += ((y * y - x1 * x2 - 1) % p + p) % p == 0;
      s += static_cast<double>(r) * std::polar(1.0, 2 * std::numbers::pi * ((h1 * x1 + h2 * x2) % p) / p);
    }
  }
  return std::abs(s);
}

SieveSpec sieve_spec(std::int64_t U) {
  SieveSpec s;
  s.F = IntPolynomial::parse("y^2 - x1*x2 - 1", VarLayout{2, true});
  s.pairs = {{3, 5}};
  s.u_bound = U;
  s.datum.chain.ambient_n = 2;
  s.datum.chain.strata.push_back(Stratum::from_equations(AffineVariety::parse(2, {"x1*x2"})));
  s.datum.chain.strata.push_back(Stratum::from_equations(AffineVariety::origin(2)));
  s.datum.C = 2.0;
  return s;
}

}  // namespace

TEST(Discrepancy, Examples) {
  EXPECT_EQ(discrepancy(one_poly("x1", 7, 7, 0, 1)).D, 0.0);
  const auto r = discrepancy(one_poly("x1^2", 7, 7, 0, 0.5));
  long count = 0;
  for (long x = 0; x < 7; ++x) count += 2 * (x * x % 7) <= 7;
  EXPECT_EQ(r.count, static_cast<std::uint64_t>(count));
  EXPECT_DOUBLE_EQ(r.D, std::abs(count - 3.5));
  const auto hits = discrepancy(one_poly("x1^2", 7, 7, 2.0 / 7, 2.0 / 7));
  EXPECT_EQ(hits.count, 2u);  // x = 3, 4
  EXPECT_DOUBLE_EQ(hits.D, 2.0);
}

TEST(Discrepancy, PermutationInvariance) {
  DiscrepancySpec a;
  a.polys = {IntPolynomial::parse("x1^2 + x2"), IntPolynomial::parse("x1*x2^2")};
  a.p = 11;
  a.w = 6;
  a.alpha = {0.1, 0.3};
  a.beta = {0.7, 0.9};
  DiscrepancySpec b = a;
  std::swap(b.polys[0], b.polys[1]);
  std::swap(b.alpha[0], b.alpha[1]);
  std::swap(b.beta[0], b.beta[1]);
  EXPECT_EQ(discrepancy(a).count, discrepancy(b).count);
  EXPECT_DOUBLE_EQ(discrepancy(a).D, discrepancy(b).D);
}

TEST(Discrepancy, Validation) {
  EXPECT_THROW(discrepancy(one_poly("x1", 7, 8, 0, 1)), DomainError);
  EXPECT_THROW(discrepancy(one_poly("x1", 7, 3, 0.5, 0.2)), DomainError);
  EXPECT_THROW(discrepancy(one_poly("x1", 9, 3, 0, 1)), DomainError);
}

TEST(ErdosTuran, ExplicitFormHolds) {
  for (std::uint64_t K : {1u, 2u, 5u, 10u}) {
    const auto lin = erdos_turan_rhs(one_poly("x1", 11, 11, 0.2, 0.45), K);
    ASSERT_TRUE(lin.explicit_holds.has_value());
    EXPECT_TRUE(*lin.explicit_holds) << K;
    const auto sq = erdos_turan_rhs(one_poly("x1^2", 11, 11, 0, 0.3), K);
    EXPECT_TRUE(*sq.explicit_holds) << K;
    EXPECT_EQ(sq.terms.size(), K);
  }
}

TEST(ErdosTuran, TermsMatchDirectSums) {
  const auto rep = erdos_turan_rhs(one_poly("x1^2", 11, 7, 0, 0.5), 4);
  for (const auto& t : rep.terms) {
    std::complex<double> s = 0;
    for (long x = 0; x < 7; ++x) s += std::polar(1.0, 2 * std::numbers::pi * (t.A[0] * x * x % 11) / 11.0);
    EXPECT_NEAR(t.abs_sum, std::abs(s), 1e-12);
  }
}

TEST(ErdosTuran, FirstTermShrinks) {
  const auto a = erdos_turan_rhs(one_poly("x1", 11, 11, 0, 1), 2);
  const auto b = erdos_turan_rhs(one_poly("x1", 11, 11, 0, 1), 10);
  // Full box: all incomplete sums vanish, only w^n / K remains.
  EXPECT_NEAR(a.rhs, 11.0 / 2, 1e-9);
  EXPECT_NEAR(b.rhs, 11.0 / 10, 1e-9);
}

TEST(ErdosTuran, SeveralPolynomialsReportOnly) {
  DiscrepancySpec s;
  s.polys = {IntPolynomial::parse("x1^2"), IntPolynomial::parse("x1^3")};
  s.p = 7;
  s.w = 7;
  s.alpha = {0, 0};
  s.beta = {0.5, 0.5};
  const auto rep = erdos_turan_rhs(s, 3);
  EXPECT_EQ(rep.terms.size(), 9u);
  EXPECT_FALSE(rep.explicit_bound.has_value());
  EXPECT_GT(rep.rhs, 0.0);
}

TEST(ExactSum, OrderIndependent) {
  const std::vector<double> xs = {0.1, 1e300, -1e300, 3e-310, 2.5, -0.1, 1e-5, 7.0 / 3};
  ExactSum a, b;
  for (double x : xs) a.add(x);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) b.add(*it);
  EXPECT_TRUE(a == b);
  EXPECT_DOUBLE_EQ(a.value(), 2.5 + 1e-5 + 7.0 / 3 + 3e-310);
  ExactSum c;
  c.add(0.5);
  c.add(0.25);
  EXPECT_EQ(c.value(), 0.75);
}

TEST(Sieve, PartitionIdentity) {
  const auto rep = sieve_double_sum(sieve_spec(3));
  EXPECT_EQ(rep.terms, 49u);
  EXPECT_TRUE(rep.partition_exact());
  double direct = 0;
  for (long u1 = -3; u1 <= 3; ++u1) {
    for (long u2 = -3; u2 <= 3; ++u2) {
      // inverse of 5 mod 3 is 2, of 3 mod 5 is 2
      direct += brute_sf(3, ((2 * u1) % 3 + 3) % 3, ((2 * u2) % 3 + 3) % 3) *
                brute_sf(5, ((2 * u1) % 5 + 5) % 5, ((2 * u2) % 5 + 5) % 5);
    }
  }
  EXPECT_NEAR(rep.direct.value(), direct, 1e-9 * direct);
}

TEST(Sieve, BucketMaxima) {
  const auto rep = sieve_double_sum(sieve_spec(3));
  auto index = [](long p, long h1, long h2) { return h1 == 0 && h2 == 0 ? 2 : (h1 * h2 % p == 0 ? 1 : 0); };
  std::map<std::pair<std::size_t, std::size_t>, double> expect;
  for (long u1 = -3; u1 <= 3; ++u1) {
    for (long u2 = -3; u2 <= 3; ++u2) {
      const long a1 = ((2 * u1) % 3 + 3) % 3, a2 = ((2 * u2) % 3 + 3) % 3;
      const long b1 = ((2 * u1) % 5 + 5) % 5, b2 = ((2 * u2) % 5 + 5) % 5;
      auto& m = expect[{index(3, a1, a2), index(5, b1, b2)}];
      m = std::max(m, brute_sf(3, a1, a2) * brute_sf(5, b1, b2));
    }
  }
  ASSERT_EQ(rep.buckets.size(), expect.size());
  for (const auto& [key, b] : rep.buckets) EXPECT_NEAR(b.max_term, expect.at(key), 1e-9) << key.first << key.second;
  std::ostringstream csv;
  write_sieve_csv(rep, csv);
  EXPECT_EQ(csv.str().rfind("j,k,count,sum,max_term,bound,within\n", 0), 0u);
}

TEST(Sieve, DegenerateBox) {
  const auto rep = sieve_double_sum(sieve_spec(0));
  EXPECT_EQ(rep.terms, 1u);
  ASSERT_EQ(rep.buckets.size(), 1u);
  EXPECT_EQ(rep.buckets.begin()->first, (std::pair<std::size_t, std::size_t>{2, 2}));
  EXPECT_NEAR(rep.direct.value(), brute_sf(3, 0, 0) * brute_sf(5, 0, 0), 1e-9);
}

TEST(Sieve, Errors) {
  auto s = sieve_spec(1);
  s.pairs = {{5, 5}};
  EXPECT_THROW(sieve_double_sum(s), DomainError);
  s = sieve_spec(1);
  s.F = IntPolynomial::parse("2*y^2 - x1*x2 - 1", VarLayout{2, true});
  EXPECT_THROW(sieve_double_sum(s), DomainError);
  s.F = IntPolynomial::parse("y - x1*x2", VarLayout{2, true});
  EXPECT_THROW(sieve_double_sum(s), DomainError);
}
