#pragma once

// Discrepancy of polynomial values modulo p in a box, and the double sums
// over pairs of primes that come out of the polynomial sieve.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "expsum/strat.hpp"

namespace expsum {

/// Box {0, ..., w - 1}^n; condition alpha_i <= {P_i(x) / p} <= beta_i.
struct DiscrepancySpec {
  std::vector<IntPolynomial> polys;
  std::uint32_t p = 0;
  std::uint64_t w = 0;
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t n() const { return polys.empty() ? 0 : polys.front().nvars(); }
  void validate() const;
};

struct DiscrepancyResult {
  std::uint64_t count = 0;  // points of the box with all fractional parts in range
  double expected = 0;      // w^n prod (beta_i - alpha_i)
  double D = 0;             // |count - expected|
};

DiscrepancyResult discrepancy(const DiscrepancySpec& spec, const EngineOptions& opt = {});

struct ETTerm {
  std::vector<std::uint64_t> A;
  double abs_sum = 0;  // |sum over the box of psi(A_1 P_1 + ... + A_r P_r)|
};

struct ETReport {
  DiscrepancyResult discrepancy;
  std::uint64_t K = 0;
  std::vector<ETTerm> terms;  // all A in [1, K]^r
  /// w^n / K + sum over A of |S(A)| / prod A_i (implied constant 1).
  double rhs = 0;
  /// r = 1 only: w^n / (K + 1) + 3 sum_k |S(k)| / k.
  std::optional<double> explicit_bound;
  std::optional<bool> explicit_holds;
};

ETReport erdos_turan_rhs(const DiscrepancySpec& spec, std::uint64_t K, const EngineOptions& opt = {});

/// Exact sum of doubles: every finite double is an integer multiple of
/// 2^-1074, so the accumulator is that integer.
class ExactSum {
 public:
  void add(double x);
  ExactSum& operator+=(const ExactSum& o);
  double value() const;
  bool operator==(const ExactSum& o) const { return acc_ == o.acc_; }

 private:
  boost::multiprecision::cpp_int acc_ = 0;
};

struct SieveSpec {
  IntPolynomial F;  // variables (y, x1..xn), monic in y
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::int64_t u_bound = 0;  // u ranges over [-u_bound, u_bound]^n
  KLDatum datum;             // chain on A^n and constant C for S_F

  std::size_t n() const { return F.nvars() - 1; }
  void validate() const;
};

struct SieveBucket {
  std::uint64_t count = 0;
  ExactSum sum;
  double max_term = 0;
  double bound = 0;  // C^2 p^((n + j) / 2) q^((n + k) / 2), largest over pairs
  bool within = true;
};

struct SieveReport {
  ExactSum direct;     // in u order
  ExactSum regrouped;  // bucket by bucket
  std::uint64_t terms = 0;
  std::map<std::pair<std::size_t, std::size_t>, SieveBucket> buckets;  // (j, k)

  bool partition_exact() const { return direct == regrouped; }
};

SieveReport sieve_double_sum(const SieveSpec& spec, const EngineOptions& opt = {});

/// CSV "A1,...,Ar,abs".
void write_et_csv(const ETReport& rep, std::ostream& out);
/// CSV "j,k,count,sum,max_term,bound,within".
void write_sieve_csv(const SieveReport& rep, std::ostream& out);

}  // namespace expsum
