#pragma once

// Exponential sums over V(F_q): single evaluations by enumeration and complete
// grids over the linear form h by a multidimensional DFT.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "expsum/cyclo.hpp"
#include "expsum/field.hpp"
#include "expsum/polynomial.hpp"

namespace expsum {

/// chi(g(x)) where chi(y) = e(index * base_dlog(N(y)) / order) and order | p - 1.
struct MultTwist {
  IntPolynomial g;
  std::uint64_t order = 2;
  std::uint64_t index = 1;
};

/// Weight r_F(x) = #{y : F(y, x) = 0}; F has variables (y, x1..xn).
struct RootCount {
  IntPolynomial F;
};
/// Weight psi(x + a/x) on x != 0 (one variable).
struct KloostermanSummand {
  std::int64_t a = 1;
};
/// Weight Kl(x) = sum_{y != 0} psi(y + a x / y) on x != 0 (one variable).
struct KloostermanFunction {
  std::int64_t a = 1;
};
using TraceWeight = std::variant<std::monostate, RootCount, KloostermanSummand, KloostermanFunction>;

/// Overall factor sign * q^(-tate_weight / 2) applied to the sum.
struct Normalization {
  int sign = 1;
  int tate_weight = 0;
};

/// sum over x in V(F_q) of w(x) chi(g(x)) psi(f(x) + h.x).
struct SumSpec {
  std::size_t n = 0;
  std::optional<AffineVariety> variety;  // empty means all of A^n
  IntPolynomial f;                       // additive phase; zero polynomial allowed
  std::optional<MultTwist> twist;
  std::optional<std::vector<std::int64_t>> h;
  TraceWeight weight;
  Normalization normalization;

  explicit SumSpec(std::size_t n_ = 0) : n(n_), f(n_) {}
  /// Values are exact elements of Z[zeta_p] (no twist, no Tate factor).
  bool exact() const { return !twist && normalization.tate_weight == 0; }
  void validate() const;
};

struct EngineOptions {
  std::uint64_t enum_cap = std::uint64_t{1} << 26;   // points enumerated per sum
  std::uint64_t grid_cap = std::uint64_t{1} << 26;   // entries of a complete grid
  std::uint64_t exact_cap = std::uint64_t{1} << 24;  // p * p^n count cells for exact grids
  unsigned workers = 1;
};

struct EvalResult {
  std::optional<CycloValue> exact;
  std::complex<double> value;
  std::uint64_t points = 0;       // points of V(F_q) enumerated
  std::uint64_t twist_zeros = 0;  // points where the twist polynomial vanished (chi(0) = 0 used)
};

/// All points of V(F_q) as rows of codes.
struct PointSet {
  std::size_t n = 0;
  std::vector<FieldCtx::Code> coords;
  std::uint64_t count() const { return n == 0 ? 0 : coords.size() / n; }
  const FieldCtx::Code* point(std::uint64_t i) const { return coords.data() + i * n; }
};

/// q^n, throwing CapExceeded above cap.
std::uint64_t checked_grid_size(std::uint64_t q, std::size_t n, std::uint64_t cap);

/// Calls fn(point) for every point of V(F_q) (V empty means A^n).
void for_each_point(const std::optional<AffineVariety>& v, std::size_t n, const FieldCtx& ctx,
                    const std::function<void(const FieldCtx::Code*)>& fn, const EngineOptions& opt = {});
PointSet enumerate_points(const AffineVariety& v, const FieldCtx& ctx, const EngineOptions& opt = {});
std::uint64_t count_points(const AffineVariety& v, const FieldCtx& ctx, const EngineOptions& opt = {});

EvalResult eval_sum(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt = {});

/// sum over x in V(F_q) of |summand(x)|^2 including the normalization factor.
double sum_of_squares(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt = {});

/// Complete family over h in F_p^n, row-major with h1 most significant.
class SumGrid {
 public:
  SumGrid() = default;
  SumGrid(std::uint32_t p, std::size_t n, bool exact);

  std::uint32_t p() const { return p_; }
  std::size_t n() const { return n_; }
  bool exact() const { return exact_; }
  std::uint64_t size() const { return size_; }

  std::complex<double> value(std::uint64_t idx) const { return values_[idx]; }
  double abs(std::uint64_t idx) const { return std::abs(values_[idx]); }
  /// Exact value; only for exact grids.
  CycloValue cyclo(std::uint64_t idx) const;
  std::uint64_t index_of(const std::vector<std::uint32_t>& h) const;
  std::vector<std::uint32_t> point_of(std::uint64_t idx) const;
  void point_of(std::uint64_t idx, std::uint32_t* out) const;

  std::vector<std::complex<double>>& values() { return values_; }
  const std::vector<std::complex<double>>& values() const { return values_; }
  std::vector<std::int64_t>& counts() { return counts_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

 private:
  std::uint32_t p_ = 0;
  std::size_t n_ = 0;
  bool exact_ = false;
  std::uint64_t size_ = 0;
  std::vector<std::complex<double>> values_;
  std::vector<std::int64_t> counts_;  // p counts per entry when exact
};

struct GridOptions {
  /// +1 computes sum_x t(x) psi(h.x); -1 uses psi(-h.x).
  int dual_sign = 1;
  /// Keep exact counts when the SumSpec allows it and the memory cap permits.
  bool prefer_exact = true;
};

/// Grid of eval_sum over all h (spec.h is ignored). Requires m = 1.
SumGrid complete_grid(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt = {},
                      const GridOptions& gopt = {});
/// The same grid by evaluating every h separately (oracle path).
SumGrid enumeration_grid(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt = {});

std::uint32_t r_F(const IntPolynomial& F, const std::vector<FieldCtx::Code>& x, const FieldCtx& ctx);
/// sum_x psi(h.x) r_F(x) for all h; F has variables (y, x1..xn).
SumGrid S_F_grid(const IntPolynomial& F, const FieldCtx& ctx, const EngineOptions& opt = {});
EvalResult S_F(const IntPolynomial& F, const std::vector<std::int64_t>& h, const FieldCtx& ctx,
               const EngineOptions& opt = {});

struct PowerSumCheck {
  std::complex<double> lhs;  // sum_x e(x^d / p) by enumeration
  std::complex<double> rhs;  // sum of the d - 1 Gauss sums
  double bound;              // (d - 1) sqrt(p)
  bool bound_ok;
};
PowerSumCheck power_sum_identity_check(unsigned d, std::uint32_t p);

/// For homogeneous F and v != 0: (p - 1) T(F, v) against
/// p #{F = v.x = 0} - #{F = 0}, with T(F, v) = sum_{F(x) = 0} psi(v.x).
struct ConeIdentity {
  CycloValue lhs;
  CycloValue rhs;
  std::uint64_t zeros = 0;          // #{F = 0}
  std::uint64_t section_zeros = 0;  // #{F = v.x = 0}
  bool holds() const { return lhs == rhs; }
};
ConeIdentity cone_identity(const IntPolynomial& F, const std::vector<std::uint32_t>& v, const FieldCtx& ctx);

}  // namespace expsum
