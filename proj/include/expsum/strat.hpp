#pragma once

// Variety chains A^n > X_1 > ... and verification of the bound
// |S(h)| <= C p^(e_i / 2) on X_i \ X_(i+1) against complete grids.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "expsum/polynomial.hpp"
#include "expsum/sum_engine.hpp"

namespace expsum {

using PointPredicate = std::function<bool(const FieldCtx::Code*)>;
/// Builds a membership test for one field. Lets strata such as dual
/// varieties precompute per-prime data.
using PredicateFactory = std::function<PointPredicate(const FieldCtx&)>;

struct Stratum {
  std::string label;
  std::optional<AffineVariety> equations;  // used when set
  PredicateFactory predicate;              // used otherwise
  std::string predicate_json;              // serialized form of the predicate (chain files)

  static Stratum from_equations(AffineVariety v, std::string label = {});
  static Stratum from_predicate(PredicateFactory f, std::string predicate_json, std::string label = {});
};

struct VarietyChain {
  std::size_t ambient_n = 0;
  std::vector<Stratum> strata;  // X_1, X_2, ...; deeper strata are empty
  std::optional<std::vector<int>> claimed_codims;

  std::size_t depth() const { return strata.size(); }
};

/// Per-field membership tests for every stratum.
class CompiledChain {
 public:
  CompiledChain(const VarietyChain& chain, const FieldCtx& ctx);
  bool contains(std::size_t i, const FieldCtx::Code* h) const;  // i >= 1
  /// Largest i with h in X_i (0 if none); scans from the deepest stratum.
  std::size_t stratum_index(const FieldCtx::Code* h) const;
  std::size_t depth() const { return tests_.size(); }
  std::size_t ambient_n() const { return n_; }

 private:
  std::size_t n_;
  std::vector<PointPredicate> tests_;
};

std::size_t stratum_index(const VarietyChain& chain, const std::vector<std::uint32_t>& h, const FieldCtx& ctx);

struct ChainCheckOptions {
  std::uint32_t max_prime = 13;                        // containment checked exhaustively up to here
  std::uint64_t max_points = std::uint64_t{1} << 20;  // and only when p^n is at most this
  unsigned workers = 1;
};

/// Throws ChainError with a witness if some X_(i+1) point is not in X_i.
/// Returns false when the check was skipped because of the limits.
bool validate_chain(const VarietyChain& chain, const FieldCtx& ctx, const ChainCheckOptions& opt = {});

struct ShadowRecord {
  std::size_t j;
  std::uint64_t count;  // #X_j(F_p)
  double bound;         // kappa p^(n - j)
  bool ok;
};
/// Point-count proxy for "X_j has relative dimension at most n - j".
std::vector<ShadowRecord> point_count_shadow(const VarietyChain& chain, const FieldCtx& ctx, double kappa,
                                             unsigned workers = 1);

struct KLDatum {
  VarietyChain chain;
  std::uint64_t N = 1;
  double C = 1.0;
  int d = 0;
  /// Doubled bound exponents e_0..e_depth; the bound on stratum i is
  /// C p^(e_i / 2). Defaults to d + i.
  std::optional<std::vector<int>> exponents;
  double slack = 1e-6;

  int exponent(std::size_t i) const;
};

struct StratRecord {
  std::size_t index = 0;
  std::uint64_t count = 0;  // #(X_i \ X_(i+1))(F_p)
  double max_abs = 0.0;
  double min_C = 0.0;       // max_abs / p^(e_i / 2)
  int exponent = 0;         // doubled
  std::optional<std::vector<std::uint32_t>> witness;  // an h attaining max_abs
};

struct Violation {
  std::vector<std::uint32_t> h;
  std::size_t index;
  double value;
  double bound;
};

struct StratReport {
  std::uint32_t p = 0;
  std::size_t n = 0;
  double C = 0;
  bool excluded_prime = false;  // p divides N; the bound is not claimed
  std::vector<StratRecord> records;
  std::vector<Violation> violations;  // first max_violations, ordered by h
  std::uint64_t violation_count = 0;

  bool pass() const { return violation_count == 0; }
  double measured_C() const;
};

struct VerifyOptions {
  unsigned workers = 1;
  std::size_t max_violations = 1000;
};

StratReport verify_kl(const KLDatum& datum, const SumGrid& grid, const VerifyOptions& opt = {});

/// 2 log_p |S(h)| per grid entry; -infinity where the value is zero.
std::vector<double> empirical_exponent_map(const SumGrid& grid);

enum class DualMembership { member, nonmember, undetermined };
std::string to_string(DualMembership m);

/// Extension degree that suffices to find a singular point of a hyperplane
/// section of a smooth degree-delta hypersurface in P^(n-1) when the
/// singular locus is finite: max(1, (delta - 1)^(n - 2)). Heuristic otherwise.
unsigned dual_search_bound(int delta, std::size_t n);

/// Searches F_(p^e), e <= max_ext, for a projective x with F(x) = 0, v.x = 0
/// and grad F(x) proportional to v.
DualMembership dual_variety_membership(const IntPolynomial& F, const std::vector<std::uint32_t>& v,
                                       const FieldCtx& prime_field, unsigned max_ext);

/// Bulk version: the F_p-rational part of V(F)* collected through the Gauss
/// map x -> grad F(x) over F_(p^e), e <= min(dual_search_bound, max_ext).
class DualVarietyIndex {
 public:
  DualVarietyIndex(const IntPolynomial& F, const FieldCtx& prime_field, unsigned max_ext);
  /// Membership of v (v = 0 counts as a member of the cone).
  bool contains(const FieldCtx::Code* v) const;
  bool complete() const { return complete_; }
  /// Singular points of V(F) itself were found (every hyperplane through
  /// them is then in the dual).
  bool singular() const { return !singular_points_.empty(); }
  std::size_t size() const { return members_.size(); }

 private:
  std::uint64_t key(const std::vector<std::uint32_t>& normalized) const;
  std::size_t n_;
  std::uint32_t p_;
  bool complete_ = true;
  std::unordered_set<std::uint64_t> members_;
  struct SingularPoint {
    std::shared_ptr<const FieldCtx> field;
    std::vector<FieldCtx::Code> x;
  };
  std::vector<SingularPoint> singular_points_;
};

/// Singular points of the projective hypersurface V(F) over F_(p^e), e <= max_ext.
bool has_singular_point(const IntPolynomial& F, std::uint32_t p, unsigned max_ext);

}  // namespace expsum
