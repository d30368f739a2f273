#pragma once

// Built-in families of sums with their stratification data.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "expsum/strat.hpp"
#include "expsum/sum_engine.hpp"

namespace expsum {

struct LabeledGrid {
  std::string label;
  SumGrid grid;
};

struct CatalogEntry {
  std::string name;
  nlohmann::json params;
  std::string notes;
  KLDatum datum;
  /// Complete grids of the family at one prime (several for character families).
  std::function<std::vector<LabeledGrid>(const FieldCtx&, const EngineOptions&)> grids;
  /// Independent evaluation of a single grid entry, where one exists.
  std::function<std::complex<double>(const std::vector<std::uint32_t>&, const FieldCtx&)> closed_form;
  /// The sum family as a SumSpec (h left free), when it is of that shape.
  std::optional<SumSpec> spec;
};

/// V = span(basis) of dimension n - 2; f = 0.
CatalogEntry linear_space(std::size_t n, const std::vector<std::vector<std::int64_t>>& basis);
/// T(F, v) over F = sum a_i x_i^2.
CatalogEntry diagonal_quadratic(std::size_t n, const std::vector<std::int64_t>& a);
/// T(F, v) for a homogeneous F; strata from the dual variety. N collects the
/// primes in check_primes (and those dividing deg F) where V(F) is singular.
CatalogEntry smooth_form(const IntPolynomial& F, unsigned max_ext = 2,
                         const std::vector<std::uint32_t>& check_primes = {2, 3, 5, 7, 11, 13});
/// T(V, v) on the cone over the intersection of n_blocks quadrics sum of four squares.
CatalogEntry deep_stratification(std::size_t n_blocks);
/// Fourier transform of delta(F(a, x) = 0) psi(-a.b) on A^(3n), F = sum A_i X_i^2.
CatalogEntry family_quadratic(std::size_t n);
/// sum_x chi((x - a_1)...(x - a_r)) conj(chi((x - b_1)...(x - b_r))) on F_p^(2r).
CatalogEntry burgess_family(std::size_t r, std::uint64_t max_order = 12);

/// Names accepted by build_catalog_entry.
std::vector<std::string> catalog_names();
/// Builds an entry from JSON parameters, e.g. {"n": 3} or {"F": "x1^3 + x2^3 + x3^3"}.
CatalogEntry build_catalog_entry(const std::string& name, const nlohmann::json& params);

// Helpers shared with the family checks and the chain file reader.

/// Primitive integer basis of {x in Q^n : rows . x = 0}.
std::vector<std::vector<BigInt>> integer_kernel(const std::vector<std::vector<BigInt>>& rows, std::size_t n);
/// gcd of the maximal minors of a full-rank integer matrix (0 if rank deficient).
BigInt maximal_minor_gcd(const std::vector<std::vector<BigInt>>& rows, std::size_t n);

/// Stratum index of v for T(sum d_i x_i^2, v) in the parity chain of the
/// nondegenerate part of d; used to define the family strata.
std::size_t family_quadratic_index(const std::vector<std::uint32_t>& c_d_v, std::size_t n, std::uint32_t p);
/// Predicate stratum "stratum index >= j" for the family_quadratic chain.
Stratum family_quadratic_stratum(std::size_t n, std::size_t j);
/// Predicate stratum "no value among a_1..a_r, b_1..b_r occurs exactly once".
Stratum burgess_degenerate_stratum(std::size_t r);
/// Predicate stratum "v = 0 or v lies on V(F)*".
Stratum dual_variety_stratum(const IntPolynomial& F, unsigned max_ext);

/// FT(phi)(c, d, v) = p^n psi(d.c) T(F_d, v), checked exactly on the whole
/// grid, together with |FT(c, d, v)| = |FT(0, d, v)|.
struct FamilyIdentityReport {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t modulus_mismatches = 0;
  bool exact() const { return mismatches == 0 && modulus_mismatches == 0; }
};
FamilyIdentityReport check_family_identity(std::size_t n, const FieldCtx& ctx, const EngineOptions& opt = {});

/// The polynomial chain in (A, V) whose specialization at A = d should give
/// the parity chain of sum d_i x_i^2 (for all d_i != 0).
VarietyChain generic_family_chain(std::size_t n);
/// Compares, for every d with all d_i != 0 and every v, the stratum index
/// under the specialized generic chain with the diagonal_quadratic(n, d)
/// chain. Returns the number of (d, v) where they differ.
std::uint64_t compare_specialized_chains(std::size_t n, const FieldCtx& ctx);

/// Burgess family check result at one prime.
struct BurgessReport {
  std::vector<StratReport> reports;  // one per character
  std::vector<std::string> characters;
  double bad_stratum_max = 0;        // largest |sum| on the excluded stratum
  bool witness_ok = false;           // bad_stratum_max >= p - 1 - (2r - 1) sqrt p
};
BurgessReport check_burgess(std::size_t r, const FieldCtx& ctx, const EngineOptions& opt = {},
                            std::uint64_t max_order = 12);

}  // namespace expsum
