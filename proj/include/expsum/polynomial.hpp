#pragma once

// Sparse multivariate polynomials with integer coefficients, affine varieties
// given by generator lists, and compiled evaluators over a finite field.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expsum/field.hpp"

namespace expsum {

using BigInt = boost::multiprecision::cpp_int;
using Exponents = std::vector<std::uint32_t>;

/// Variable naming used by parse/print. With has_y the variables are
/// (y, x1, ..., xn) in that order; otherwise (x1, ..., xn).
struct VarLayout {
  std::size_t n_x = 0;
  bool has_y = false;

  std::size_t nvars() const { return n_x + (has_y ? 1 : 0); }
  std::string name(std::size_t var) const;
  bool operator==(const VarLayout&) const = default;
};

class IntPolynomial {
 public:
  /// Graded order: higher total degree first, then lexicographically larger
  /// exponent vectors first.
  struct TermOrder {
    bool operator()(const Exponents& a, const Exponents& b) const;
  };
  using TermMap = std::map<Exponents, BigInt, TermOrder>;

  IntPolynomial() = default;
  explicit IntPolynomial(std::size_t nvars) : nvars_(nvars) {}
  static IntPolynomial constant(std::size_t nvars, const BigInt& c);
  static IntPolynomial variable(std::size_t nvars, std::size_t var);
  static IntPolynomial monomial(const Exponents& e, const BigInt& c);

  /// Parses e.g. "y^2 - x1*x2 - 1". Throws ParseError.
  static IntPolynomial parse(std::string_view text, const VarLayout& layout);
  /// Parses and infers the layout: n_x = largest xi index, has_y if y occurs.
  static IntPolynomial parse(std::string_view text, VarLayout* inferred = nullptr);
  std::string to_string(const VarLayout& layout) const;
  /// Prints with layout {nvars, false}.
  std::string to_string() const;

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  int degree_in(std::size_t var) const;
  bool is_homogeneous() const;
  BigInt coefficient(const Exponents& e) const;

  void add_term(const Exponents& e, const BigInt& c);
  IntPolynomial operator+(const IntPolynomial& o) const;
  IntPolynomial operator-(const IntPolynomial& o) const;
  IntPolynomial operator-() const;
  IntPolynomial operator*(const IntPolynomial& o) const;
  IntPolynomial operator*(const BigInt& c) const;
  IntPolynomial pow(unsigned e) const;
  bool operator==(const IntPolynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  /// Same polynomial in a larger ring, variable i moved to offset + i.
  IntPolynomial embed(std::size_t new_nvars, std::size_t offset = 0) const;
  /// Substitutes the given integers; unset variables stay. The result keeps
  /// nvars() variables (substituted ones no longer occur).
  IntPolynomial specialize(const std::vector<std::optional<BigInt>>& values) const;
  IntPolynomial derivative(std::size_t var) const;
  BigInt evaluate(const std::vector<BigInt>& point) const;

  /// log+ max |coefficient| (natural log; 0 for the zero polynomial).
  double coefficient_height() const;
  /// Homogeneous pieces in increasing degree; empty for the zero polynomial.
  std::vector<IntPolynomial> homogeneous_components() const;

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// log+ |v| in natural log.
double log_plus(const BigInt& v);
/// Family height max_j h_c(f_j).
double coefficient_height(const std::vector<IntPolynomial>& family);
/// Right-hand side h_c(g) + deg(g) log+ max|y_i| + log(#terms of g) of the
/// height bound for the specialization of g at the set entries of values.
double specialization_height_bound(const IntPolynomial& g, const std::vector<std::optional<BigInt>>& values);

/// The common zero set of a list of generators in A^n. No generators means A^n.
class AffineVariety {
 public:
  AffineVariety() = default;
  explicit AffineVariety(std::size_t nvars, std::vector<IntPolynomial> generators = {},
                         std::optional<int> claimed_dim = std::nullopt);
  static AffineVariety parse(std::size_t nvars, const std::vector<std::string>& generators);
  static AffineVariety origin(std::size_t nvars);
  /// The empty variety, generated by the constant 1.
  static AffineVariety empty(std::size_t nvars);

  std::size_t nvars() const { return nvars_; }
  const std::vector<IntPolynomial>& generators() const { return generators_; }
  std::optional<int> claimed_dim() const { return claimed_dim_; }
  std::vector<std::string> to_strings() const;

  /// Zero set of the union, generated by pairwise products.
  static AffineVariety union_of(const std::vector<AffineVariety>& parts);
  AffineVariety intersect(const AffineVariety& o) const;
  /// Variety of all homogeneous components of the generators.
  AffineVariety homogeneous_closure() const;
  double height() const { return coefficient_height(generators_); }

 private:
  std::size_t nvars_ = 0;
  std::vector<IntPolynomial> generators_;
  std::optional<int> claimed_dim_;
};

/// A polynomial with coefficients reduced into a fixed field, ready for fast
/// evaluation at points given as codes.
class ModPoly {
 public:
  ModPoly() = default;
  ModPoly(const IntPolynomial& f, const FieldCtx& ctx);

  FieldCtx::Code eval(const FieldCtx::Code* point) const;
  FieldCtx::Code eval(const std::vector<FieldCtx::Code>& point) const { return eval(point.data()); }
  bool is_zero() const { return terms_.empty(); }
  std::size_t nvars() const { return nvars_; }

 private:
  struct Term {
    FieldCtx::Code coeff;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> powers;  // (var, exponent)
  };
  const FieldCtx* ctx_ = nullptr;
  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Compiled membership test for an AffineVariety.
class ModVariety {
 public:
  ModVariety() = default;
  ModVariety(const AffineVariety& v, const FieldCtx& ctx);
  bool contains(const FieldCtx::Code* point) const;
  bool contains(const std::vector<FieldCtx::Code>& point) const { return contains(point.data()); }
  std::size_t nvars() const { return nvars_; }

 private:
  std::size_t nvars_ = 0;
  std::vector<ModPoly> gens_;
};

/// Reduction of an integer into the prime field of ctx.
FieldCtx::Code reduce_mod(const BigInt& c, const FieldCtx& ctx);
/// Value of f at a point whose coordinates all live in the same field.
FieldElem eval_mod(const IntPolynomial& f, const std::vector<FieldElem>& point);

}  // namespace expsum
