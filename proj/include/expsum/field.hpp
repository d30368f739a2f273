#pragma once

// Finite fields F_p and F_{p^m}, trace maps, and additive / multiplicative
// characters.
//
// Elements of F_{p^m} are encoded as integers ("codes") in [0, p^m): the code
// of c_0 + c_1 t + ... + c_{m-1} t^{m-1} is sum c_i p^i, where t is the class
// of the indeterminate modulo the field's irreducible modulus. The prime field
// F_p embeds as the codes [0, p).
//
// All values depending on the extension (traces of individual elements,
// discrete logarithms, ...) depend on the chosen modulus; sums over the whole
// field (and therefore every exponential sum computed by this library) only
// depend on the field up to isomorphism.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace expsum {

struct FieldOptions {
  /// Construction fails for p^m above this size.
  std::uint64_t size_cap = std::uint64_t{1} << 26;
  /// Log/exp/trace tables are built when p^m is at most this size.
  std::uint64_t table_cap = std::uint64_t{1} << 22;
};

bool is_prime(std::uint64_t n);
/// Distinct prime divisors in increasing order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
/// Inverse of a modulo m (gcd(a, m) must be 1); result in [0, m).
std::uint64_t mod_inverse(std::int64_t a, std::uint64_t m);
/// e(num/den) = exp(2 pi i num/den), computed after reducing num modulo den.
std::complex<double> unit_root(std::int64_t num, std::uint64_t den);

/// Monic irreducible polynomials over F_p of degree m, in increasing code
/// order (coefficients listed from the constant term upward, leading 1
/// included). The first one is the library's default model of F_{p^m}.
std::vector<std::vector<std::uint32_t>> irreducible_moduli(std::uint32_t p, std::uint32_t m,
                                                           std::size_t count);
bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> monic_poly);

struct AdditiveCharValue {
  std::uint32_t index;  // Tr(x) in Z/p
  std::complex<double> value;
};

struct MultCharValue {
  std::optional<std::uint64_t> index;  // k with chi(x) = e(k/order); empty at x = 0
  std::complex<double> value;          // 0 at x = 0
};

class FieldCtx {
 public:
  using Code = std::uint32_t;

  /// F_{p^m} modelled by the least monic irreducible of degree m.
  static std::shared_ptr<const FieldCtx> create(std::uint32_t p, std::uint32_t m = 1,
                                                const FieldOptions& options = {});
  /// F_{p^m} with an explicit monic modulus (constant term first, length m+1).
  static std::shared_ptr<const FieldCtx> create_with_modulus(std::uint32_t p,
                                                             std::vector<std::uint32_t> modulus,
                                                             const FieldOptions& options = {});

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  std::uint32_t p() const { return p_; }
  std::uint32_t m() const { return m_; }
  std::uint64_t size() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  Code generator() const { return generator_; }
  /// Least primitive root modulo p; base of the characters pulled back by the norm.
  std::uint32_t base_generator() const { return base_generator_; }
  bool has_tables() const { return !log_.empty(); }

  Code zero() const { return 0; }
  Code one() const { return 1; }
  Code from_int(std::int64_t v) const;
  Code from_coeffs(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(Code x) const;

  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const;
  Code neg(Code a) const;
  Code mul(Code a, Code b) const;
  Code inv(Code a) const;
  Code pow(Code a, std::uint64_t e) const;
  Code frobenius(Code a) const { return pow(a, p_); }

  /// Tr_{F_{p^m}/F_p}(x) in [0, p).
  std::uint32_t trace(Code x) const;
  /// Trace as the literal sum of the m Frobenius conjugates (independent route).
  std::uint32_t trace_by_frobenius(Code x) const;
  /// N_{F_{p^m}/F_p}(x) in [0, p).
  std::uint32_t norm(Code x) const;
  /// Discrete logarithm base generator(); x must be nonzero.
  std::uint64_t dlog(Code x) const;
  /// Discrete logarithm in F_p^x base base_generator(); x in [1, p).
  std::uint64_t base_dlog(std::uint32_t x) const;

  /// e(j/p).
  const std::complex<double>& zeta(std::uint32_t j) const { return zeta_[j]; }
  const std::vector<std::complex<double>>& zeta_table() const { return zeta_; }

  /// psi(x) = e(Tr(x)/p).
  AdditiveCharValue additive_char(Code x) const;
  /// chi(x) = e(index * dlog(x) / order) for a character of F_{p^m}^x; order must
  /// divide p^m - 1. chi(0) = 0.
  MultCharValue mult_char(Code x, std::uint64_t order, std::uint64_t index = 1) const;
  /// chi(N(x)) for the character chi(y) = e(index * base_dlog(y) / order) of
  /// F_p^x; order must divide p - 1. Agrees with mult_char when m = 1.
  MultCharValue lifted_mult_char(Code x, std::uint64_t order, std::uint64_t index = 1) const;

 private:
  FieldCtx(std::uint32_t p, std::vector<std::uint32_t> modulus, const FieldOptions& options);

  Code add_digits(Code a, Code b) const;
  Code mul_slow(Code a, Code b) const;
  Code pow_slow(Code a, std::uint64_t e) const;
  std::uint64_t dlog_bsgs(Code x) const;

  std::uint32_t p_;
  std::uint32_t m_;
  std::uint64_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint64_t> place_;     // p^i
  std::vector<std::uint32_t> basis_trace_;  // Tr(t^i)
  Code generator_ = 1;
  std::uint32_t base_generator_ = 1;
  std::vector<std::complex<double>> zeta_;

  // Tables (present iff q <= table_cap).
  std::vector<Code> exp_;             // g^k for k in [0, 2(q-1))
  std::vector<std::uint32_t> log_;    // dlog, log_[0] unused
  std::vector<std::uint32_t> trace_;  // Tr(x)
  std::vector<std::uint32_t> zech_;   // log(1 + g^k), q - 1 where 1 + g^k = 0
  // Baby-step table for fields without tables.
  std::unordered_map<Code, std::uint64_t> baby_steps_;
  std::uint64_t giant_stride_ = 0;
  Code giant_factor_ = 1;
  std::vector<std::uint32_t> base_log_;  // dlog in F_p^x
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

/// A field element bound to its context. The context must outlive the element.
class FieldElem {
 public:
  using Code = FieldCtx::Code;

  FieldElem(const FieldCtx& ctx, Code code) : ctx_(&ctx), code_(code) {}
  static FieldElem from_coeffs(const FieldCtx& ctx, std::span<const std::uint32_t> coeffs) {
    return {ctx, ctx.from_coeffs(coeffs)};
  }

  const FieldCtx& ctx() const { return *ctx_; }
  Code code() const { return code_; }
  std::vector<std::uint32_t> coeffs() const { return ctx_->coeffs(code_); }

  FieldElem operator+(const FieldElem& o) const { return {*ctx_, ctx_->add(code_, o.code_)}; }
  FieldElem operator-(const FieldElem& o) const { return {*ctx_, ctx_->sub(code_, o.code_)}; }
  FieldElem operator*(const FieldElem& o) const { return {*ctx_, ctx_->mul(code_, o.code_)}; }
  FieldElem operator/(const FieldElem& o) const {
    return {*ctx_, ctx_->mul(code_, ctx_->inv(o.code_))};
  }
  FieldElem operator-() const { return {*ctx_, ctx_->neg(code_)}; }
  FieldElem pow(std::uint64_t e) const { return {*ctx_, ctx_->pow(code_, e)}; }
  bool operator==(const FieldElem& o) const { return ctx_ == o.ctx_ && code_ == o.code_; }

 private:
  const FieldCtx* ctx_;
  Code code_;
};

std::uint32_t trace_to_base(const FieldElem& x);
AdditiveCharValue additive_char(const FieldElem& x);
MultCharValue mult_char(const FieldElem& x, std::uint64_t order_divisor, std::uint64_t index = 1);

/// Gauss sum sum_y chi(y) psi(y) over the context's field for the character
/// chi = e(chi_index * dlog / chi_order). Throws DomainError for the trivial
/// character or an order not dividing |field| - 1.
std::complex<double> gauss_sum(const FieldCtx& ctx, std::uint64_t chi_order, std::uint64_t chi_index = 1);

}  // namespace expsum
