#include "expsum/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "expsum/errors.hpp"

namespace expsum {

namespace {

using UPoly = std::vector<std::uint64_t>;  // constant term first

void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

UPoly poly_mod(UPoly a, const UPoly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = mod_inverse(static_cast<std::int64_t>(f.back()), p);
  while (a.size() > df) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = (a[shift + i] + p - c * f[i] % p) % p;
    }
    trim(a);
  }
  return a;
}

UPoly poly_mulmod(const UPoly& a, const UPoly& b, const UPoly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(r), f, p);
}

UPoly poly_powmod(UPoly base, std::uint64_t e, const UPoly& f, std::uint64_t p) {
  UPoly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

UPoly poly_gcd(UPoly a, UPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::uint64_t checked_power(std::uint64_t p, std::uint32_t m, std::uint64_t cap) {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (q > cap / p) {
      throw CapExceeded("field size " + std::to_string(p) + "^" + std::to_string(m) +
                        " exceeds the configured cap " + std::to_string(cap));
    }
    q *= p;
  }
  return q;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 r = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) r = r * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_inverse(std::int64_t a, std::uint64_t m) {
  std::int64_t mm = static_cast<std::int64_t>(m);
  std::int64_t r0 = ((a % mm) + mm) % mm, r1 = mm;
  std::int64_t s0 = 1, s1 = 0;
  while (r1 != 0) {
    const std::int64_t qt = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - qt * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - qt * s1);
  }
  if (r0 != 1) throw DomainError("value is not invertible modulo " + std::to_string(m));
  return static_cast<std::uint64_t>(((s0 % mm) + mm) % mm);
}

std::complex<double> unit_root(std::int64_t num, std::uint64_t den) {
  const auto d = static_cast<std::int64_t>(den);
  const std::int64_t r = ((num % d) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
}

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> monic_poly) {
  if (monic_poly.size() < 2 || monic_poly.back() != 1) return false;
  const std::size_t m = monic_poly.size() - 1;
  if (m == 1) return true;
  UPoly f(monic_poly.begin(), monic_poly.end());
  UPoly h{0, 1};  // x
  for (std::size_t j = 1; j <= m / 2; ++j) {
    h = poly_powmod(h, p, f, p);
    UPoly diff = h;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    const UPoly g = poly_gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

std::vector<std::vector<std::uint32_t>> irreducible_moduli(std::uint32_t p, std::uint32_t m,
                                                           std::size_t count) {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
  if (m == 0) throw DomainError("extension degree must be at least 1");
  std::vector<std::vector<std::uint32_t>> out;
  const std::uint64_t limit = checked_power(p, m, std::uint64_t{1} << 40);
  std::vector<std::uint32_t> poly(m + 1, 0);
  poly[m] = 1;
  for (std::uint64_t c = 0; c < limit && out.size() < count; ++c) {
    std::uint64_t v = c;
    for (std::uint32_t i = 0; i < m; ++i) {
      poly[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    if (is_irreducible(p, poly)) out.push_back(poly);
  }
  return out;
}

namespace {

const std::vector<std::uint32_t>& default_modulus(std::uint32_t p, std::uint32_t m) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({p, m});
  if (it == cache.end()) {
    auto found = irreducible_moduli(p, m, 1);
    it = cache.emplace(std::make_pair(p, m), std::move(found.front())).first;
  }
  return it->second;
}

}  // namespace

std::shared_ptr<const FieldCtx> FieldCtx::create(std::uint32_t p, std::uint32_t m,
                                                 const FieldOptions& options) {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
  if (m == 0) throw DomainError("extension degree must be at least 1");
  checked_power(p, m, options.size_cap);
  return create_with_modulus(p, default_modulus(p, m), options);
}

std::shared_ptr<const FieldCtx> FieldCtx::create_with_modulus(std::uint32_t p,
                                                              std::vector<std::uint32_t> modulus,
                                                              const FieldOptions& options) {
  return std::shared_ptr<const FieldCtx>(new FieldCtx(p, std::move(modulus), options));
}

FieldCtx::FieldCtx(std::uint32_t p, std::vector<std::uint32_t> modulus, const FieldOptions& options)
    : p_(p), modulus_(std::move(modulus)) {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
  if (modulus_.size() < 2) throw DomainError("modulus must have degree at least 1");
  for (auto c : modulus_) {
    if (c >= p) throw DomainError("modulus coefficients must lie in [0, p)");
  }
  if (!is_irreducible(p, modulus_)) throw DomainError("modulus is not a monic irreducible polynomial");
  m_ = static_cast<std::uint32_t>(modulus_.size() - 1);
  q_ = checked_power(p, m_, options.size_cap);
  place_.resize(m_ + 1);
  place_[0] = 1;
  for (std::uint32_t i = 1; i <= m_; ++i) place_[i] = place_[i - 1] * p;

  zeta_.resize(p);
  for (std::uint32_t j = 0; j < p; ++j) zeta_[j] = unit_root(j, p);

  // Multiplicative generators.
  const auto qf = prime_factors(q_ - 1);
  if (q_ > 2) {
    for (Code c = 2;; ++c) {
      bool ok = true;
      for (auto r : qf) {
        if (pow_slow(c, (q_ - 1) / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        generator_ = c;
        break;
      }
    }
  }
  const auto pf = prime_factors(p - 1);
  if (p > 2) {
    for (std::uint32_t c = 2;; ++c) {
      bool ok = true;
      for (auto r : pf) {
        if (mod_pow(c, (p - 1) / r, p) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        base_generator_ = c;
        break;
      }
    }
  }
  if (m_ > 1) {
    base_log_.assign(p, 0);
    std::uint64_t v = 1;
    for (std::uint32_t k = 0; k + 1 < p; ++k) {
      base_log_[v] = k;
      v = v * base_generator_ % p;
    }
  }

  if (q_ <= options.table_cap) {
    exp_.resize(2 * (q_ - 1) + 1);
    log_.assign(q_, 0);
    Code v = 1;
    for (std::uint64_t k = 0; k < q_ - 1; ++k) {
      exp_[k] = v;
      exp_[k + q_ - 1] = v;
      log_[v] = static_cast<std::uint32_t>(k);
      v = mul_slow(v, generator_);
    }
    exp_[2 * (q_ - 1)] = 1;
  } else {
    giant_stride_ = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(q_ - 1))));
    Code v = 1;
    for (std::uint64_t j = 0; j < giant_stride_; ++j) {
      baby_steps_.emplace(v, j);
      v = mul_slow(v, generator_);
    }
    giant_factor_ = pow_slow(pow_slow(generator_, giant_stride_), q_ - 2);
  }

  basis_trace_.resize(m_);
  for (std::uint32_t i = 0; i < m_; ++i) {
    basis_trace_[i] = trace_by_frobenius(static_cast<Code>(place_[i]));
  }
  if (has_tables() && m_ > 1) {
    zech_.resize(q_ - 1);
    for (std::uint64_t k = 0; k < q_ - 1; ++k) {
      const Code s = add_digits(1, exp_[k]);
      zech_[k] = s == 0 ? static_cast<std::uint32_t>(q_ - 1) : log_[s];
    }
    trace_.resize(q_);
    for (std::uint64_t c = 0; c < q_; ++c) {
      std::uint64_t v = c, s = 0;
      for (std::uint32_t i = 0; i < m_; ++i) {
        s += (v % p_) * basis_trace_[i];
        v /= p_;
      }
      trace_[c] = static_cast<std::uint32_t>(s % p_);
    }
  }
}

FieldCtx::Code FieldCtx::from_int(std::int64_t v) const {
  const auto pp = static_cast<std::int64_t>(p_);
  return static_cast<Code>(((v % pp) + pp) % pp);
}

FieldCtx::Code FieldCtx::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() > m_) throw DomainError("too many coefficients for the field degree");
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) c += static_cast<std::uint64_t>(coeffs[i] % p_) * place_[i];
  return static_cast<Code>(c);
}

std::vector<std::uint32_t> FieldCtx::coeffs(Code x) const {
  std::vector<std::uint32_t> out(m_);
  std::uint64_t v = x;
  for (std::uint32_t i = 0; i < m_; ++i) {
    out[i] = static_cast<std::uint32_t>(v % p_);
    v /= p_;
  }
  return out;
}

FieldCtx::Code FieldCtx::add(Code a, Code b) const {
  if (m_ == 1) return static_cast<Code>((static_cast<std::uint64_t>(a) + b) % p_);
  if (!zech_.empty()) {
    if (a == 0) return b;
    if (b == 0) return a;
    const std::uint64_t la = log_[a];
    const std::uint64_t d = (log_[b] + (q_ - 1) - la) % (q_ - 1);
    const std::uint32_t z = zech_[d];
    if (z == q_ - 1) return 0;
    return exp_[la + z];
  }
  return add_digits(a, b);
}

FieldCtx::Code FieldCtx::add_digits(Code a, Code b) const {
  std::uint64_t r = 0, x = a, y = b;
  for (std::uint32_t i = 0; i < m_; ++i) {
    r += ((x % p_ + y % p_) % p_) * place_[i];
    x /= p_;
    y /= p_;
  }
  return static_cast<Code>(r);
}

FieldCtx::Code FieldCtx::neg(Code a) const {
  if (m_ == 1) return a == 0 ? 0 : p_ - a;
  std::uint64_t r = 0, x = a;
  for (std::uint32_t i = 0; i < m_; ++i) {
    r += ((p_ - x % p_) % p_) * place_[i];
    x /= p_;
  }
  return static_cast<Code>(r);
}

FieldCtx::Code FieldCtx::sub(Code a, Code b) const { return add(a, neg(b)); }

FieldCtx::Code FieldCtx::mul(Code a, Code b) const {
  if (m_ == 1) return static_cast<Code>(static_cast<std::uint64_t>(a) * b % p_);
  if (a == 0 || b == 0) return 0;
  if (has_tables()) return exp_[static_cast<std::uint64_t>(log_[a]) + log_[b]];
  return mul_slow(a, b);
}

FieldCtx::Code FieldCtx::mul_slow(Code a, Code b) const {
  if (m_ == 1) return static_cast<Code>(static_cast<std::uint64_t>(a) * b % p_);
  UPoly pa(m_), pb(m_);
  std::uint64_t x = a, y = b;
  for (std::uint32_t i = 0; i < m_; ++i) {
    pa[i] = x % p_;
    pb[i] = y % p_;
    x /= p_;
    y /= p_;
  }
  trim(pa);
  trim(pb);
  const UPoly f(modulus_.begin(), modulus_.end());
  const UPoly r = poly_mulmod(pa, pb, f, p_);
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < r.size(); ++i) c += r[i] * place_[i];
  return static_cast<Code>(c);
}

FieldCtx::Code FieldCtx::pow_slow(Code a, std::uint64_t e) const {
  Code r = 1, b = a;
  while (e > 0) {
    if (e & 1) r = mul_slow(r, b);
    b = mul_slow(b, b);
    e >>= 1;
  }
  return r;
}

FieldCtx::Code FieldCtx::pow(Code a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (m_ == 1) return static_cast<Code>(mod_pow(a, e, p_));
  if (has_tables()) return exp_[static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
  return pow_slow(a, e);
}

FieldCtx::Code FieldCtx::inv(Code a) const {
  if (a == 0) throw DomainError("zero has no inverse");
  if (m_ == 1) return static_cast<Code>(mod_inverse(a, p_));
  if (has_tables()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow_slow(a, q_ - 2);
}

std::uint32_t FieldCtx::trace(Code x) const {
  if (m_ == 1) return x;
  if (!trace_.empty()) return trace_[x];
  std::uint64_t v = x, s = 0;
  for (std::uint32_t i = 0; i < m_; ++i) {
    s += (v % p_) * basis_trace_[i];
    v /= p_;
  }
  return static_cast<std::uint32_t>(s % p_);
}

std::uint32_t FieldCtx::trace_by_frobenius(Code x) const {
  Code s = 0, y = x;
  for (std::uint32_t k = 0; k < m_; ++k) {
    s = add(s, y);
    y = has_tables() ? pow(y, p_) : pow_slow(y, p_);
  }
  return s;  // Frobenius-invariant, hence a code in [0, p)
}

std::uint32_t FieldCtx::norm(Code x) const {
  if (x == 0) return 0;
  return pow(x, (q_ - 1) / (p_ - 1));
}

std::uint64_t FieldCtx::dlog(Code x) const {
  if (x == 0) throw DomainError("discrete logarithm of zero");
  if (has_tables()) return log_[x];
  return dlog_bsgs(x);
}

std::uint64_t FieldCtx::dlog_bsgs(Code x) const {
  Code y = x;
  for (std::uint64_t i = 0; i <= giant_stride_; ++i) {
    auto it = baby_steps_.find(y);
    if (it != baby_steps_.end()) return (i * giant_stride_ + it->second) % (q_ - 1);
    y = mul_slow(y, giant_factor_);
  }
  throw Error("discrete logarithm not found (internal error)");
}

std::uint64_t FieldCtx::base_dlog(std::uint32_t x) const {
  if (x == 0 || x >= p_) throw DomainError("base_dlog expects an element of F_p^x");
  if (m_ == 1) return dlog(x);
  return base_log_[x];
}

AdditiveCharValue FieldCtx::additive_char(Code x) const {
  const std::uint32_t t = trace(x);
  return {t, zeta_[t]};
}

MultCharValue FieldCtx::mult_char(Code x, std::uint64_t order, std::uint64_t index) const {
  if (order == 0 || (q_ - 1) % order != 0) {
    throw DomainError("character order " + std::to_string(order) + " does not divide " +
                      std::to_string(q_ - 1));
  }
  if (x == 0) return {std::nullopt, {0.0, 0.0}};
  const std::uint64_t k = static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(dlog(x)) * (index % order) % order);
  return {k, unit_root(static_cast<std::int64_t>(k), order)};
}

MultCharValue FieldCtx::lifted_mult_char(Code x, std::uint64_t order, std::uint64_t index) const {
  if (order == 0 || (p_ - 1) % order != 0) {
    throw DomainError("character order " + std::to_string(order) + " does not divide p - 1 = " +
                      std::to_string(p_ - 1));
  }
  if (x == 0) return {std::nullopt, {0.0, 0.0}};
  const std::uint32_t n = norm(x);
  const std::uint64_t k = static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(base_dlog(n)) * (index % order) % order);
  return {k, unit_root(static_cast<std::int64_t>(k), order)};
}

std::uint32_t trace_to_base(const FieldElem& x) { return x.ctx().trace(x.code()); }

AdditiveCharValue additive_char(const FieldElem& x) { return x.ctx().additive_char(x.code()); }

MultCharValue mult_char(const FieldElem& x, std::uint64_t order_divisor, std::uint64_t index) {
  return x.ctx().mult_char(x.code(), order_divisor, index);
}

std::complex<double> gauss_sum(const FieldCtx& ctx, std::uint64_t chi_order, std::uint64_t chi_index) {
  if (chi_order == 0 || (ctx.size() - 1) % chi_order != 0) {
    throw DomainError("character order does not divide |field| - 1");
  }
  if (chi_index % chi_order == 0) {
    throw DomainError("the Gauss sum of the trivial character is not supported");
  }
  // Group terms by character exponent and trace so the float sum has p * order terms at most.
  std::vector<std::uint64_t> hits(chi_order * ctx.p(), 0);
  for (FieldCtx::Code y = 1; y < ctx.size(); ++y) {
    const auto chi = ctx.mult_char(y, chi_order, chi_index);
    hits[*chi.index * ctx.p() + ctx.trace(y)] += 1;
  }
  std::complex<long double> acc = 0;
  for (std::uint64_t k = 0; k < chi_order; ++k) {
    for (std::uint32_t t = 0; t < ctx.p(); ++t) {
      const auto c = hits[k * ctx.p() + t];
      if (c == 0) continue;
      const auto w = unit_root(static_cast<std::int64_t>(k), chi_order) * ctx.zeta(t);
      acc += std::complex<long double>(w.real(), w.imag()) * static_cast<long double>(c);
    }
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

}  // namespace expsum
