#include "expsum/catalog.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>

#include "expsum/errors.hpp"
#include "expsum/parallel.hpp"

namespace expsum {

using Code = FieldCtx::Code;
using Rational = boost::multiprecision::cpp_rational;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Integer linear algebra

namespace {

// Row echelon form over Q; returns pivot columns.
std::vector<std::size_t> echelon(std::vector<std::vector<Rational>>& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    const Rational inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = 0; c < ncols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::vector<Rational>> to_rational(const std::vector<std::vector<BigInt>>& rows, std::size_t n) {
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rows) {
    if (r.size() != n) throw DomainError("matrix row has the wrong length");
    m.emplace_back(r.begin(), r.end());
  }
  return m;
}

std::size_t rank_of(const std::vector<std::vector<BigInt>>& rows, std::size_t n) {
  auto m = to_rational(rows, n);
  return echelon(m, n).size();
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t k = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && m[piv][col] == 0) ++piv;
    if (piv == k) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < k; ++r) {
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < k; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

std::uint64_t radical_of(BigInt g) {
  if (g < 0) g = -g;
  if (g == 0) throw DomainError("rank-deficient matrix");
  std::uint64_t out = 1;
  for (std::uint64_t q = 2; BigInt(q) * q <= g; ++q) {
    if (g % q == 0) {
      out *= q;
      while (g % q == 0) g /= q;
    }
  }
  if (g > 1) {
    if (g > BigInt(std::numeric_limits<std::uint32_t>::max())) throw DomainError("excluded prime too large");
    out *= g.convert_to<std::uint64_t>();
  }
  return out;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

IntPolynomial linear_form(const std::vector<BigInt>& w) {
  IntPolynomial f(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) f = f + IntPolynomial::variable(w.size(), i) * w[i];
  return f;
}

IntPolynomial diagonal_form(std::size_t n, const std::vector<BigInt>& coeffs, std::size_t offset = 0,
                            std::size_t nvars = 0) {
  if (nvars == 0) nvars = n;
  IntPolynomial f(nvars);
  for (std::size_t i = 0; i < n; ++i) f = f + IntPolynomial::variable(nvars, offset + i).pow(2) * coeffs[i];
  return f;
}

std::vector<BigInt> dual_coefficients(const std::vector<BigInt>& a) {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    BigInt c = 1;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k != i) c *= a[k];
    }
    out.push_back(c);
  }
  return out;
}

std::vector<LabeledGrid> single_grid(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt,
                                     const std::string& label) {
  std::vector<LabeledGrid> out;
  out.push_back({label, complete_grid(spec, ctx, opt)});
  return out;
}

}  // namespace

std::vector<std::vector<BigInt>> integer_kernel(const std::vector<std::vector<BigInt>>& rows, std::size_t n) {
  auto m = to_rational(rows, n);
  const auto pivots = echelon(m, n);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<BigInt>> out;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    BigInt den = 1;
    for (const auto& x : v) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(x));
    std::vector<BigInt> w(n);
    BigInt g = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = boost::multiprecision::numerator(Rational(v[i] * den));
      g = boost::multiprecision::gcd(g, w[i]);
    }
    if (g > 1) {
      for (auto& x : w) x /= g;
    }
    out.push_back(std::move(w));
  }
  return out;
}

BigInt maximal_minor_gcd(const std::vector<std::vector<BigInt>>& rows, std::size_t n) {
  const std::size_t k = rows.size();
  if (k == 0) return 1;
  if (k > n) return 0;
  std::vector<std::size_t> cols(k);
  std::iota(cols.begin(), cols.end(), 0);
  BigInt g = 0;
  while (true) {
    std::vector<std::vector<Rational>> sub(k, std::vector<Rational>(k));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) sub[r][c] = rows[r][cols[c]];
    }
    const Rational det = determinant(sub);
    g = boost::multiprecision::gcd(g, boost::multiprecision::numerator(det));
    std::size_t i = k;
    while (i > 0 && cols[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  return g < 0 ? BigInt(-g) : g;
}

// ---------------------------------------------------------------------------
// Linear spaces

CatalogEntry linear_space(std::size_t n, const std::vector<std::vector<std::int64_t>>& basis) {
  if (n < 3) throw DomainError("linear_space needs n >= 3");
  if (basis.size() != n - 2) throw DomainError("basis must have n - 2 vectors");
  std::vector<std::vector<BigInt>> B;
  for (const auto& b : basis) {
    if (b.size() != n) throw DomainError("basis vectors must have n entries");
    B.emplace_back(b.begin(), b.end());
  }
  if (rank_of(B, n) != n - 2) throw DomainError("basis rank is not n - 2");
  const auto W = integer_kernel(B, n);

  std::vector<IntPolynomial> v_eqs, perp_eqs;
  for (const auto& w : W) v_eqs.push_back(linear_form(w));
  for (const auto& b : B) perp_eqs.push_back(linear_form(b));
  const AffineVariety V(n, v_eqs, static_cast<int>(n - 2));
  const AffineVariety perp(n, perp_eqs, 2);

  CatalogEntry e;
  e.name = "linear_space";
  json jb = json::array();
  for (const auto& b : basis) jb.push_back(b);
  e.params = {{"n", n}, {"basis", jb}};
  e.notes = "V = span(basis), f = 0; the sum is p^(n-2) on the orthogonal complement and 0 elsewhere.";
  e.datum.chain.ambient_n = n;
  for (std::size_t j = 1; j <= n; ++j) {
    e.datum.chain.strata.push_back(j <= n - 2 ? Stratum::from_equations(perp, "V^perp")
                                              : Stratum::from_equations(AffineVariety::empty(n), "empty"));
  }
  e.datum.C = 1.0;
  e.datum.d = static_cast<int>(n - 2);
  e.datum.N = lcm_u64(radical_of(maximal_minor_gcd(B, n)), radical_of(maximal_minor_gcd(W, n)));
  SumSpec spec(n);
  spec.variety = V;
  e.spec = spec;
  e.grids = [spec](const FieldCtx& ctx, const EngineOptions& opt) { return single_grid(spec, ctx, opt, "T"); };
  e.closed_form = [perp, n](const std::vector<std::uint32_t>& h, const FieldCtx& ctx) {
    const ModVariety mv(perp, ctx);
    std::vector<Code> hc(h.begin(), h.end());
    return std::complex<double>(mv.contains(hc) ? std::pow(static_cast<double>(ctx.p()), static_cast<double>(n - 2)) : 0.0,
                                0.0);
  };
  return e;
}

// ---------------------------------------------------------------------------
// Diagonal quadratic forms

CatalogEntry diagonal_quadratic(std::size_t n, const std::vector<std::int64_t>& a) {
  if (n == 0) throw DomainError("diagonal_quadratic needs n >= 1");
  if (a.size() != n) throw DomainError("need one coefficient per variable");
  for (auto c : a) {
    if (c == 0) throw DomainError("diagonal coefficients must be nonzero");
  }
  const std::vector<BigInt> A(a.begin(), a.end());
  const IntPolynomial F = diagonal_form(n, A);
  const IntPolynomial Fstar = diagonal_form(n, dual_coefficients(A));

  CatalogEntry e;
  e.name = "diagonal_quadratic";
  e.params = {{"n", n}, {"a", a}};
  e.notes = "T(F, v) = sum over F(x) = 0 of psi(v.x) for F = sum a_i x_i^2; parity-dependent chain.";
  auto& chain = e.datum.chain;
  chain.ambient_n = n;
  for (std::size_t j = 1; j <= n; ++j) {
    if (j == n) {
      chain.strata.push_back(Stratum::from_equations(AffineVariety::empty(n), "empty"));
    } else if (j == 1 && n % 2 == 0) {
      chain.strata.push_back(Stratum::from_equations(AffineVariety(n, {Fstar}, static_cast<int>(n - 1)), "F*(v) = 0"));
    } else {
      chain.strata.push_back(Stratum::from_equations(AffineVariety::origin(n), "{0}"));
    }
  }
  e.datum.d = static_cast<int>(n - 1);
  e.datum.C = 2.0;
  std::uint64_t N = 2;
  for (auto c : a) N = lcm_u64(N, radical_of(BigInt(c)));
  e.datum.N = N;

  SumSpec spec(n);
  spec.variety = AffineVariety(n, {F});
  e.spec = spec;
  e.grids = [spec](const FieldCtx& ctx, const EngineOptions& opt) { return single_grid(spec, ctx, opt, "T"); };
  e.closed_form = [a, n](const std::vector<std::uint32_t>& v, const FieldCtx& ctx) {
    const std::uint32_t p = ctx.p();
    if (p == 2) throw DomainError("the Gauss-sum evaluation needs p odd");
    std::int64_t prod = 1;
    std::int64_t q = 0;  // sum v_i^2 / a_i
    for (std::size_t i = 0; i < n; ++i) {
      const Code ai = ctx.from_int(a[i]);
      if (ai == 0) throw DomainError("p divides a coefficient");
      prod = static_cast<std::int64_t>(ctx.mul(ctx.from_int(prod), ai));
      const Code vi = ctx.from_int(v[i]);
      q = ctx.add(static_cast<Code>(q), ctx.mul(ctx.mul(vi, vi), ctx.inv(ai)));
    }
    const std::complex<double> tau = gauss_sum(ctx, 2);
    std::complex<double> s = 0;
    const Code four_inv = ctx.inv(ctx.from_int(4));
    for (Code t = 1; t < p; ++t) {
      const double chi_n = std::pow(ctx.mult_char(t, 2).value.real(), static_cast<double>(n));
      const Code arg = ctx.neg(ctx.mul(ctx.mul(four_inv, ctx.inv(t)), static_cast<Code>(q)));
      s += chi_n * ctx.zeta(arg);
    }
    std::complex<double> val = std::pow(tau, static_cast<double>(n)) *
                               ctx.mult_char(static_cast<Code>(prod), 2).value.real() / static_cast<double>(p) * s;
    const bool zero = std::all_of(v.begin(), v.end(), [&](std::uint32_t x) { return x % p == 0; });
    if (zero) val += std::pow(static_cast<double>(p), static_cast<double>(n - 1));
    return val;
  };
  return e;
}

// ---------------------------------------------------------------------------
// Smooth forms

Stratum dual_variety_stratum(const IntPolynomial& F, unsigned max_ext) {
  const json j = {{"predicate", "dual_variety"}, {"params", {{"F", F.to_string()}, {"max_ext", max_ext}}}};
  return Stratum::from_predicate(
      [F, max_ext](const FieldCtx& ctx) -> PointPredicate {
        auto index = std::make_shared<DualVarietyIndex>(F, ctx, max_ext);
        return [index](const Code* h) { return index->contains(h); };
      },
      j.dump(), "V(F)*");
}

CatalogEntry smooth_form(const IntPolynomial& F, unsigned max_ext, const std::vector<std::uint32_t>& check_primes) {
  if (F.is_zero() || !F.is_homogeneous()) throw DomainError("smooth_form needs a homogeneous polynomial");
  const std::size_t n = F.nvars();
  const int delta = F.degree();
  if (n < 2 || delta < 2) throw DomainError("smooth_form needs n >= 2 variables and degree >= 2");

  CatalogEntry e;
  e.name = "smooth_form";
  e.params = {{"F", F.to_string()}, {"max_ext", max_ext}};
  e.notes = "T(F, v) over the affine cone of V(F); the bad stratum is the dual variety.";
  auto& chain = e.datum.chain;
  chain.ambient_n = n;
  for (std::size_t j = 1; j <= n; ++j) {
    if (j == 1 && n > 1) {
      chain.strata.push_back(dual_variety_stratum(F, max_ext));
    } else if (j < n) {
      chain.strata.push_back(Stratum::from_equations(AffineVariety::origin(n), "{0}"));
    } else {
      chain.strata.push_back(Stratum::from_equations(AffineVariety::empty(n), "empty"));
    }
  }
  // Degree plus the middle Betti number of a smooth hyperplane section.
  const double b = (std::pow(delta - 1.0, static_cast<double>(n)) + std::pow(-1.0, static_cast<double>(n)) * (delta - 1.0)) /
                   delta;
  e.datum.C = delta + std::max(0.0, b);
  e.datum.d = static_cast<int>(n - 1);
  std::uint64_t N = 1;
  for (std::uint32_t p : check_primes) {
    if (delta % static_cast<int>(p) == 0 || has_singular_point(F, p, max_ext)) N = lcm_u64(N, p);
  }
  for (auto p : prime_factors(static_cast<std::uint64_t>(delta))) N = lcm_u64(N, p);
  e.datum.N = N;

  SumSpec spec(n);
  spec.variety = AffineVariety(n, {F});
  e.spec = spec;
  e.grids = [spec](const FieldCtx& ctx, const EngineOptions& opt) { return single_grid(spec, ctx, opt, "T"); };
  e.closed_form = [F](const std::vector<std::uint32_t>& v, const FieldCtx& ctx) {
    const bool zero = std::all_of(v.begin(), v.end(), [&](std::uint32_t x) { return x % ctx.p() == 0; });
    if (zero) return std::complex<double>(static_cast<double>(count_points(AffineVariety(F.nvars(), {F}), ctx)), 0.0);
    const auto c = cone_identity(F, v, ctx);
    return std::complex<double>(
        (static_cast<double>(ctx.p()) * c.section_zeros - static_cast<double>(c.zeros)) / (ctx.p() - 1.0), 0.0);
  };
  return e;
}

// ---------------------------------------------------------------------------
// Intersections of quadrics in blocks of four variables

CatalogEntry deep_stratification(std::size_t n_blocks) {
  if (n_blocks == 0) throw DomainError("n_blocks must be at least 1");
  const std::size_t n = n_blocks, amb = 4 * n;
  std::vector<IntPolynomial> forms;
  for (std::size_t j = 0; j < n; ++j) forms.push_back(diagonal_form(4, std::vector<BigInt>(4, 1), 4 * j, amb));

  CatalogEntry e;
  e.name = "deep_stratification";
  e.params = {{"n_blocks", n_blocks}};
  e.notes = "Cone over n_blocks quadrics x_{4j}^2 + ... + x_{4j+3}^2 = 0; X_k = at least k isotropic blocks "
            "for k <= n_blocks, then {0}.";
  auto& chain = e.datum.chain;
  chain.ambient_n = amb;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<AffineVariety> parts;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<IntPolynomial> eqs;
      for (std::size_t j = 0; j < n; ++j) {
        if (pick[j]) eqs.push_back(forms[j]);
      }
      parts.emplace_back(amb, eqs);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    chain.strata.push_back(Stratum::from_equations(AffineVariety::union_of(parts), std::to_string(k) + " isotropic blocks"));
  }
  for (std::size_t k = n + 1; k <= 3 * n - 1; ++k) {
    chain.strata.push_back(Stratum::from_equations(AffineVariety::origin(amb), "{0}"));
  }
  std::vector<int> exps;
  for (std::size_t i = 0; i <= 3 * n - 1; ++i) {
    if (i + 1 <= n) {
      exps.push_back(static_cast<int>(3 * n + 1 + i));
    } else if (i < 3 * n - 1) {
      exps.push_back(static_cast<int>(4 * n + 1));
    } else {
      exps.push_back(static_cast<int>(6 * n));
    }
  }
  e.datum.exponents = exps;
  e.datum.d = static_cast<int>(3 * n - 1);
  e.datum.C = 16.0;
  e.datum.N = 2;
  SumSpec spec(amb);
  spec.variety = AffineVariety(amb, forms);
  e.spec = spec;
  e.grids = [spec](const FieldCtx& ctx, const EngineOptions& opt) { return single_grid(spec, ctx, opt, "T"); };
  return e;
}

// ---------------------------------------------------------------------------
// Quadratic forms in families

std::size_t family_quadratic_index(const std::vector<std::uint32_t>& cdv, std::size_t n, std::uint32_t p) {
  if (cdv.size() != 3 * n) throw DomainError("family point must have 3n coordinates");
  const std::uint32_t* d = cdv.data() + n;
  const std::uint32_t* v = cdv.data() + 2 * n;
  std::size_t r = 0;
  bool v_on_support_zero = true;
  std::uint64_t fstar = 0;  // sum over the support of v_i^2 / d_i
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t di = d[i] % p, vi = v[i] % p;
    if (di == 0) {
      if (vi != 0) return 0;  // the sum vanishes
      continue;
    }
    ++r;
    if (vi != 0) v_on_support_zero = false;
    fstar = (fstar + vi * vi % p * mod_inverse(static_cast<std::int64_t>(di), p)) % p;
  }
  if (r == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] % p != 0) return 0;
    }
    return n + 1;
  }
  std::size_t ir = 0;
  if (v_on_support_zero) {
    ir = r - 1;
  } else if (r % 2 == 0 && fstar == 0) {
    ir = 1;
  }
  return n - r + ir;
}

Stratum family_quadratic_stratum(std::size_t n, std::size_t j) {
  const json js = {{"predicate", "family_quadratic"}, {"params", {{"n", n}, {"j", j}}}};
  return Stratum::from_predicate(
      [n, j](const FieldCtx& ctx) -> PointPredicate {
        const std::uint32_t p = ctx.p();
        return [n, j, p](const Code* h) {
          return family_quadratic_index(std::vector<std::uint32_t>(h, h + 3 * n), n, p) >= j;
        };
      },
      js.dump(), "index >= " + std::to_string(j));
}

CatalogEntry family_quadratic(std::size_t n) {
  if (n == 0) throw DomainError("family_quadratic needs n >= 1");
  const std::size_t amb = 3 * n;
  CatalogEntry e;
  e.name = "family_quadratic";
  e.params = {{"n", n}};
  e.notes = "Fourier transform of delta(sum a_i x_i^2 = 0) psi(-a.b) on A^(3n); equals p^n psi(d.c) T(F_d, v).";
  auto& chain = e.datum.chain;
  chain.ambient_n = amb;
  for (std::size_t j = 1; j <= n + 1; ++j) chain.strata.push_back(family_quadratic_stratum(n, j));
  e.datum.d = static_cast<int>(3 * n - 1);
  e.datum.C = 2.0;
  e.datum.N = 2;

  // Variables (a, b, x) in blocks of n.
  IntPolynomial F(amb), phase(amb);
  for (std::size_t i = 0; i < n; ++i) {
    F = F + IntPolynomial::variable(amb, i) * IntPolynomial::variable(amb, 2 * n + i).pow(2);
    phase = phase - IntPolynomial::variable(amb, i) * IntPolynomial::variable(amb, n + i);
  }
  SumSpec spec(amb);
  spec.variety = AffineVariety(amb, {F});
  spec.f = phase;
  e.spec = spec;
  e.grids = [spec](const FieldCtx& ctx, const EngineOptions& opt) { return single_grid(spec, ctx, opt, "FT(phi)"); };
  e.closed_form = [n](const std::vector<std::uint32_t>& cdv, const FieldCtx& ctx) {
    const std::uint32_t p = ctx.p();
    std::uint64_t dc = 0;
    for (std::size_t i = 0; i < n; ++i) dc += static_cast<std::uint64_t>(cdv[i]) * cdv[n + i];
    std::complex<double> T = 0;
    std::vector<std::uint32_t> x(n, 0);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= p;
    for (std::uint64_t t = 0; t < total; ++t) {
      std::uint64_t r = t, fx = 0, vx = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t xi = r % p;
        r /= p;
        fx += cdv[n + i] * xi % p * xi;
        vx += cdv[2 * n + i] * xi;
      }
      if (fx % p == 0) T += ctx.zeta(static_cast<std::uint32_t>(vx % p));
    }
    return std::pow(static_cast<double>(p), static_cast<double>(n)) * ctx.zeta(static_cast<std::uint32_t>(dc % p)) * T;
  };
  return e;
}

FamilyIdentityReport check_family_identity(std::size_t n, const FieldCtx& ctx, const EngineOptions& opt) {
  const auto entry = family_quadratic(n);
  const SumGrid grid = complete_grid(*entry.spec, ctx, opt);
  if (!grid.exact()) throw CapExceeded("family grid too large for exact comparison");
  const std::uint32_t p = ctx.p();
  std::uint64_t pn = 1;
  for (std::size_t i = 0; i < n; ++i) pn *= p;

  // T(F_d, v) exactly for every (d, v), by direct enumeration over x.
  std::vector<CycloValue> T(pn * pn, CycloValue(p));
  for (std::uint64_t di = 0; di < pn; ++di) {
    std::vector<std::uint64_t> d(n);
    std::uint64_t r = di;
    for (std::size_t i = n; i-- > 0;) {
      d[i] = r % p;
      r /= p;
    }
    for (std::uint64_t xi = 0; xi < pn; ++xi) {
      std::vector<std::uint64_t> x(n);
      std::uint64_t s = xi, fx = 0;
      for (std::size_t i = n; i-- > 0;) {
        x[i] = s % p;
        s /= p;
      }
      for (std::size_t i = 0; i < n; ++i) fx += d[i] * x[i] % p * x[i];
      if (fx % p != 0) continue;
      for (std::uint64_t vi = 0; vi < pn; ++vi) {
        std::uint64_t t = vi, vx = 0;
        for (std::size_t i = n; i-- > 0;) {
          vx += (t % p) * x[i];
          t /= p;
        }
        T[di * pn + vi].add_term(static_cast<std::uint32_t>(vx % p));
      }
    }
  }

  FamilyIdentityReport rep;
  std::vector<std::uint32_t> h(3 * n);
  for (std::uint64_t idx = 0; idx < grid.size(); ++idx) {
    grid.point_of(idx, h.data());
    std::uint64_t ci = 0, di = 0, vi = 0, dc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ci = ci * p + h[i];
      di = di * p + h[n + i];
      vi = vi * p + h[2 * n + i];
      dc += static_cast<std::uint64_t>(h[i]) * h[n + i];
    }
    const CycloValue rhs = T[di * pn + vi].rotated(static_cast<std::uint32_t>(dc % p)) * static_cast<std::int64_t>(pn);
    ++rep.checked;
    if (!(grid.cyclo(idx) == rhs)) ++rep.mismatches;
    const std::uint64_t base = idx % (pn * pn);  // same (d, v) with c = 0
    (void)ci;
    const double a = grid.abs(idx), b = grid.abs(base);
    if (std::abs(a - b) > 1e-9 * std::max(1.0, b)) ++rep.modulus_mismatches;
  }
  return rep;
}

VarietyChain generic_family_chain(std::size_t n) {
  const std::size_t amb = 2 * n;  // (A_1..A_n, V_1..V_n)
  VarietyChain chain;
  chain.ambient_n = amb;
  std::vector<IntPolynomial> vzero;
  for (std::size_t i = 0; i < n; ++i) vzero.push_back(IntPolynomial::variable(amb, n + i));
  const AffineVariety origin_v(amb, vzero);
  for (std::size_t j = 1; j <= n; ++j) {
    if (j == n) {
      chain.strata.push_back(Stratum::from_equations(AffineVariety::empty(amb), "empty"));
    } else if (j == 1 && n % 2 == 0) {
      IntPolynomial g(amb);
      for (std::size_t i = 0; i < n; ++i) {
        IntPolynomial m = IntPolynomial::variable(amb, n + i).pow(2);
        for (std::size_t k = 0; k < n; ++k) {
          if (k != i) m = m * IntPolynomial::variable(amb, k);
        }
        g = g + m;
      }
      chain.strata.push_back(Stratum::from_equations(AffineVariety(amb, {g}), "sum prod_{k != i} A_k V_i^2 = 0"));
    } else {
      chain.strata.push_back(Stratum::from_equations(origin_v, "V = 0"));
    }
  }
  return chain;
}

namespace {

// Specializes the A-variables of a chain on (A, V) and drops them.
VarietyChain specialize_chain(const VarietyChain& chain, std::size_t n, const std::vector<std::int64_t>& d) {
  VarietyChain out;
  out.ambient_n = n;
  std::vector<std::optional<BigInt>> vals(2 * n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = BigInt(d[i]);
  for (const auto& s : chain.strata) {
    std::vector<IntPolynomial> gens;
    for (const auto& g : s.equations->generators()) {
      const IntPolynomial sg = g.specialize(vals);
      IntPolynomial r(n);
      for (const auto& [e, c] : sg.terms()) r.add_term(Exponents(e.begin() + static_cast<std::ptrdiff_t>(n), e.end()), c);
      gens.push_back(std::move(r));
    }
    out.strata.push_back(Stratum::from_equations(AffineVariety(n, gens), s.label));
  }
  return out;
}

}  // namespace

std::uint64_t compare_specialized_chains(std::size_t n, const FieldCtx& ctx) {
  const std::uint32_t p = ctx.p();
  const VarietyChain generic = generic_family_chain(n);
  std::uint64_t mismatches = 0;
  std::vector<std::int64_t> d(n, 1);
  std::uint64_t pn = 1;
  for (std::size_t i = 0; i < n; ++i) pn *= p;
  while (true) {
    const VarietyChain spec = specialize_chain(generic, n, d);
    const VarietyChain direct = diagonal_quadratic(n, d).datum.chain;
    const CompiledChain cs(spec, ctx), cd(direct, ctx);
    std::vector<Code> v(n);
    std::vector<std::uint32_t> cdv(3 * n, 0);
    for (std::size_t i = 0; i < n; ++i) cdv[n + i] = static_cast<std::uint32_t>(d[i]);
    for (std::uint64_t t = 0; t < pn; ++t) {
      std::uint64_t r = t;
      for (std::size_t i = n; i-- > 0;) {
        v[i] = static_cast<Code>(r % p);
        cdv[2 * n + i] = v[i];
        r /= p;
      }
      const std::size_t a = cs.stratum_index(v.data()), b = cd.stratum_index(v.data());
      const std::size_t c = family_quadratic_index(cdv, n, p);
      if (a != b || c != b) ++mismatches;
    }
    std::size_t i = 0;
    while (i < n && d[i] == static_cast<std::int64_t>(p) - 1) d[i++] = 1;
    if (i == n) break;
    ++d[i];
  }
  return mismatches;
}

// ---------------------------------------------------------------------------
// Burgess-type character sums

Stratum burgess_degenerate_stratum(std::size_t r) {
  const json js = {{"predicate", "burgess_degenerate"}, {"params", {{"r", r}}}};
  return Stratum::from_predicate(
      [r](const FieldCtx&) -> PointPredicate {
        return [r](const Code* h) {
          for (std::size_t i = 0; i < 2 * r; ++i) {
            std::size_t count = 0;
            for (std::size_t j = 0; j < 2 * r; ++j) count += h[j] == h[i];
            if (count == 1) return false;
          }
          return true;
        };
      },
      js.dump(), "no simple value");
}

namespace {

std::vector<std::uint64_t> burgess_orders(std::uint32_t p, std::uint64_t max_order) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t o = 2; o <= std::min<std::uint64_t>(p - 1, max_order); ++o) {
    if ((p - 1) % o == 0) out.push_back(o);
  }
  return out;
}

SumGrid burgess_grid(std::size_t r, std::uint64_t order, const FieldCtx& ctx, const EngineOptions& opt) {
  const std::uint32_t p = ctx.p();
  const std::uint64_t size = checked_grid_size(p, 2 * r, opt.grid_cap);
  SumGrid grid(p, 2 * r, false);
  std::vector<std::uint64_t> ind(p, 0);
  for (Code y = 1; y < p; ++y) ind[y] = *ctx.mult_char(y, order).index;
  parallel_for(size, opt.workers, [&](std::size_t idx, unsigned) {
    std::vector<std::uint32_t> ab(2 * r);
    grid.point_of(idx, ab.data());
    std::vector<std::int64_t> hist(order, 0);
    for (std::uint64_t x = 0; x < p; ++x) {
      std::uint64_t A = 1, B = 1;
      for (std::size_t i = 0; i < r; ++i) {
        A = A * ((x + p - ab[i]) % p) % p;
        B = B * ((x + p - ab[r + i]) % p) % p;
      }
      if (A == 0 || B == 0) continue;
      hist[(ind[A] + order - ind[B]) % order] += 1;
    }
    std::complex<long double> s = 0;
    for (std::uint64_t k = 0; k < order; ++k) {
      if (hist[k] == 0) continue;
      const auto z = unit_root(static_cast<std::int64_t>(k), order);
      s += std::complex<long double>(z.real(), z.imag()) * static_cast<long double>(hist[k]);
    }
    grid.values()[idx] = {static_cast<double>(s.real()), static_cast<double>(s.imag())};
  });
  return grid;
}

}  // namespace

CatalogEntry burgess_family(std::size_t r, std::uint64_t max_order) {
  if (r == 0) throw DomainError("r must be at least 1");
  CatalogEntry e;
  e.name = "burgess_family";
  e.params = {{"r", r}, {"max_order", max_order}};
  e.notes = "sum_x chi(prod (x - a_i)) conj(chi(prod (x - b_i))) over parameters (a, b); Weil bound "
            "(2r - 1) sqrt(p) off the stratum without simple values.";
  e.datum.chain.ambient_n = 2 * r;
  e.datum.chain.strata.push_back(burgess_degenerate_stratum(r));
  e.datum.d = 1;
  e.datum.C = 2.0 * r - 1.0;
  e.datum.exponents = std::vector<int>{1, 2};
  std::uint64_t N = 1;
  for (std::uint64_t q = 2; q <= 2 * r; ++q) {
    if (is_prime(q)) N *= q;
  }
  e.datum.N = N;
  e.grids = [r, max_order](const FieldCtx& ctx, const EngineOptions& opt) {
    if (ctx.p() <= 2 * r) throw DomainError("burgess_family needs p > 2r");
    std::vector<LabeledGrid> out;
    for (auto o : burgess_orders(ctx.p(), max_order)) {
      out.push_back({"chi order " + std::to_string(o), burgess_grid(r, o, ctx, opt)});
    }
    return out;
  };
  return e;
}

BurgessReport check_burgess(std::size_t r, const FieldCtx& ctx, const EngineOptions& opt, std::uint64_t max_order) {
  const auto entry = burgess_family(r, max_order);
  BurgessReport rep;
  VerifyOptions vo;
  vo.workers = opt.workers;
  for (auto& g : entry.grids(ctx, opt)) {
    rep.reports.push_back(verify_kl(entry.datum, g.grid, vo));
    rep.characters.push_back(g.label);
    const auto& bad = rep.reports.back().records.at(1);
    if (bad.count > 0) rep.bad_stratum_max = std::max(rep.bad_stratum_max, bad.max_abs);
  }
  const double p = ctx.p();
  rep.witness_ok = rep.bad_stratum_max >= p - 1.0 - (2.0 * r - 1.0) * std::sqrt(p);
  return rep;
}

// ---------------------------------------------------------------------------
// Registry

std::vector<std::string> catalog_names() {
  return {"linear_space", "diagonal_quadratic", "smooth_form", "deep_stratification", "family_quadratic",
          "burgess_family"};
}

CatalogEntry build_catalog_entry(const std::string& name, const json& params) {
  try {
    if (name == "linear_space") {
      const std::size_t n = params.value("n", 3);
      std::vector<std::vector<std::int64_t>> basis;
      if (params.contains("basis")) {
        basis = params.at("basis").get<std::vector<std::vector<std::int64_t>>>();
      } else {
        for (std::size_t k = 2; k < n; ++k) {
          std::vector<std::int64_t> b(n, 0);
          b[k] = 1;
          basis.push_back(b);
        }
      }
      return linear_space(n, basis);
    }
    if (name == "diagonal_quadratic") {
      const std::size_t n = params.value("n", 3);
      const auto a = params.contains("a") ? params.at("a").get<std::vector<std::int64_t>>()
                                          : std::vector<std::int64_t>(n, 1);
      return diagonal_quadratic(n, a);
    }
    if (name == "smooth_form") {
      const std::string f = params.value("F", std::string("x1^3 + x2^3 + x3^3"));
      return smooth_form(IntPolynomial::parse(f), params.value("max_ext", 2u));
    }
    if (name == "deep_stratification") return deep_stratification(params.value("n_blocks", 2));
    if (name == "family_quadratic") return family_quadratic(params.value("n", 1));
    if (name == "burgess_family") return burgess_family(params.value("r", 1), params.value("max_order", 12));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("bad catalog parameters: ") + ex.what());
  }
  throw DomainError("unknown catalog entry '" + name + "'");
}

}  // namespace expsum
