#include "expsum/applications.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <ostream>

#include "expsum/errors.hpp"
#include "expsum/parallel.hpp"

namespace expsum {

using Code = FieldCtx::Code;

void DiscrepancySpec::validate() const {
  if (polys.empty()) throw DomainError("discrepancy needs at least one polynomial");
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (w == 0 || w > p) throw DomainError("window must satisfy 1 <= w <= p");
  if (alpha.size() != polys.size() || beta.size() != polys.size()) {
    throw DomainError("need one (alpha, beta) pair per polynomial");
  }
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].nvars() != n()) throw DomainError("polynomials must share their variables");
    if (!(0.0 <= alpha[i] && alpha[i] <= beta[i] && beta[i] <= 1.0)) {
      throw DomainError("box corners must satisfy 0 <= alpha <= beta <= 1");
    }
  }
}

namespace {

// Residues P_i(x) mod p for every x of the box, row-major.
std::vector<Code> box_values(const DiscrepancySpec& spec, const FieldCtx& ctx, const EngineOptions& opt) {
  const std::size_t n = spec.n(), r = spec.polys.size();
  const std::uint64_t size = checked_grid_size(spec.w, n, opt.enum_cap);
  std::vector<ModPoly> mp;
  for (const auto& P : spec.polys) mp.emplace_back(P, ctx);
  std::vector<Code> out(size * r);
  parallel_for(size, opt.workers, [&](std::size_t idx, unsigned) {
    std::vector<Code> x(n);
    std::uint64_t t = idx;
    for (std::size_t i = n; i-- > 0;) {
      x[i] = static_cast<Code>(t % spec.w);
      t /= spec.w;
    }
    for (std::size_t i = 0; i < r; ++i) out[idx * r + i] = mp[i].eval(x);
  });
  return out;
}

DiscrepancyResult discrepancy_from(const DiscrepancySpec& spec, const std::vector<Code>& vals) {
  const std::size_t r = spec.polys.size();
  const double p = spec.p;
  DiscrepancyResult res;
  const std::uint64_t size = vals.size() / r;
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    bool in = true;
    for (std::size_t i = 0; i < r && in; ++i) {
      // alpha <= v / p <= beta, compared as alpha p <= v <= beta p
      const double v = vals[idx * r + i];
      in = spec.alpha[i] * p <= v && v <= spec.beta[i] * p;
    }
    res.count += in;
  }
  res.expected = static_cast<double>(size);
  for (std::size_t i = 0; i < r; ++i) res.expected *= spec.beta[i] - spec.alpha[i];
  res.D = std::abs(static_cast<double>(res.count) - res.expected);
  return res;
}

}  // namespace

DiscrepancyResult discrepancy(const DiscrepancySpec& spec, const EngineOptions& opt) {
  spec.validate();
  auto ctx = FieldCtx::create(spec.p);
  return discrepancy_from(spec, box_values(spec, *ctx, opt));
}

ETReport erdos_turan_rhs(const DiscrepancySpec& spec, std::uint64_t K, const EngineOptions& opt) {
  spec.validate();
  if (K == 0) throw DomainError("K must be at least 1");
  const std::size_t r = spec.polys.size();
  const std::uint64_t n_terms = checked_grid_size(K, r, opt.grid_cap);
  auto ctx = FieldCtx::create(spec.p);
  const auto vals = box_values(spec, *ctx, opt);
  const std::uint64_t size = vals.size() / r;
  if (n_terms > opt.enum_cap / std::max<std::uint64_t>(size, 1)) throw CapExceeded("too many Erdos-Turan terms");

  ETReport rep;
  rep.K = K;
  rep.discrepancy = discrepancy_from(spec, vals);
  rep.terms.resize(n_terms);
  const std::uint64_t p = spec.p;
  parallel_for(n_terms, opt.workers, [&](std::size_t t, unsigned) {
    std::vector<std::uint64_t> A(r);
    std::uint64_t s = t;
    for (std::size_t i = r; i-- > 0;) {
      A[i] = s % K + 1;
      s /= K;
    }
    std::vector<std::int64_t> hist(p, 0);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      std::uint64_t phase = 0;
      for (std::size_t i = 0; i < r; ++i) phase += (A[i] % p) * vals[idx * r + i];
      ++hist[phase % p];
    }
    std::complex<long double> sum = 0;
    for (std::uint64_t k = 0; k < p; ++k) {
      if (hist[k] == 0) continue;
      const auto z = ctx->zeta(static_cast<std::uint32_t>(k));
      sum += std::complex<long double>(z.real(), z.imag()) * static_cast<long double>(hist[k]);
    }
    rep.terms[t] = {A, static_cast<double>(std::abs(sum))};
  });
  const double box = static_cast<double>(size);
  rep.rhs = box / static_cast<double>(K);
  for (const auto& term : rep.terms) {
    double weight = 1;
    for (auto a : term.A) weight /= static_cast<double>(std::max<std::uint64_t>(a, 1));
    rep.rhs += weight * term.abs_sum;
  }
  if (r == 1) {
    double b = box / static_cast<double>(K + 1);
    for (const auto& term : rep.terms) b += 3.0 * term.abs_sum / static_cast<double>(term.A[0]);
    rep.explicit_bound = b;
    rep.explicit_holds = rep.discrepancy.D <= b + 1e-9 * box;
  }
  return rep;
}

// ---------------------------------------------------------------------------

void ExactSum::add(double x) {
  if (!std::isfinite(x)) throw DomainError("ExactSum only accepts finite values");
  if (x == 0) return;
  int e = 0;
  const double m = std::frexp(std::abs(x), &e);  // |x| = m 2^e, m in [0.5, 1)
  // 53-bit integer mantissa times 2^(e - 53), shifted by 1074.
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  boost::multiprecision::cpp_int v = mant;
  const int shift = e - 53 + 1074;
  if (shift >= 0) {
    v <<= shift;
  } else {
    v >>= -shift;  // only subnormal inputs, whose low bits are zero
  }
  if (x < 0) v = -v;
  acc_ += v;
}

ExactSum& ExactSum::operator+=(const ExactSum& o) {
  acc_ += o.acc_;
  return *this;
}

double ExactSum::value() const {
  using boost::multiprecision::cpp_bin_float_quad;
  cpp_bin_float_quad v(acc_);
  return static_cast<double>(ldexp(v, -1074));
}

void SieveSpec::validate() const {
  if (F.nvars() < 2) throw DomainError("F needs variables (y, x1..xn) with n >= 1");
  const int D = F.degree_in(0);
  if (D < 2) throw DomainError("F must have degree at least 2 in y");
  for (const auto& [e, c] : F.terms()) {
    if (e[0] != static_cast<std::uint32_t>(D)) continue;
    const bool pure = std::all_of(e.begin() + 1, e.end(), [](std::uint32_t k) { return k == 0; });
    if (!pure || c != 1) throw DomainError("F must be monic in y");
  }
  for (const auto& [p, q] : pairs) {
    if (p == q) throw DomainError("prime pairs need p != q");
    if (!is_prime(p) || !is_prime(q)) throw DomainError("sieve moduli must be prime");
  }
  if (u_bound < 0) throw DomainError("u bound must be nonnegative");
  if (datum.chain.ambient_n != n()) throw DomainError("chain must live on A^n");
}

SieveReport sieve_double_sum(const SieveSpec& spec, const EngineOptions& opt) {
  spec.validate();
  const std::size_t n = spec.n();
  const std::uint64_t side = static_cast<std::uint64_t>(2 * spec.u_bound + 1);
  const std::uint64_t n_u = checked_grid_size(side, n, opt.grid_cap);
  SieveReport rep;
  for (const auto& [p, q] : spec.pairs) {
    auto kp = FieldCtx::create(p), kq = FieldCtx::create(q);
    const CompiledChain cp(spec.datum.chain, *kp), cq(spec.datum.chain, *kq);
    const std::int64_t qbar = static_cast<std::int64_t>(mod_inverse(q, p));
    const std::int64_t pbar = static_cast<std::int64_t>(mod_inverse(p, q));

    struct Term {
      double value;
      std::size_t j, k;
    };
    std::vector<Term> terms(n_u);
    parallel_for(n_u, opt.workers, [&](std::size_t t, unsigned) {
      std::vector<std::int64_t> hp(n), hq(n);
      std::vector<Code> cp_h(n), cq_h(n);
      std::uint64_t s = t;
      for (std::size_t i = n; i-- > 0;) {
        const std::int64_t u = static_cast<std::int64_t>(s % side) - spec.u_bound;
        s /= side;
        hp[i] = ((qbar * u) % static_cast<std::int64_t>(p) + p) % p;
        hq[i] = ((pbar * u) % static_cast<std::int64_t>(q) + q) % q;
        cp_h[i] = static_cast<Code>(hp[i]);
        cq_h[i] = static_cast<Code>(hq[i]);
      }
      const double a = std::abs(S_F(spec.F, hp, *kp, opt).value);
      const double b = std::abs(S_F(spec.F, hq, *kq, opt).value);
      terms[t] = {a * b, cp.stratum_index(cp_h.data()), cq.stratum_index(cq_h.data())};
    });
    const double C2 = spec.datum.C * spec.datum.C;
    for (const auto& t : terms) {
      rep.direct.add(t.value);
      ++rep.terms;
      auto& b = rep.buckets[{t.j, t.k}];
      ++b.count;
      b.sum.add(t.value);
      b.max_term = std::max(b.max_term, t.value);
      const double bound = C2 * std::pow(static_cast<double>(p), (n + t.j) / 2.0) *
                           std::pow(static_cast<double>(q), (n + t.k) / 2.0);
      b.bound = std::max(b.bound, bound);
      if (t.value > bound * (1 + 1e-9)) b.within = false;
    }
  }
  for (const auto& [key, b] : rep.buckets) rep.regrouped += b.sum;
  return rep;
}

void write_et_csv(const ETReport& rep, std::ostream& out) {
  const std::size_t r = rep.terms.empty() ? 0 : rep.terms.front().A.size();
  for (std::size_t i = 0; i < r; ++i) out << 'A' << i + 1 << ',';
  out << "abs\n";
  char buf[64];
  for (const auto& t : rep.terms) {
    for (auto a : t.A) out << a << ',';
    std::snprintf(buf, sizeof buf, "%.17g", t.abs_sum);
    out << buf << '\n';
  }
}

void write_sieve_csv(const SieveReport& rep, std::ostream& out) {
  out << "j,k,count,sum,max_term,bound,within\n";
  char buf[160];
  for (const auto& [key, b] : rep.buckets) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%llu,%.17g,%.17g,%.17g,%d", key.first, key.second,
                  static_cast<unsigned long long>(b.count), b.sum.value(), b.max_term, b.bound, b.within ? 1 : 0);
    out << buf << '\n';
  }
}

}  // namespace expsum
