// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "expsum/applications.hpp"
#include "expsum/catalog.hpp"
#include "expsum/spectral.hpp"
#include "expsum/strat.hpp"
#include "expsum/sum_engine.hpp"

using namespace expsum;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

IntPolynomial random_poly(std::mt19937_64& rng, std::size_t nvars, int max_deg, int terms) {
  IntPolynomial f(nvars);
  std::uniform_int_distribution<int> deg(0, max_deg), coeff(-4, 4);
  for (int t = 0; t < terms; ++t) {
    Exponents e(nvars, 0);
    int budget = deg(rng);
    for (std::size_t i = 0; i < nvars && budget > 0; ++i) {
      std::uniform_int_distribution<int> part(0, budget);
      e[i] = static_cast<std::uint32_t>(part(rng));
      budget -= static_cast<int>(e[i]);
    }
    f.add_term(e, coeff(rng));
  }
  return f;
}

// Families used by the oracle-equivalence and Parseval checks.
SumSpec random_spec(std::mt19937_64& rng, std::size_t n, int kind) {
  SumSpec s(n);
  switch (kind) {
    case 0:
      s.f = random_poly(rng, n, 3, 3);
      break;
    case 1:
      s.variety = AffineVariety(n, {random_poly(rng, n, 2, 3)});
      s.f = random_poly(rng, n, 2, 2);
      break;
    case 2:
      s.f = random_poly(rng, n, 2, 2);
      s.twist = MultTwist{random_poly(rng, n, 2, 3), 2, 1};
      break;
    case 3: {
      IntPolynomial F = IntPolynomial::variable(n + 1, 0).pow(2);
      F = F - random_poly(rng, n, 3, 3).embed(n + 1, 1);
      s.weight = RootCount{F};
      break;
    }
    case 4:
      s.f = random_poly(rng, n, 2, 3);
      s.normalization = {-1, 1};
      break;
    default:
      s.weight = KloostermanSummand{1 + static_cast<std::int64_t>(rng() % 3)};
      break;
  }
  return s;
}

int kinds_for(std::size_t n) { return n == 1 ? 6 : 5; }

double rel_err(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

// --- criteria -------------------------------------------------------------

Outcome gauss_modulus() {
  Outcome o;
  std::size_t count = 0;
  double worst = 0;
  for (std::uint32_t p = 3; p <= 101; ++p) {
    if (!is_prime(p)) continue;
    auto ctx = FieldCtx::create(p);
    for (std::uint64_t k = 1; k + 1 < p; ++k) {
      worst = std::max(worst, std::abs(std::abs(gauss_sum(*ctx, p - 1, k)) - std::sqrt(static_cast<double>(p))));
      ++count;
    }
  }
  o.require(worst <= 1e-9, "max ||G| - sqrt p| = " + num(worst));
  if (o.ok) o.detail = std::to_string(count) + " characters, max ||G| - sqrt p| = " + num(worst);
  return o;
}

Outcome power_sums() {
  Outcome o;
  double worst = 0, ratio = 0;
  for (auto [d, p] : std::vector<std::pair<unsigned, std::uint32_t>>{{3, 7}, {5, 11}, {4, 13}, {3, 31}}) {
    const auto c = power_sum_identity_check(d, p);
    worst = std::max(worst, std::abs(c.lhs - c.rhs));
    ratio = std::max(ratio, std::abs(c.lhs) / c.bound);
    o.require(std::abs(c.lhs - c.rhs) <= 1e-6, "identity off at d=" + std::to_string(d) + " p=" + std::to_string(p));
    o.require(c.bound_ok, "Weil bound fails at d=" + std::to_string(d) + " p=" + std::to_string(p));
  }
  if (o.ok) o.detail = "max difference " + num(worst) + ", max |S| / ((d-1) sqrt p) = " + num(ratio);
  return o;
}

Outcome linear_cascade() {
  Outcome o;
  std::vector<CatalogEntry> entries = {build_catalog_entry("linear_space", {{"n", 3}}),
                                       build_catalog_entry("linear_space", {{"n", 4}}),
                                       linear_space(4, {{1, 1, 0, 0}, {0, 1, 2, 0}})};
  std::size_t grids = 0;
  for (const auto& e : entries) {
    const std::size_t n = e.datum.chain.ambient_n;
    for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
      auto ctx = FieldCtx::create(p);
      const auto grid = e.grids(*ctx, {}).front().grid;
      const auto rep = verify_kl(e.datum, grid);
      const std::string where = " (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")";
      o.require(e.datum.C == 1.0 && rep.pass() && rep.violation_count == 0, "violations" + where);
      o.require(!rep.excluded_prime, "prime excluded" + where);
      const std::int64_t top = static_cast<std::int64_t>(std::llround(std::pow(p, n - 2.0)));
      for (std::uint64_t i = 0; i < grid.size(); ++i) {
        const auto v = grid.cyclo(i).as_integer();
        o.require(v && (*v == 0 || *v == top), "grid value outside {p^(n-2), 0}" + where);
      }
      ++grids;
    }
  }
  if (o.ok) o.detail = std::to_string(grids) + " grids exact in {p^(n-2), 0}, C = 1, no violations";
  return o;
}

Outcome quadratic_cascade() {
  Outcome o;
  double worst = 0, maxC = 0;
  for (const auto& a : std::vector<std::vector<std::int64_t>>{{1, 1, 1}, {1, 2, 3}, {1, 1, 1, 1}, {1, 3, 2, 5}}) {
    const auto e = diagonal_quadratic(a.size(), a);
    for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
      if (e.datum.N % p == 0) continue;
      auto ctx = FieldCtx::create(p);
      const auto grid = e.grids(*ctx, {}).front().grid;
      const auto rep = verify_kl(e.datum, grid);
      const std::string where = " (n=" + std::to_string(a.size()) + ", p=" + std::to_string(p) + ")";
      o.require(rep.pass(), "verify_kl fails" + where);
      maxC = std::max(maxC, rep.measured_C());
      for (std::uint64_t i = 0; i < grid.size(); ++i) {
        const double err = std::abs(grid.value(i) - e.closed_form(grid.point_of(i), *ctx));
        worst = std::max(worst, err);
      }
      if (a.size() == 3) {
        const auto t0 = grid.cyclo(0).as_integer();
        o.require(t0 && *t0 == static_cast<std::int64_t>(p) * p, "T(F, 0) != p^2" + where);
      }
    }
  }
  o.require(worst <= 1e-6, "closed form differs by " + num(worst));
  if (o.ok) o.detail = "closed form max error " + num(worst) + ", measured C <= " + num(maxC) + " (C = 2)";
  return o;
}

Outcome cone_identities() {
  Outcome o;
  std::size_t checked = 0;
  for (const char* text : {"x1^2 + x2^2 + x3^2", "x1^3 + x2^3 + x3^3"}) {
    const auto F = IntPolynomial::parse(text);
    for (std::uint32_t p : {7u, 13u}) {
      auto ctx = FieldCtx::create(p);
      for (std::uint32_t a = 0; a < p; ++a) {
        for (std::uint32_t b = 0; b < p; ++b) {
          for (std::uint32_t c = 0; c < p; ++c) {
            if (a == 0 && b == 0 && c == 0) continue;
            o.require(cone_identity(F, {a, b, c}, *ctx).holds(),
                      std::string("identity fails for ") + text + " at p=" + std::to_string(p));
            ++checked;
          }
        }
      }
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " exact identities";
  return o;
}

Outcome deep_chain() {
  Outcome o;
  const auto e = deep_stratification(2);
  auto ctx = FieldCtx::create(3);
  const auto grid = e.grids(*ctx, {}).front().grid;
  const auto rep = verify_kl(e.datum, grid);
  o.require(grid.size() == 6561, "grid is not 3^8");
  o.require(rep.pass(), std::to_string(rep.violation_count) + " violations");
  o.require(rep.measured_C() <= 16.0, "measured C = " + num(rep.measured_C()));
  if (o.ok) {
    o.detail = "measured C = " + num(rep.measured_C()) + " per stratum:";
    for (const auto& r : rep.records) {
      if (r.count) o.detail += " " + std::to_string(r.index) + ":" + num(r.min_C);
    }
  }
  return o;
}

Outcome family_identity() {
  Outcome o;
  std::uint64_t checked = 0, chain_mismatch = 0;
  auto f3 = FieldCtx::create(3);
  for (std::size_t n : {1u, 2u}) {
    const auto rep = check_family_identity(n, *f3);
    o.require(rep.mismatches == 0, std::to_string(rep.mismatches) + " identity mismatches for n=" + std::to_string(n));
    o.require(rep.modulus_mismatches == 0, "modulus depends on c for n=" + std::to_string(n));
    checked += rep.checked;
    chain_mismatch += compare_specialized_chains(n, *f3);
  }
  o.require(chain_mismatch == 0, std::to_string(chain_mismatch) + " specialized-chain mismatches");
  if (o.ok) o.detail = std::to_string(checked) + " grid points exact; specialized chains agree";
  return o;
}

Outcome kloosterman_weights() {
  Outcome o;
  SumSpec kl(1);
  kl.weight = KloostermanSummand{1};
  double worst_abs = 0, worst_res = 0;
  for (std::uint32_t p : {5u, 7u}) {
    const auto prof = fit_recurrence(extension_sums(kl, p, 6));
    o.require(prof.rank == 2, "rank " + std::to_string(prof.rank) + " at p=" + std::to_string(p));
    for (const auto& r : prof.roots) {
      worst_abs = std::max(worst_abs, std::abs(std::abs(r.alpha) - std::sqrt(static_cast<double>(p))));
    }
    worst_res = std::max(worst_res, prof.residual);
  }
  o.require(worst_abs <= 1e-3, "| |alpha| - sqrt p | = " + num(worst_abs));
  o.require(worst_res <= 1e-6, "residual " + num(worst_res));
  if (o.ok) o.detail = "rank 2, max | |alpha| - sqrt p | = " + num(worst_abs) + ", residual " + num(worst_res);
  return o;
}

Outcome burgess() {
  Outcome o;
  std::string detail;
  for (std::size_t r : {1u, 2u}) {
    for (std::uint32_t p : {7u, 11u}) {
      const auto rep = check_burgess(r, *FieldCtx::create(p));
      double good = 0;
      for (const auto& sr : rep.reports) {
        o.require(sr.pass(), "violation for r=" + std::to_string(r) + " p=" + std::to_string(p));
        good = std::max(good, sr.records[0].max_abs / std::sqrt(static_cast<double>(p)));
      }
      o.require(rep.witness_ok, "no degenerate witness for r=" + std::to_string(r) + " p=" + std::to_string(p));
      detail += " r=" + std::to_string(r) + ",p=" + std::to_string(p) + ": " + num(good) + "/" +
                std::to_string(2 * r - 1);
    }
  }
  if (o.ok) o.detail = "max |S|/sqrt p vs 2r-1:" + detail;
  return o;
}

Outcome sieve_partition() {
  Outcome o;
  SieveSpec s;
  s.F = IntPolynomial::parse("y^2 - x1*x2 - 1", VarLayout{2, true});
  s.pairs = {{3, 5}};
  s.u_bound = 3;
  s.datum.chain.ambient_n = 2;
  s.datum.chain.strata.push_back(Stratum::from_equations(AffineVariety::parse(2, {"x1*x2"})));
  s.datum.chain.strata.push_back(Stratum::from_equations(AffineVariety::origin(2)));
  const auto rep = sieve_double_sum(s);
  o.require(rep.terms == 49, "expected 49 terms");
  o.require(rep.partition_exact(), "regrouped total differs from the direct total");
  if (o.ok) {
    o.detail = "total " + num(rep.direct.value()) + " over " + std::to_string(rep.buckets.size()) +
               " buckets, bit-exact";
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(0);
  double worst = 0;
  std::size_t exhaustive = 0;
  auto f3 = FieldCtx::create(3);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int kind = 0; kind < kinds_for(n); ++kind) {
      const auto s = random_spec(rng, n, kind);
      const auto a = complete_grid(s, *f3), b = enumeration_grid(s, *f3);
      for (std::uint64_t i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a.value(i), b.value(i)));
      exhaustive += a.size();
    }
  }
  std::map<std::tuple<std::uint32_t, std::size_t, int>, std::pair<SumSpec, SumGrid>> cache;
  const std::vector<std::uint32_t> primes = {3, 5, 7, 11, 13};
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t p = primes[rng() % primes.size()];
    const std::size_t n = 1 + rng() % 3;
    const int kind = static_cast<int>(rng() % kinds_for(n));
    auto ctx = FieldCtx::create(p);
    auto key = std::make_tuple(p, n, kind);
    if (!cache.count(key)) {
      auto s = random_spec(rng, n, kind);
      auto g = complete_grid(s, *ctx);
      cache.emplace(key, std::make_pair(std::move(s), std::move(g)));
    }
    auto& [spec, grid] = cache.at(key);
    std::vector<std::int64_t> h(n);
    for (auto& v : h) v = static_cast<std::int64_t>(rng() % p);
    SumSpec single = spec;
    single.h = h;
    const auto r = eval_sum(single, *ctx);
    const std::vector<std::uint32_t> hu(h.begin(), h.end());
    worst = std::max(worst, rel_err(grid.value(grid.index_of(hu)), r.value));
  }
  o.require(worst <= 1e-6, "max relative difference " + num(worst));
  if (o.ok) o.detail = std::to_string(exhaustive) + " exhaustive + 100 random entries, max rel diff " + num(worst);
  return o;
}

Outcome property_suite() {
  Outcome o;
  std::mt19937_64 rng(0);
  std::size_t instances = 0;

  // Character orthogonality.
  for (int t = 0; t < 50; ++t, ++instances) {
    std::uint32_t p = 0;
    while (!is_prime(p) || p < 3) p = 3 + static_cast<std::uint32_t>(rng() % 60);
    std::vector<std::uint64_t> orders;
    for (std::uint64_t d = 2; d <= p - 1; ++d) {
      if ((p - 1) % d == 0) orders.push_back(d);
    }
    const std::uint64_t order = orders[rng() % orders.size()];
    auto ctx = FieldCtx::create(p);
    const std::uint64_t i = rng() % order, j = rng() % order;
    std::complex<double> s = 0;
    for (FieldCtx::Code x = 1; x < p; ++x) s += ctx->mult_char(x, order, i).value * std::conj(ctx->mult_char(x, order, j).value);
    const double expect = i == j ? p - 1.0 : 0.0;
    o.require(std::abs(s - expect) <= 1e-9 * p, "orthogonality fails at p=" + std::to_string(p));
  }
  // Parseval: sum_h |S(h)|^2 = p^n sum_x |t(x)|^2.
  for (int t = 0; t < 50; ++t, ++instances) {
    const std::uint32_t p = std::vector<std::uint32_t>{3, 5, 7}[rng() % 3];
    const std::size_t n = 1 + rng() % 2;
    const auto s = random_spec(rng, n, static_cast<int>(rng() % kinds_for(n)));
    auto ctx = FieldCtx::create(p);
    const auto g = complete_grid(s, *ctx);
    double lhs = 0;
    for (std::uint64_t i = 0; i < g.size(); ++i) lhs += std::norm(g.value(i));
    const double rhs = static_cast<double>(g.size()) * sum_of_squares(s, *ctx);
    o.require(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs), "Parseval fails (instance " + std::to_string(t) + ")");
  }
  // Stratum partition counts: record counts equal #X_i - #X_(i+1) and sum to p^n.
  for (int t = 0; t < 50; ++t, ++instances) {
    const std::uint32_t p = std::vector<std::uint32_t>{3, 5, 7}[rng() % 3];
    CatalogEntry e = [&]() {
      switch (rng() % 4) {
        case 0: return linear_space(3, {{0, 0, 1}});
        case 1: return diagonal_quadratic(2, {1 + static_cast<std::int64_t>(rng() % 4), 1});
        case 2: return diagonal_quadratic(3, {1, 1, 1 + static_cast<std::int64_t>(rng() % 4)});
        default: return family_quadratic(1);
      }
    }();
    if (p == 3 && e.name == "diagonal_quadratic" && e.datum.N % 3 == 0) e = diagonal_quadratic(2, {1, 1});
    auto ctx = FieldCtx::create(p);
    const auto grid = e.grids(*ctx, {}).front().grid;
    const auto rep = verify_kl(e.datum, grid);
    const CompiledChain cc(e.datum.chain, *ctx);
    std::vector<std::uint64_t> in(cc.depth() + 2, 0);
    in[0] = grid.size();
    std::vector<std::uint32_t> h(grid.n());
    for (std::uint64_t idx = 0; idx < grid.size(); ++idx) {
      grid.point_of(idx, h.data());
      for (std::size_t i = 1; i <= cc.depth(); ++i) in[i] += cc.contains(i, h.data());
    }
    std::uint64_t total = 0;
    for (const auto& r : rep.records) {
      total += r.count;
      o.require(r.count == in[r.index] - in[r.index + 1], "partition count mismatch in " + e.name);
    }
    o.require(total == grid.size(), "strata do not cover A^n in " + e.name);
  }
  // Specialization height inequality.
  for (int t = 0; t < 50; ++t, ++instances) {
    const std::size_t r = 1 + rng() % 3, s = 1 + rng() % 2;
    IntPolynomial g(r + s);
    std::uniform_int_distribution<std::int64_t> big(-1000000, 1000000), yv(-1000, 1000);
    for (int k = 0; k < 5; ++k) {
      Exponents e(r + s, 0);
      for (auto& x : e) x = static_cast<std::uint32_t>(rng() % 3);
      g.add_term(e, big(rng));
    }
    std::vector<std::optional<BigInt>> vals(r + s);
    for (std::size_t i = 0; i < r; ++i) vals[i] = BigInt(yv(rng));
    const double lhs = g.specialize(vals).coefficient_height();
    o.require(lhs <= specialization_height_bound(g, vals) + 1e-9, "height bound fails");
  }
  if (o.ok) o.detail = std::to_string(instances) + " instances (orthogonality, Parseval, partitions, heights)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Gauss sum modulus sqrt(p), p <= 101", 5, gauss_modulus},
      {2, "power-sum identity and Weil bound", 1, power_sums},
      {3, "linear-space cascade, C = 1", 10, linear_cascade},
      {4, "diagonal quadratic cascade", 60, quadratic_cascade},
      {5, "cone point-count identity", 30, cone_identities},
      {6, "deep chain n_blocks = 2, p = 3", 300, deep_chain},
      {7, "quadratic family identity", 120, family_identity},
      {8, "Kloosterman weight recovery", 30, kloosterman_weights},
      {9, "Burgess family bounds and witness", 60, burgess},
      {10, "sieve partition identity", 10, sieve_partition},
      {11, "DFT grid vs enumeration", 30, oracle_equivalence},
      {12, "property suite", 60, property_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.limit_s) {
      o.ok = false;
      o.detail += " [over time limit]";
    }
    failed += !o.ok;
    std::printf("[%s] %2d %-40s %8.2fs (limit %gs)  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, c.limit_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
