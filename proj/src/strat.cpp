#include "expsum/strat.hpp"

#include <algorithm>
#include <cmath>

#include "expsum/errors.hpp"
#include "expsum/parallel.hpp"

namespace expsum {

using Code = FieldCtx::Code;

Stratum Stratum::from_equations(AffineVariety v, std::string label) {
  Stratum s;
  s.label = std::move(label);
  s.equations = std::move(v);
  return s;
}

Stratum Stratum::from_predicate(PredicateFactory f, std::string predicate_json, std::string label) {
  Stratum s;
  s.label = std::move(label);
  s.predicate = std::move(f);
  s.predicate_json = std::move(predicate_json);
  return s;
}

CompiledChain::CompiledChain(const VarietyChain& chain, const FieldCtx& ctx) : n_(chain.ambient_n) {
  for (const auto& s : chain.strata) {
    if (s.equations) {
      if (s.equations->nvars() != n_) throw DomainError("stratum equations must live in the ambient space");
      auto mv = std::make_shared<ModVariety>(*s.equations, ctx);
      tests_.emplace_back([mv](const Code* h) { return mv->contains(h); });
    } else if (s.predicate) {
      tests_.push_back(s.predicate(ctx));
    } else {
      throw DomainError("stratum has neither equations nor a predicate");
    }
  }
}

bool CompiledChain::contains(std::size_t i, const Code* h) const {
  if (i == 0) return true;
  if (i > tests_.size()) return false;
  return tests_[i - 1](h);
}

std::size_t CompiledChain::stratum_index(const Code* h) const {
  for (std::size_t i = tests_.size(); i > 0; --i) {
    if (tests_[i - 1](h)) return i;
  }
  return 0;
}

std::size_t stratum_index(const VarietyChain& chain, const std::vector<std::uint32_t>& h, const FieldCtx& ctx) {
  if (h.size() != chain.ambient_n) throw DomainError("point dimension does not match the chain");
  std::vector<Code> codes;
  for (auto v : h) codes.push_back(ctx.from_int(v));
  return CompiledChain(chain, ctx).stratum_index(codes.data());
}

namespace {

// Calls fn(idx, h) for every h in F_p^n, in parallel over idx.
template <class Fn>
void scan_grid(std::uint32_t p, std::size_t n, unsigned workers, Fn&& fn) {
  const std::uint64_t size = checked_grid_size(p, n, std::uint64_t{1} << 40);
  const std::uint64_t chunk = 4096;
  const std::uint64_t chunks = (size + chunk - 1) / chunk;
  parallel_for(chunks, workers, [&](std::size_t c, unsigned w) {
    std::vector<Code> h(n);
    const std::uint64_t begin = c * chunk, end = std::min(size, begin + chunk);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::uint64_t t = idx;
      for (std::size_t i = n; i-- > 0;) {
        h[i] = static_cast<Code>(t % p);
        t /= p;
      }
      fn(idx, h.data(), w);
    }
  });
}

std::string format_point(const Code* h, std::size_t n) {
  std::string s = "(";
  for (std::size_t i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(h[i]);
  return s + ")";
}

}  // namespace

bool validate_chain(const VarietyChain& chain, const FieldCtx& ctx, const ChainCheckOptions& opt) {
  if (ctx.m() != 1) throw DomainError("chains are validated over prime fields");
  if (ctx.p() > opt.max_prime) return false;
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < chain.ambient_n; ++i) {
    size *= ctx.p();
    if (size > opt.max_points) return false;
  }
  const CompiledChain cc(chain, ctx);
  scan_grid(ctx.p(), chain.ambient_n, opt.workers, [&](std::uint64_t, const Code* h, unsigned) {
    bool deeper = false;
    for (std::size_t i = cc.depth(); i > 0; --i) {
      const bool in = cc.contains(i, h);
      if (deeper && !in) {
        throw ChainError("X_" + std::to_string(i + 1) + " is not contained in X_" + std::to_string(i) + ": h = " +
                         format_point(h, chain.ambient_n) + " over F_" + std::to_string(ctx.p()));
      }
      deeper = in;
    }
  });
  return true;
}

std::vector<ShadowRecord> point_count_shadow(const VarietyChain& chain, const FieldCtx& ctx, double kappa,
                                             unsigned workers) {
  const CompiledChain cc(chain, ctx);
  const unsigned nw = resolve_workers(workers);
  std::vector<std::vector<std::uint64_t>> counts(nw, std::vector<std::uint64_t>(cc.depth() + 1, 0));
  scan_grid(ctx.p(), chain.ambient_n, nw, [&](std::uint64_t, const Code* h, unsigned w) {
    for (std::size_t j = 1; j <= cc.depth(); ++j) {
      if (cc.contains(j, h)) ++counts[w][j];
    }
  });
  std::vector<ShadowRecord> out;
  for (std::size_t j = 1; j <= cc.depth(); ++j) {
    std::uint64_t c = 0;
    for (const auto& v : counts) c += v[j];
    const double bound = kappa * std::pow(static_cast<double>(ctx.p()),
                                          static_cast<double>(chain.ambient_n) - static_cast<double>(j));
    out.push_back({j, c, bound, static_cast<double>(c) <= bound});
  }
  return out;
}

int KLDatum::exponent(std::size_t i) const {
  if (exponents) {
    if (i >= exponents->size()) throw DomainError("no bound exponent given for stratum " + std::to_string(i));
    return (*exponents)[i];
  }
  return d + static_cast<int>(i);
}

double StratReport::measured_C() const {
  double c = 0.0;
  for (const auto& r : records) c = std::max(c, r.min_C);
  return c;
}

StratReport verify_kl(const KLDatum& datum, const SumGrid& grid, const VerifyOptions& opt) {
  if (grid.n() != datum.chain.ambient_n) throw DomainError("grid dimension does not match the chain");
  if (datum.N == 0) throw DomainError("N must be positive");
  if (!(datum.C > 0)) throw DomainError("C must be positive");
  const std::uint32_t p = grid.p();
  auto ctx = FieldCtx::create(p);
  const CompiledChain cc(datum.chain, *ctx);
  const std::size_t depth = cc.depth();
  std::vector<double> scale(depth + 1);
  for (std::size_t i = 0; i <= depth; ++i) scale[i] = std::pow(static_cast<double>(p), 0.5 * datum.exponent(i));

  struct Local {
    std::vector<std::uint64_t> count;
    std::vector<double> max_abs;
    std::vector<std::uint64_t> arg;
    std::vector<Violation> violations;
    std::vector<std::uint64_t> violation_idx;
    std::uint64_t violation_count = 0;
  };
  const unsigned nw = resolve_workers(opt.workers);
  std::vector<Local> locals(nw);
  for (auto& l : locals) {
    l.count.assign(depth + 1, 0);
    l.max_abs.assign(depth + 1, -1.0);
    l.arg.assign(depth + 1, 0);
  }
  scan_grid(p, grid.n(), nw, [&](std::uint64_t idx, const Code* h, unsigned w) {
    Local& l = locals[w];
    const std::size_t i = cc.stratum_index(h);
    const double a = grid.abs(idx);
    ++l.count[i];
    if (a > l.max_abs[i] || (a == l.max_abs[i] && idx < l.arg[i])) {
      l.max_abs[i] = a;
      l.arg[i] = idx;
    }
    const double bound = datum.C * scale[i];
    if (a > bound + datum.slack * scale[i]) {
      ++l.violation_count;
      l.violations.push_back({std::vector<std::uint32_t>(h, h + grid.n()), i, a, bound});
      l.violation_idx.push_back(idx);
    }
  });

  StratReport rep;
  rep.p = p;
  rep.n = grid.n();
  rep.C = datum.C;
  rep.excluded_prime = datum.N % p == 0;
  std::vector<std::pair<std::uint64_t, Violation>> all;
  for (std::size_t i = 0; i <= depth; ++i) {
    StratRecord r;
    r.index = i;
    r.exponent = datum.exponent(i);
    double best = -1.0;
    std::uint64_t arg = 0;
    for (const auto& l : locals) {
      r.count += l.count[i];
      if (l.max_abs[i] > best || (l.max_abs[i] == best && l.arg[i] < arg)) {
        best = l.max_abs[i];
        arg = l.arg[i];
      }
    }
    if (r.count > 0) {
      r.max_abs = best;
      r.min_C = best / scale[i];
      r.witness = grid.point_of(arg);
    }
    rep.records.push_back(std::move(r));
  }
  for (auto& l : locals) {
    rep.violation_count += l.violation_count;
    for (std::size_t k = 0; k < l.violations.size(); ++k) all.emplace_back(l.violation_idx[k], std::move(l.violations[k]));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < all.size() && k < opt.max_violations; ++k) rep.violations.push_back(std::move(all[k].second));
  return rep;
}

std::vector<double> empirical_exponent_map(const SumGrid& grid) {
  const double lp = std::log(static_cast<double>(grid.p()));
  std::vector<double> out(grid.size());
  for (std::uint64_t i = 0; i < grid.size(); ++i) {
    const bool zero = grid.exact() ? grid.cyclo(i).is_zero() : grid.abs(i) <= 1e-9;
    out[i] = zero ? -std::numeric_limits<double>::infinity() : 2.0 * std::log(grid.abs(i)) / lp;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dual varieties

std::string to_string(DualMembership m) {
  switch (m) {
    case DualMembership::member:
      return "member";
    case DualMembership::nonmember:
      return "nonmember";
    case DualMembership::undetermined:
      return "undetermined";
  }
  return "?";
}

unsigned dual_search_bound(int delta, std::size_t n) {
  if (delta <= 2 || n <= 2) return 1;
  double b = std::pow(static_cast<double>(delta - 1), static_cast<double>(n - 2));
  return b > 64 ? 64u : static_cast<unsigned>(std::max(1.0, b));
}

namespace {

// Projective points of P^(n-1)(K), normalized so the first nonzero coordinate is 1.
template <class Fn>
void for_each_projective(std::size_t n, const FieldCtx& k, Fn&& fn) {
  checked_grid_size(k.size(), n - 1, std::uint64_t{1} << 26);
  const std::uint64_t q = k.size();
  std::vector<Code> x(n);
  for (std::size_t lead = 0; lead < n; ++lead) {
    std::fill(x.begin(), x.end(), 0);
    x[lead] = 1;
    const std::size_t free = n - lead - 1;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < free; ++i) total *= q;
    for (std::uint64_t t = 0; t < total; ++t) {
      std::uint64_t r = t;
      for (std::size_t i = n; i-- > lead + 1;) {
        x[i] = static_cast<Code>(r % q);
        r /= q;
      }
      fn(x);
    }
  }
}

struct Hypersurface {
  ModPoly F;
  std::vector<ModPoly> grad;
  Hypersurface(const IntPolynomial& f, const FieldCtx& k) : F(f, k) {
    for (std::size_t i = 0; i < f.nvars(); ++i) grad.emplace_back(f.derivative(i), k);
  }
};

void require_form(const IntPolynomial& F) {
  if (F.is_zero() || !F.is_homogeneous() || F.degree() < 1) {
    throw DomainError("a nonzero homogeneous form of positive degree is required");
  }
}

Code dot(const FieldCtx& k, const std::vector<Code>& a, const Code* b) {
  Code s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = k.add(s, k.mul(a[i], b[i]));
  return s;
}

}  // namespace

DualMembership dual_variety_membership(const IntPolynomial& F, const std::vector<std::uint32_t>& v,
                                       const FieldCtx& prime_field, unsigned max_ext) {
  require_form(F);
  const std::size_t n = F.nvars();
  if (v.size() != n) throw DomainError("v must have one entry per variable");
  if (std::all_of(v.begin(), v.end(), [&](std::uint32_t c) { return c % prime_field.p() == 0; })) {
    throw DomainError("dual variety membership needs v != 0");
  }
  for (unsigned e = 1; e <= max_ext; ++e) {
    auto k = FieldCtx::create(prime_field.p(), e);
    const Hypersurface hs(F, *k);
    std::vector<Code> vc;
    for (auto c : v) vc.push_back(k->from_int(c));
    bool found = false;
    for_each_projective(n, *k, [&](const std::vector<Code>& x) {
      if (found || hs.F.eval(x) != 0 || dot(*k, vc, x.data()) != 0) return;
      std::vector<Code> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = hs.grad[i].eval(x);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (k->sub(k->mul(g[i], vc[j]), k->mul(g[j], vc[i])) != 0) return;
        }
      }
      found = true;
    });
    if (found) return DualMembership::member;
  }
  return max_ext >= dual_search_bound(F.degree(), n) ? DualMembership::nonmember : DualMembership::undetermined;
}

DualVarietyIndex::DualVarietyIndex(const IntPolynomial& F, const FieldCtx& prime_field, unsigned max_ext)
    : n_(F.nvars()), p_(prime_field.p()) {
  require_form(F);
  const unsigned need = dual_search_bound(F.degree(), n_);
  complete_ = need <= max_ext;
  const unsigned e_max = std::min(need, max_ext);
  for (unsigned e = 1; e <= e_max; ++e) {
    auto k = FieldCtx::create(p_, e);
    const Hypersurface hs(F, *k);
    std::vector<Code> g(n_);
    std::vector<std::uint32_t> norm(n_);
    for_each_projective(n_, *k, [&](const std::vector<Code>& x) {
      if (hs.F.eval(x) != 0) return;
      for (std::size_t i = 0; i < n_; ++i) g[i] = hs.grad[i].eval(x);
      const auto lead = std::find_if(g.begin(), g.end(), [](Code c) { return c != 0; });
      if (lead == g.end()) {
        singular_points_.push_back({k, x});
        return;
      }
      const Code inv = k->inv(*lead);
      for (std::size_t i = 0; i < n_; ++i) {
        const Code c = k->mul(g[i], inv);
        if (c >= p_) return;  // gradient direction not defined over F_p
        norm[i] = c;
      }
      std::vector<Code> nc(norm.begin(), norm.end());
      if (dot(*k, nc, x.data()) != 0) return;
      members_.insert(key(norm));
    });
  }
}

std::uint64_t DualVarietyIndex::key(const std::vector<std::uint32_t>& normalized) const {
  std::uint64_t k = 0;
  for (std::size_t i = n_; i-- > 0;) k = k * p_ + normalized[i];
  return k;
}

bool DualVarietyIndex::contains(const Code* v) const {
  const auto* lead = std::find_if(v, v + n_, [](Code c) { return c != 0; });
  if (lead == v + n_) return true;
  const std::uint64_t inv = mod_inverse(*lead, p_);
  std::vector<std::uint32_t> norm(n_);
  for (std::size_t i = 0; i < n_; ++i) norm[i] = static_cast<std::uint32_t>(v[i] * inv % p_);
  if (members_.count(key(norm))) return true;
  for (const auto& sp : singular_points_) {
    std::vector<Code> vc(v, v + n_);
    if (dot(*sp.field, vc, sp.x.data()) == 0) return true;
  }
  return false;
}

bool has_singular_point(const IntPolynomial& F, std::uint32_t p, unsigned max_ext) {
  require_form(F);
  for (unsigned e = 1; e <= max_ext; ++e) {
    auto k = FieldCtx::create(p, e);
    const Hypersurface hs(F, *k);
    bool found = false;
    for_each_projective(F.nvars(), *k, [&](const std::vector<Code>& x) {
      if (found || hs.F.eval(x) != 0) return;
      for (const auto& g : hs.grad) {
        if (g.eval(x) != 0) return;
      }
      found = true;
    });
    if (found) return true;
  }
  return false;
}

}  // namespace expsum
