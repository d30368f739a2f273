#include "expsum/sum_engine.hpp"

#include <cmath>
#include <numbers>

#include "expsum/errors.hpp"
#include "expsum/parallel.hpp"

namespace expsum {

using Code = FieldCtx::Code;

std::uint64_t checked_grid_size(std::uint64_t q, std::size_t n, std::uint64_t cap) {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (s > cap / q) {
      throw CapExceeded(std::to_string(q) + "^" + std::to_string(n) + " points exceed the cap of " +
                        std::to_string(cap));
    }
    s *= q;
  }
  return s;
}

void SumSpec::validate() const {
  if (f.nvars() != n) throw DomainError("phase polynomial must have n variables");
  if (variety && variety->nvars() != n) throw DomainError("variety must live in A^n");
  if (twist && twist->g.nvars() != n) throw DomainError("twist polynomial must have n variables");
  if (twist && twist->order == 0) throw DomainError("character order must be positive");
  if (h && h->size() != n) throw DomainError("linear form h must have n entries");
  if (normalization.sign != 1 && normalization.sign != -1) throw DomainError("sign must be +1 or -1");
  if (normalization.tate_weight < 0) throw DomainError("Tate weight must be nonnegative");
  if (const auto* rc = std::get_if<RootCount>(&weight)) {
    if (rc->F.nvars() != n + 1) throw DomainError("root-count polynomial must have variables (y, x1..xn)");
    if (rc->F.degree_in(0) < 1) throw DomainError("root-count polynomial must have positive degree in y");
  }
  if ((std::holds_alternative<KloostermanSummand>(weight) || std::holds_alternative<KloostermanFunction>(weight)) &&
      n != 1) {
    throw DomainError("Kloosterman weights are defined on one variable");
  }
}

namespace {

// Evaluates the summand at single points and records it in a histogram
// indexed by (character exponent k, additive index j).
class PointEvaluator {
 public:
  PointEvaluator(const SumSpec& spec, const FieldCtx& ctx, bool use_h)
      : spec_(spec), ctx_(ctx), p_(ctx.p()), f_(spec.f, ctx) {
    spec.validate();
    if (spec.variety) variety_ = ModVariety(*spec.variety, ctx);
    if (spec.twist) {
      if ((ctx.p() - 1) % spec.twist->order != 0) {
        throw DomainError("character order " + std::to_string(spec.twist->order) + " does not divide p - 1");
      }
      g_ = ModPoly(spec.twist->g, ctx);
      order_ = spec.twist->order;
    }
    if (use_h && spec.h) {
      for (auto v : *spec.h) h_.push_back(ctx.from_int(v));
    }
    if (const auto* rc = std::get_if<RootCount>(&spec.weight)) {
      F_ = ModPoly(rc->F, ctx);
    }
    if (const auto* k = std::get_if<KloostermanSummand>(&spec.weight)) a_ = ctx.from_int(k->a);
    if (const auto* k = std::get_if<KloostermanFunction>(&spec.weight)) a_ = ctx.from_int(k->a);
  }

  std::uint64_t order() const { return order_; }
  std::size_t hist_size() const { return order_ * p_; }

  struct Stats {
    std::uint64_t points = 0;
    std::uint64_t twist_zeros = 0;
  };

  // Adds t(x) psi(h.x) to hist (size order * p). Returns false if x is not in V.
  bool accumulate(const Code* x, std::int64_t* hist, Stats& st, std::vector<Code>& scratch) const {
    if (variety_ && !variety_->contains(x)) return false;
    const std::size_t n = spec_.n;
    if (is_kloosterman() && x[0] == 0) return false;
    ++st.points;
    std::uint64_t k = 0;
    if (spec_.twist) {
      const Code gx = g_->eval(x);
      if (gx == 0) {
        ++st.twist_zeros;
        return true;
      }
      k = *ctx_.lifted_mult_char(gx, order_, spec_.twist->index).index;
    }
    Code phase = f_.is_zero() ? 0 : f_.eval(x);
    for (std::size_t i = 0; i < h_.size(); ++i) {
      if (h_[i] != 0 && x[i] != 0) phase = ctx_.add(phase, ctx_.mul(h_[i], x[i]));
    }
    const std::uint32_t j = ctx_.trace(phase);
    std::int64_t* row = hist + k * p_;
    switch (spec_.weight.index()) {
      case 0:
        row[j] += 1;
        break;
      case 1: {
        scratch.resize(n + 1);
        std::copy(x, x + n, scratch.begin() + 1);
        std::int64_t r = 0;
        for (std::uint64_t y = 0; y < ctx_.size(); ++y) {
          scratch[0] = static_cast<Code>(y);
          if (F_->eval(scratch.data()) == 0) ++r;
        }
        row[j] += r;
        break;
      }
      case 2: {
        const Code v = ctx_.add(x[0], ctx_.mul(a_, ctx_.inv(x[0])));
        row[(j + ctx_.trace(v)) % p_] += 1;
        break;
      }
      case 3: {
        const Code ax = ctx_.mul(a_, x[0]);
        for (std::uint64_t y = 1; y < ctx_.size(); ++y) {
          const Code yy = static_cast<Code>(y);
          const Code v = ctx_.add(yy, ctx_.mul(ax, ctx_.inv(yy)));
          row[(j + ctx_.trace(v)) % p_] += 1;
        }
        break;
      }
    }
    return true;
  }

  // Cost per point relative to a plain evaluation.
  std::uint64_t weight_cost() const {
    return spec_.weight.index() == 1 || spec_.weight.index() == 3 ? ctx_.size() : 1;
  }

 private:
  bool is_kloosterman() const { return spec_.weight.index() == 2 || spec_.weight.index() == 3; }

  const SumSpec& spec_;
  const FieldCtx& ctx_;
  std::uint32_t p_;
  ModPoly f_;
  std::optional<ModVariety> variety_;
  std::optional<ModPoly> g_;
  std::optional<ModPoly> F_;
  std::uint64_t order_ = 1;
  std::vector<Code> h_;
  Code a_ = 0;
};

std::complex<double> hist_to_complex(const std::vector<std::int64_t>& hist, std::uint64_t order,
                                     const FieldCtx& ctx) {
  const std::uint32_t p = ctx.p();
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double re = 0, im = 0;
  for (std::uint64_t k = 0; k < order; ++k) {
    for (std::uint32_t j = 0; j < p; ++j) {
      const auto c = hist[k * p + j];
      if (c == 0) continue;
      // e(k/order + j/p) with the angle reduced into [0, 1) first.
      const long double frac = std::fmod(static_cast<long double>(k) / order + static_cast<long double>(j) / p, 1.0L);
      re += c * std::cos(two_pi * frac);
      im += c * std::sin(two_pi * frac);
    }
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

double normalization_factor(const Normalization& nz, std::uint64_t q) {
  return nz.sign * std::pow(static_cast<double>(q), -0.5 * nz.tate_weight);
}

// Runs fn(x, worker) over all of F_q^n, split by the first coordinate.
template <class Fn>
void scan_space(std::size_t n, const FieldCtx& ctx, unsigned workers, Fn&& fn) {
  const std::uint64_t q = ctx.size();
  if (n == 0) {
    fn(static_cast<const Code*>(nullptr), 0u);
    return;
  }
  parallel_for(q, workers, [&](std::size_t first, unsigned w) {
    std::vector<Code> x(n, 0);
    x[0] = static_cast<Code>(first);
    while (true) {
      fn(static_cast<const Code*>(x.data()), w);
      std::size_t i = n;
      while (i > 1) {
        --i;
        if (++x[i] < q) break;
        x[i] = 0;
        if (i == 1) return;
      }
      if (n == 1) return;
    }
  });
}

}  // namespace

void for_each_point(const std::optional<AffineVariety>& v, std::size_t n, const FieldCtx& ctx,
                    const std::function<void(const Code*)>& fn, const EngineOptions& opt) {
  checked_grid_size(ctx.size(), n, opt.enum_cap);
  std::optional<ModVariety> mv;
  if (v) {
    if (v->nvars() != n) throw DomainError("variety must live in A^n");
    mv = ModVariety(*v, ctx);
  }
  scan_space(n, ctx, 1, [&](const Code* x, unsigned) {
    if (!mv || mv->contains(x)) fn(x);
  });
}

PointSet enumerate_points(const AffineVariety& v, const FieldCtx& ctx, const EngineOptions& opt) {
  PointSet out;
  out.n = v.nvars();
  for_each_point(v, v.nvars(), ctx, [&](const Code* x) { out.coords.insert(out.coords.end(), x, x + out.n); }, opt);
  return out;
}

std::uint64_t count_points(const AffineVariety& v, const FieldCtx& ctx, const EngineOptions& opt) {
  checked_grid_size(ctx.size(), v.nvars(), opt.enum_cap);
  const ModVariety mv(v, ctx);
  const unsigned workers = resolve_workers(opt.workers);
  std::vector<std::uint64_t> counts(workers, 0);
  scan_space(v.nvars(), ctx, workers, [&](const Code* x, unsigned w) {
    if (mv.contains(x)) ++counts[w];
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

EvalResult eval_sum(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt) {
  const PointEvaluator ev(spec, ctx, true);
  const std::uint64_t pts = checked_grid_size(ctx.size(), spec.n, opt.enum_cap);
  if (ev.weight_cost() > 1 && pts > opt.enum_cap / ev.weight_cost()) {
    throw CapExceeded("weighted sum needs more than " + std::to_string(opt.enum_cap) + " evaluations");
  }
  const unsigned workers = resolve_workers(opt.workers);
  std::vector<std::vector<std::int64_t>> hists(workers, std::vector<std::int64_t>(ev.hist_size(), 0));
  std::vector<PointEvaluator::Stats> stats(workers);
  std::vector<std::vector<Code>> scratch(workers);
  scan_space(spec.n, ctx, workers, [&](const Code* x, unsigned w) {
    ev.accumulate(x, hists[w].data(), stats[w], scratch[w]);
  });
  std::vector<std::int64_t> hist(ev.hist_size(), 0);
  EvalResult r;
  for (unsigned w = 0; w < workers; ++w) {
    for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += hists[w][i];
    r.points += stats[w].points;
    r.twist_zeros += stats[w].twist_zeros;
  }
  if (spec.exact()) {
    CycloValue c(ctx.p(), hist);
    if (spec.normalization.sign < 0) c = c * -1;
    r.value = c.to_complex();
    r.exact = std::move(c);
  } else {
    r.value = hist_to_complex(hist, ev.order(), ctx) * normalization_factor(spec.normalization, ctx.size());
  }
  return r;
}

double sum_of_squares(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt) {
  const PointEvaluator ev(spec, ctx, true);
  const std::uint64_t pts = checked_grid_size(ctx.size(), spec.n, opt.enum_cap);
  if (ev.weight_cost() > 1 && pts > opt.enum_cap / ev.weight_cost()) {
    throw CapExceeded("weighted sum needs more than " + std::to_string(opt.enum_cap) + " evaluations");
  }
  const unsigned workers = resolve_workers(opt.workers);
  // Per-point values are summed per worker in a fixed order within each first-coordinate slice,
  // then slice totals are combined in slice order so the float result is worker-independent.
  std::vector<long double> slice(spec.n == 0 ? 1 : ctx.size(), 0.0L);
  parallel_for(slice.size(), workers, [&](std::size_t first, unsigned) {
    std::vector<std::int64_t> hist(ev.hist_size());
    std::vector<Code> x(spec.n, 0), scratch;
    PointEvaluator::Stats st;
    if (spec.n > 0) x[0] = static_cast<Code>(first);
    long double acc = 0;
    while (true) {
      std::fill(hist.begin(), hist.end(), 0);
      if (ev.accumulate(x.data(), hist.data(), st, scratch)) acc += std::norm(hist_to_complex(hist, ev.order(), ctx));
      std::size_t i = spec.n;
      bool done = true;
      while (i > 1) {
        --i;
        if (++x[i] < ctx.size()) {
          done = false;
          break;
        }
        x[i] = 0;
      }
      if (done) break;
    }
    slice[first] = acc;
  });
  long double total = 0;
  for (auto v : slice) total += v;
  const double f = normalization_factor(spec.normalization, ctx.size());
  return static_cast<double>(total) * f * f;
}

// ---------------------------------------------------------------------------
// Grids

SumGrid::SumGrid(std::uint32_t p, std::size_t n, bool exact) : p_(p), n_(n), exact_(exact) {
  size_ = 1;
  for (std::size_t i = 0; i < n; ++i) size_ *= p;
  values_.assign(size_, {0.0, 0.0});
  if (exact_) counts_.assign(size_ * p, 0);
}

CycloValue SumGrid::cyclo(std::uint64_t idx) const {
  if (!exact_) throw DomainError("grid does not carry exact values");
  return CycloValue(p_, std::vector<std::int64_t>(counts_.begin() + static_cast<std::ptrdiff_t>(idx * p_),
                                                  counts_.begin() + static_cast<std::ptrdiff_t>((idx + 1) * p_)));
}

std::uint64_t SumGrid::index_of(const std::vector<std::uint32_t>& h) const {
  if (h.size() != n_) throw DomainError("grid index has the wrong dimension");
  std::uint64_t idx = 0;
  for (auto v : h) idx = idx * p_ + (v % p_);
  return idx;
}

void SumGrid::point_of(std::uint64_t idx, std::uint32_t* out) const {
  for (std::size_t i = n_; i-- > 0;) {
    out[i] = static_cast<std::uint32_t>(idx % p_);
    idx /= p_;
  }
}

std::vector<std::uint32_t> SumGrid::point_of(std::uint64_t idx) const {
  std::vector<std::uint32_t> h(n_);
  point_of(idx, h.data());
  return h;
}

SumGrid complete_grid(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt, const GridOptions& gopt) {
  if (ctx.m() != 1) throw DomainError("complete grids are computed over prime fields");
  if (gopt.dual_sign != 1 && gopt.dual_sign != -1) throw DomainError("dual sign must be +1 or -1");
  const std::uint32_t p = ctx.p();
  const std::size_t n = spec.n;
  const std::uint64_t size = checked_grid_size(p, n, opt.grid_cap);
  const PointEvaluator ev(spec, ctx, false);
  if (ev.weight_cost() > 1 && size > opt.enum_cap / ev.weight_cost()) {
    throw CapExceeded("weighted grid needs more than " + std::to_string(opt.enum_cap) + " evaluations");
  }
  const bool exact = spec.exact() && gopt.prefer_exact && size <= opt.exact_cap / p;
  SumGrid grid(p, n, exact);
  const unsigned workers = resolve_workers(opt.workers);
  const double factor = normalization_factor(spec.normalization, p);

  // Pointwise trace values t(x), written at the row-major index of x.
  const std::uint64_t line = size / std::max<std::uint64_t>(p, 1);
  const std::uint64_t first_count = n == 0 ? 1 : p;
  parallel_for(first_count, workers, [&](std::size_t first, unsigned) {
    std::vector<std::int64_t> hist(ev.hist_size());
    std::vector<Code> x(n, 0), scratch;
    PointEvaluator::Stats st;
    const std::uint64_t begin = n == 0 ? 0 : first * line;
    const std::uint64_t end = n == 0 ? 1 : begin + line;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      grid.point_of(idx, x.data());
      std::fill(hist.begin(), hist.end(), 0);
      ev.accumulate(x.data(), hist.data(), st, scratch);
      if (exact) {
        std::copy(hist.begin(), hist.end(), grid.counts().begin() + static_cast<std::ptrdiff_t>(idx * p));
      } else {
        grid.values()[idx] = hist_to_complex(hist, ev.order(), ctx);
      }
    }
  });

  // Length-p DFT along each axis.
  const auto& zeta = ctx.zeta_table();
  std::uint64_t stride = size;
  for (std::size_t axis = 0; axis < n; ++axis) {
    stride /= p;
    const std::uint64_t blocks = size / (stride * p);
    parallel_for(blocks * stride, workers, [&](std::size_t lineno, unsigned) {
      const std::uint64_t base = (lineno / stride) * stride * p + lineno % stride;
      if (exact) {
        std::vector<std::int64_t> in(static_cast<std::size_t>(p) * p), out(static_cast<std::size_t>(p) * p, 0);
        for (std::uint32_t x = 0; x < p; ++x) {
          std::copy_n(grid.counts().begin() + static_cast<std::ptrdiff_t>((base + x * stride) * p), p,
                      in.begin() + static_cast<std::ptrdiff_t>(x) * p);
        }
        for (std::uint32_t h = 0; h < p; ++h) {
          std::int64_t* o = out.data() + static_cast<std::size_t>(h) * p;
          for (std::uint32_t x = 0; x < p; ++x) {
            const std::uint64_t hx = static_cast<std::uint64_t>(h) * x % p;
            const std::uint32_t shift = static_cast<std::uint32_t>(gopt.dual_sign > 0 ? hx : (p - hx) % p);
            const std::int64_t* src = in.data() + static_cast<std::size_t>(x) * p;
            for (std::uint32_t i = 0; i < p; ++i) {
              const std::uint32_t t = i + shift;
              o[t >= p ? t - p : t] += src[i];
            }
          }
        }
        for (std::uint32_t h = 0; h < p; ++h) {
          std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(h) * p, p,
                      grid.counts().begin() + static_cast<std::ptrdiff_t>((base + h * stride) * p));
        }
      } else {
        std::vector<std::complex<double>> in(p);
        for (std::uint32_t x = 0; x < p; ++x) in[x] = grid.values()[base + x * stride];
        for (std::uint32_t h = 0; h < p; ++h) {
          std::complex<long double> acc = 0;
          for (std::uint32_t x = 0; x < p; ++x) {
            const std::uint64_t hx = static_cast<std::uint64_t>(h) * x % p;
            const auto& z = zeta[gopt.dual_sign > 0 ? hx : (p - hx) % p];
            acc += std::complex<long double>(in[x].real(), in[x].imag()) * std::complex<long double>(z.real(), z.imag());
          }
          grid.values()[base + h * stride] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
        }
      }
    });
  }

  if (exact) {
    parallel_for(size, workers, [&](std::size_t idx, unsigned) {
      if (spec.normalization.sign < 0) {
        for (std::uint32_t i = 0; i < p; ++i) grid.counts()[idx * p + i] *= -1;
      }
      grid.values()[idx] = grid.cyclo(idx).to_complex();
    });
  } else if (factor != 1.0) {
    for (auto& v : grid.values()) v *= factor;
  }
  return grid;
}

SumGrid enumeration_grid(const SumSpec& spec, const FieldCtx& ctx, const EngineOptions& opt) {
  if (ctx.m() != 1) throw DomainError("grids are computed over prime fields");
  const std::uint64_t size = checked_grid_size(ctx.p(), spec.n, opt.grid_cap);
  SumGrid grid(ctx.p(), spec.n, spec.exact());
  SumSpec s = spec;
  EngineOptions inner = opt;
  inner.workers = 1;
  parallel_for(size, opt.workers, [&](std::size_t idx, unsigned) {
    SumSpec local = s;
    const auto h = grid.point_of(idx);
    local.h = std::vector<std::int64_t>(h.begin(), h.end());
    const auto r = eval_sum(local, ctx, inner);
    grid.values()[idx] = r.value;
    if (r.exact) {
      std::copy(r.exact->counts().begin(), r.exact->counts().end(),
                grid.counts().begin() + static_cast<std::ptrdiff_t>(idx * ctx.p()));
    }
  });
  return grid;
}

std::uint32_t r_F(const IntPolynomial& F, const std::vector<Code>& x, const FieldCtx& ctx) {
  if (F.nvars() != x.size() + 1) throw DomainError("r_F expects a point in A^n for F in (y, x1..xn)");
  const ModPoly mf(F, ctx);
  std::vector<Code> pt(x.size() + 1);
  std::copy(x.begin(), x.end(), pt.begin() + 1);
  std::uint32_t r = 0;
  for (std::uint64_t y = 0; y < ctx.size(); ++y) {
    pt[0] = static_cast<Code>(y);
    if (mf.eval(pt) == 0) ++r;
  }
  return r;
}

namespace {

SumSpec root_count_spec(const IntPolynomial& F) {
  if (F.nvars() < 1) throw DomainError("F must have a y variable");
  SumSpec s(F.nvars() - 1);
  s.weight = RootCount{F};
  return s;
}

}  // namespace

SumGrid S_F_grid(const IntPolynomial& F, const FieldCtx& ctx, const EngineOptions& opt) {
  return complete_grid(root_count_spec(F), ctx, opt);
}

EvalResult S_F(const IntPolynomial& F, const std::vector<std::int64_t>& h, const FieldCtx& ctx,
               const EngineOptions& opt) {
  SumSpec s = root_count_spec(F);
  s.h = h;
  return eval_sum(s, ctx, opt);
}

PowerSumCheck power_sum_identity_check(unsigned d, std::uint32_t p) {
  if (d < 2) throw DomainError("d must be at least 2");
  if (!is_prime(p)) throw DomainError("p must be prime");
  if ((p - 1) % d != 0) throw DomainError("p must be congruent to 1 modulo d");
  auto ctx = FieldCtx::create(p);
  SumSpec s(1);
  s.f = IntPolynomial::variable(1, 0).pow(d);
  PowerSumCheck out;
  out.lhs = eval_sum(s, *ctx).value;
  out.rhs = 0;
  for (unsigned k = 1; k < d; ++k) out.rhs += gauss_sum(*ctx, d, k);
  out.bound = (d - 1) * std::sqrt(static_cast<double>(p));
  out.bound_ok = std::abs(out.lhs) <= out.bound + 1e-9;
  return out;
}

ConeIdentity cone_identity(const IntPolynomial& F, const std::vector<std::uint32_t>& v, const FieldCtx& ctx) {
  if (!F.is_homogeneous()) throw DomainError("the cone identity needs a homogeneous form");
  if (v.size() != F.nvars()) throw DomainError("v must have one entry per variable");
  if (std::all_of(v.begin(), v.end(), [&](std::uint32_t c) { return c % ctx.p() == 0; })) {
    throw DomainError("the cone identity needs v != 0");
  }
  const std::size_t n = F.nvars();
  SumSpec s(n);
  s.variety = AffineVariety(n, {F});
  s.h = std::vector<std::int64_t>(v.begin(), v.end());
  ConeIdentity out;
  const auto T = eval_sum(s, ctx);
  out.zeros = T.points;
  std::vector<Code> vc;
  for (auto c : v) vc.push_back(ctx.from_int(c));
  for_each_point(s.variety, n, ctx, [&](const Code* x) {
    Code dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot = ctx.add(dot, ctx.mul(vc[i], x[i]));
    if (dot == 0) ++out.section_zeros;
  });
  out.lhs = *T.exact * static_cast<std::int64_t>(ctx.p() - 1);
  out.rhs = CycloValue::integer(ctx.p(), static_cast<std::int64_t>(ctx.p() * out.section_zeros) -
                                             static_cast<std::int64_t>(out.zeros));
  return out;
}

}  // namespace expsum
