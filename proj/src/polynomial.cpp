#include "expsum/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "expsum/errors.hpp"

namespace expsum {

std::string VarLayout::name(std::size_t var) const {
  if (has_y) return var == 0 ? "y" : "x" + std::to_string(var);
  return "x" + std::to_string(var + 1);
}

bool IntPolynomial::TermOrder::operator()(const Exponents& a, const Exponents& b) const {
  const auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  const auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da > db;
  return a > b;
}

IntPolynomial IntPolynomial::constant(std::size_t nvars, const BigInt& c) {
  IntPolynomial f(nvars);
  f.add_term(Exponents(nvars, 0), c);
  return f;
}

IntPolynomial IntPolynomial::variable(std::size_t nvars, std::size_t var) {
  if (var >= nvars) throw DomainError("variable index out of range");
  Exponents e(nvars, 0);
  e[var] = 1;
  return monomial(e, 1);
}

IntPolynomial IntPolynomial::monomial(const Exponents& e, const BigInt& c) {
  IntPolynomial f(e.size());
  f.add_term(e, c);
  return f;
}

void IntPolynomial::add_term(const Exponents& e, const BigInt& c) {
  if (e.size() != nvars_) throw DomainError("exponent vector length does not match nvars");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int IntPolynomial::degree() const {
  if (terms_.empty()) return -1;
  const auto& e = terms_.begin()->first;
  return static_cast<int>(std::accumulate(e.begin(), e.end(), std::uint64_t{0}));
}

int IntPolynomial::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e.at(var)));
  return d;
}

bool IntPolynomial::is_homogeneous() const {
  const int d = degree();
  for (const auto& [e, c] : terms_) {
    if (static_cast<int>(std::accumulate(e.begin(), e.end(), std::uint64_t{0})) != d) return false;
  }
  return true;
}

BigInt IntPolynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BigInt(0) : it->second;
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
  if (nvars_ != o.nvars_) throw DomainError("polynomials in different numbers of variables");
  IntPolynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

IntPolynomial IntPolynomial::operator-() const {
  IntPolynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const { return *this + (-o); }

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
  if (nvars_ != o.nvars_) throw DomainError("polynomials in different numbers of variables");
  IntPolynomial r(nvars_);
  Exponents e(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

IntPolynomial IntPolynomial::operator*(const BigInt& c) const {
  if (c == 0) return IntPolynomial(nvars_);
  IntPolynomial r = *this;
  for (auto& [e, v] : r.terms_) v *= c;
  return r;
}

IntPolynomial IntPolynomial::pow(unsigned e) const {
  IntPolynomial r = constant(nvars_, 1), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

IntPolynomial IntPolynomial::embed(std::size_t new_nvars, std::size_t offset) const {
  if (offset + nvars_ > new_nvars) throw DomainError("embedding does not fit");
  IntPolynomial r(new_nvars);
  for (const auto& [e, c] : terms_) {
    Exponents ne(new_nvars, 0);
    std::copy(e.begin(), e.end(), ne.begin() + static_cast<std::ptrdiff_t>(offset));
    r.add_term(ne, c);
  }
  return r;
}

IntPolynomial IntPolynomial::specialize(const std::vector<std::optional<BigInt>>& values) const {
  if (values.size() != nvars_) throw DomainError("specialization vector length does not match nvars");
  IntPolynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents ne = e;
    BigInt v = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (values[i] && e[i] > 0) {
        v *= boost::multiprecision::pow(*values[i], e[i]);
        ne[i] = 0;
      }
    }
    r.add_term(ne, v);
  }
  return r;
}

IntPolynomial IntPolynomial::derivative(std::size_t var) const {
  if (var >= nvars_) throw DomainError("variable index out of range");
  IntPolynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents ne = e;
    ne[var] -= 1;
    r.add_term(ne, c * e[var]);
  }
  return r;
}

BigInt IntPolynomial::evaluate(const std::vector<BigInt>& point) const {
  if (point.size() != nvars_) throw DomainError("point dimension does not match nvars");
  BigInt s = 0;
  for (const auto& [e, c] : terms_) {
    BigInt t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i]) t *= boost::multiprecision::pow(point[i], e[i]);
    }
    s += t;
  }
  return s;
}

double log_plus(const BigInt& v) {
  const BigInt a = boost::multiprecision::abs(v);
  if (a <= 1) return 0.0;
  const auto bits = boost::multiprecision::msb(a);
  if (bits < 60) return std::log(a.convert_to<double>());
  const auto shift = bits - 60;
  return std::log(static_cast<BigInt>(a >> shift).convert_to<double>()) +
         static_cast<double>(shift) * std::log(2.0);
}

double IntPolynomial::coefficient_height() const {
  BigInt mx = 0;
  for (const auto& [e, c] : terms_) mx = std::max(mx, BigInt(boost::multiprecision::abs(c)));
  return log_plus(mx);
}

double coefficient_height(const std::vector<IntPolynomial>& family) {
  double h = 0.0;
  for (const auto& f : family) h = std::max(h, f.coefficient_height());
  return h;
}

double specialization_height_bound(const IntPolynomial& g, const std::vector<std::optional<BigInt>>& values) {
  if (g.is_zero()) return 0.0;
  BigInt ymax = 0;
  for (const auto& v : values) {
    if (v) ymax = std::max(ymax, BigInt(boost::multiprecision::abs(*v)));
  }
  return g.coefficient_height() + g.degree() * log_plus(ymax) + std::log(static_cast<double>(g.terms().size()));
}

std::vector<IntPolynomial> IntPolynomial::homogeneous_components() const {
  std::map<std::uint64_t, IntPolynomial> parts;
  for (const auto& [e, c] : terms_) {
    const auto d = std::accumulate(e.begin(), e.end(), std::uint64_t{0});
    auto [it, _] = parts.try_emplace(d, IntPolynomial(nvars_));
    it->second.add_term(e, c);
  }
  std::vector<IntPolynomial> out;
  for (auto& [d, f] : parts) out.push_back(std::move(f));
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class Parser {
 public:
  Parser(std::string_view text, const VarLayout& layout) : s_(text), layout_(layout) {}

  IntPolynomial parse_all() {
    IntPolynomial f = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("cannot parse polynomial \"" + std::string(s_) + "\" at offset " +
                     std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  IntPolynomial expr() {
    skip_ws();
    IntPolynomial f(layout_.nvars());
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    IntPolynomial t = term();
    f = negate ? -t : t;
    while (true) {
      if (accept('+')) {
        f = f + term();
      } else if (accept('-')) {
        f = f - term();
      } else {
        return f;
      }
    }
  }

  IntPolynomial term() {
    IntPolynomial f = factor();
    while (accept('*')) f = f * factor();
    return f;
  }

  IntPolynomial factor() {
    IntPolynomial b = base();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected a nonnegative integer exponent");
      const std::string digits(s_.substr(start, pos_ - start));
      if (digits.size() > 4) fail("exponent too large");
      b = b.pow(static_cast<unsigned>(std::stoul(digits)));
    }
    return b;
  }

  IntPolynomial base() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      IntPolynomial f = expr();
      if (!accept(')')) fail("expected ')'");
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return IntPolynomial::constant(layout_.nvars(), BigInt(std::string(s_.substr(start, pos_ - start))));
    }
    if (c == 'y') {
      ++pos_;
      if (!layout_.has_y) fail("variable y is not available here");
      return IntPolynomial::variable(layout_.nvars(), 0);
    }
    if (c == 'x') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start) fail("variables are named x1, x2, ...");
      const auto idx = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (idx == 0 || idx > layout_.n_x) fail("variable x" + std::to_string(idx) + " out of range");
      return IntPolynomial::variable(layout_.nvars(), layout_.has_y ? idx : idx - 1);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  VarLayout layout_;
  std::size_t pos_ = 0;
};

}  // namespace

IntPolynomial IntPolynomial::parse(std::string_view text, const VarLayout& layout) {
  return Parser(text, layout).parse_all();
}

IntPolynomial IntPolynomial::parse(std::string_view text, VarLayout* inferred) {
  VarLayout layout;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == 'y') layout.has_y = true;
    if (text[i] == 'x') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j > i + 1 && j - i - 1 <= 6) {
        layout.n_x = std::max<std::size_t>(layout.n_x, std::stoul(std::string(text.substr(i + 1, j - i - 1))));
      }
    }
  }
  IntPolynomial f = parse(text, layout);
  if (inferred) *inferred = layout;
  return f;
}

std::string IntPolynomial::to_string(const VarLayout& layout) const {
  if (layout.nvars() != nvars_) throw DomainError("layout does not match the number of variables");
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += layout.name(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    const bool neg = c < 0;
    const BigInt a = neg ? BigInt(-c) : c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    if (mono.empty()) {
      out += a.str();
    } else if (a == 1) {
      out += mono;
    } else {
      out += a.str() + "*" + mono;
    }
  }
  return out;
}

std::string IntPolynomial::to_string() const { return to_string(VarLayout{nvars_, false}); }

// ---------------------------------------------------------------------------
// Varieties

AffineVariety::AffineVariety(std::size_t nvars, std::vector<IntPolynomial> generators,
                             std::optional<int> claimed_dim)
    : nvars_(nvars), claimed_dim_(claimed_dim) {
  for (auto& g : generators) {
    if (g.nvars() != nvars) throw DomainError("generator has the wrong number of variables");
    if (!g.is_zero()) generators_.push_back(std::move(g));
  }
}

AffineVariety AffineVariety::parse(std::size_t nvars, const std::vector<std::string>& generators) {
  std::vector<IntPolynomial> gens;
  for (const auto& s : generators) gens.push_back(IntPolynomial::parse(s, VarLayout{nvars, false}));
  return AffineVariety(nvars, std::move(gens));
}

AffineVariety AffineVariety::origin(std::size_t nvars) {
  std::vector<IntPolynomial> gens;
  for (std::size_t i = 0; i < nvars; ++i) gens.push_back(IntPolynomial::variable(nvars, i));
  return AffineVariety(nvars, std::move(gens), 0);
}

AffineVariety AffineVariety::empty(std::size_t nvars) {
  return AffineVariety(nvars, {IntPolynomial::constant(nvars, 1)});
}

std::vector<std::string> AffineVariety::to_strings() const {
  std::vector<std::string> out;
  for (const auto& g : generators_) out.push_back(g.to_string());
  return out;
}

AffineVariety AffineVariety::union_of(const std::vector<AffineVariety>& parts) {
  if (parts.empty()) throw DomainError("union of no varieties");
  const std::size_t n = parts.front().nvars();
  std::vector<IntPolynomial> gens = parts.front().generators();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    if (parts[k].nvars() != n) throw DomainError("union of varieties in different ambient spaces");
    std::vector<IntPolynomial> next;
    for (const auto& a : gens) {
      for (const auto& b : parts[k].generators()) {
        IntPolynomial prod = a * b;
        if (std::find(next.begin(), next.end(), prod) == next.end()) next.push_back(std::move(prod));
      }
    }
    gens = std::move(next);
    if (gens.empty()) break;  // one part is all of A^n
  }
  return AffineVariety(n, std::move(gens));
}

AffineVariety AffineVariety::intersect(const AffineVariety& o) const {
  if (o.nvars_ != nvars_) throw DomainError("intersection of varieties in different ambient spaces");
  std::vector<IntPolynomial> gens = generators_;
  gens.insert(gens.end(), o.generators_.begin(), o.generators_.end());
  return AffineVariety(nvars_, std::move(gens));
}

AffineVariety AffineVariety::homogeneous_closure() const {
  std::vector<IntPolynomial> gens;
  for (const auto& g : generators_) {
    for (auto& c : g.homogeneous_components()) gens.push_back(std::move(c));
  }
  return AffineVariety(nvars_, std::move(gens));
}

// ---------------------------------------------------------------------------
// Evaluation mod p

FieldCtx::Code reduce_mod(const BigInt& c, const FieldCtx& ctx) {
  BigInt r = c % ctx.p();
  if (r < 0) r += ctx.p();
  return ctx.from_int(r.convert_to<std::int64_t>());
}

ModPoly::ModPoly(const IntPolynomial& f, const FieldCtx& ctx) : ctx_(&ctx), nvars_(f.nvars()) {
  for (const auto& [e, c] : f.terms()) {
    const auto code = reduce_mod(c, ctx);
    if (code == 0) continue;
    Term t{code, {}};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i]) t.powers.emplace_back(static_cast<std::uint32_t>(i), e[i]);
    }
    terms_.push_back(std::move(t));
  }
}

FieldCtx::Code ModPoly::eval(const FieldCtx::Code* point) const {
  const FieldCtx& k = *ctx_;
  if (k.m() == 1) {
    const std::uint64_t p = k.p();
    std::uint64_t s = 0;
    for (const auto& t : terms_) {
      std::uint64_t v = t.coeff;
      for (const auto& [var, e] : t.powers) {
        const std::uint64_t x = point[var];
        for (std::uint32_t j = 0; j < e; ++j) v = v * x % p;
        if (v == 0) break;
      }
      s += v;
    }
    return static_cast<FieldCtx::Code>(s % p);
  }
  FieldCtx::Code s = 0;
  for (const auto& t : terms_) {
    FieldCtx::Code v = t.coeff;
    for (const auto& [var, e] : t.powers) {
      v = k.mul(v, k.pow(point[var], e));
      if (v == 0) break;
    }
    s = k.add(s, v);
  }
  return s;
}

ModVariety::ModVariety(const AffineVariety& v, const FieldCtx& ctx) : nvars_(v.nvars()) {
  for (const auto& g : v.generators()) gens_.emplace_back(g, ctx);
}

bool ModVariety::contains(const FieldCtx::Code* point) const {
  for (const auto& g : gens_) {
    if (g.eval(point) != 0) return false;
  }
  return true;
}

FieldElem eval_mod(const IntPolynomial& f, const std::vector<FieldElem>& point) {
  if (point.size() != f.nvars()) throw DomainError("point dimension does not match nvars");
  if (point.empty()) throw DomainError("eval_mod needs at least one coordinate to fix the field");
  const FieldCtx& ctx = point.front().ctx();
  std::vector<FieldCtx::Code> codes;
  for (const auto& x : point) {
    if (&x.ctx() != &ctx) throw DomainError("point coordinates live in different fields");
    codes.push_back(x.code());
  }
  return {ctx, ModPoly(f, ctx).eval(codes)};
}

}  // namespace expsum
