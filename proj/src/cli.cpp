#include "expsum/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "expsum/applications.hpp"
#include "expsum/catalog.hpp"
#include "expsum/chain_io.hpp"
#include "expsum/errors.hpp"
#include "expsum/grid_io.hpp"
#include "expsum/spectral.hpp"

namespace expsum {

using json = nlohmann::json;

namespace {

constexpr const char* kCsvHelp =
    "CSV outputs:\n"
    "  grid --out x.csv       h1,...,hn,re,im,abs (row-major, h1 most significant)\n"
    "  discrepancy --csv      A1,...,Ar,abs\n"
    "  sieve --csv            j,k,count,sum,max_term,bound,within\n"
    "Any other grid extension writes the binary format (magic EXPSGRD1).\n"
    "Exit codes: 0 ok, 1 check failed, 2 parse error, 3 cap exceeded,\n"
    "4 chain containment failed, 5 sequence too short for its rank.\n";

struct RunConfig {
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::uint64_t enum_cap = std::uint64_t{1} << 26;
  std::uint64_t grid_cap = std::uint64_t{1} << 26;

  EngineOptions engine() const {
    EngineOptions o;
    o.workers = workers;
    o.enum_cap = enum_cap;
    o.grid_cap = grid_cap;
    return o;
  }
};

struct SpecArgs {
  std::uint32_t p = 0;
  std::uint32_t m = 1;
  std::size_t n = 0;
  std::string variety;
  std::string f;
  std::string g;
  std::uint64_t chi_order = 2;
  std::uint64_t chi_index = 1;
  std::string h;
  std::string weight = "none";
  std::string F;
  std::int64_t a = 1;
  int tate_weight = 0;
  int sign = 1;
};

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string::npos) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  std::vector<std::string> trimmed;
  for (auto& t : out) {
    const auto b = t.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    trimmed.push_back(t.substr(b, t.find_last_not_of(" \t") - b + 1));
  }
  return trimmed;
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& t : split(s, ",")) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (const std::exception&) {
      throw ParseError("not an integer: '" + t + "'");
    }
    if (pos != t.size()) throw ParseError("not an integer: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ",")) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw ParseError("not a number: '" + t + "'");
    }
    if (pos != t.size()) throw ParseError("not a number: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::uint32_t> parse_primes(const std::string& s) {
  std::vector<std::uint32_t> out;
  for (auto v : parse_ints(s)) {
    if (v < 2 || !is_prime(static_cast<std::uint64_t>(v))) throw DomainError(std::to_string(v) + " is not prime");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) throw ParseError("empty prime list");
  return out;
}

void check_prime(std::uint32_t p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
}

std::size_t infer_n(const std::string& text, bool with_y) {
  VarLayout layout;
  IntPolynomial::parse(text, &layout);
  if (layout.has_y && !with_y) throw ParseError("variable y is only allowed in --F");
  return layout.n_x;
}

SumSpec build_spec(const SpecArgs& a, bool need_h) {
  std::size_t n = a.n;
  const auto eqs = split(a.variety, ",;");
  if (n == 0) {
    for (const auto& e : eqs) n = std::max(n, infer_n(e, false));
    if (!a.f.empty()) n = std::max(n, infer_n(a.f, false));
    if (!a.g.empty()) n = std::max(n, infer_n(a.g, false));
    if (!a.F.empty()) n = std::max(n, infer_n(a.F, true));
    if (!a.h.empty()) n = std::max(n, parse_ints(a.h).size());
    if (a.weight == "kloosterman" || a.weight == "kl-function") n = std::max<std::size_t>(n, 1);
  }
  if (n == 0) throw ParseError("cannot infer n; pass --n");
  SumSpec s(n);
  const VarLayout lx{n, false};
  if (!eqs.empty()) {
    std::vector<IntPolynomial> gens;
    for (const auto& e : eqs) gens.push_back(IntPolynomial::parse(e, lx));
    s.variety = AffineVariety(n, gens);
  }
  if (!a.f.empty()) s.f = IntPolynomial::parse(a.f, lx);
  if (!a.g.empty()) s.twist = MultTwist{IntPolynomial::parse(a.g, lx), a.chi_order, a.chi_index};
  if (a.weight == "rootcount") {
    if (a.F.empty()) throw ParseError("--weight rootcount needs --F");
    s.weight = RootCount{IntPolynomial::parse(a.F, VarLayout{n, true})};
  } else if (a.weight == "kloosterman") {
    s.weight = KloostermanSummand{a.a};
  } else if (a.weight == "kl-function") {
    s.weight = KloostermanFunction{a.a};
  } else if (a.weight != "none") {
    throw ParseError("unknown weight '" + a.weight + "'");
  }
  s.normalization = {a.sign, a.tate_weight};
  if (need_h) {
    auto h = a.h.empty() ? std::vector<std::int64_t>(n, 0) : parse_ints(a.h);
    if (h.size() != n) throw ParseError("--h needs " + std::to_string(n) + " entries");
    s.h = h;
  }
  s.validate();
  return s;
}

void add_spec_options(CLI::App* cmd, SpecArgs& a, bool with_h) {
  cmd->add_option("--p", a.p, "prime")->required();
  cmd->add_option("--n", a.n, "number of variables (inferred when omitted)");
  cmd->add_option("--variety", a.variety, "generators of V, comma separated (default A^n)");
  cmd->add_option("--f", a.f, "additive phase f(x)");
  cmd->add_option("--g", a.g, "twist polynomial g(x) for chi(g(x))");
  cmd->add_option("--chi-order", a.chi_order, "order of chi (divides p - 1)");
  cmd->add_option("--chi-index", a.chi_index, "chi = e(index * log / order)");
  if (with_h) cmd->add_option("--h", a.h, "linear form h, comma separated");
  cmd->add_option("--weight", a.weight, "none | rootcount | kloosterman | kl-function");
  cmd->add_option("--F", a.F, "root-count polynomial in y, x1..xn");
  cmd->add_option("--a", a.a, "Kloosterman parameter");
  cmd->add_option("--tate-weight", a.tate_weight, "normalize by q^(-w/2)");
  cmd->add_option("--sign", a.sign, "overall sign");
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string fmt_complex(std::complex<double> z) {
  // Rounding noise from the exact-to-complex conversion prints as 0.
  const double tiny = 1e-15 * std::max(1.0, std::abs(z));
  if (std::abs(z.real()) < tiny) z.real(0);
  if (std::abs(z.imag()) < tiny) z.imag(0);
  std::ostringstream s;
  s << std::setprecision(17) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return s.str();
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
}

// --- sum ------------------------------------------------------------------

int cmd_sum(const SpecArgs& a, const std::string& json_out, const RunConfig& cfg, std::ostream& out) {
  check_prime(a.p);
  const auto spec = build_spec(a, true);
  auto ctx = FieldCtx::create(a.p, a.m);
  const auto r = eval_sum(spec, *ctx, cfg.engine());
  const double abs = std::abs(r.value);
  out << "q = " << ctx->size() << ", n = " << spec.n << ", points = " << r.points << '\n';
  if (r.exact) {
    out << "exact = " << r.exact->to_string() << "  (coefficients of zeta_p^0..zeta_p^(p-1))\n";
    if (auto k = r.exact->as_integer()) out << "integer = " << *k << '\n';
  }
  out << "value = " << fmt_complex(r.value) << '\n';
  out << "abs = " << fmt(abs) << '\n';
  const double sq = abs * abs;
  if (std::abs(sq - std::round(sq)) < 1e-9 * std::max(1.0, sq)) out << "abs^2 = " << std::llround(sq) << '\n';
  if (r.twist_zeros) out << "twist zeros (chi(0) = 0) = " << r.twist_zeros << '\n';
  if (!json_out.empty()) {
    json j = {{"schema", 1},        {"command", "sum"},     {"p", a.p},           {"m", a.m},
              {"n", spec.n},        {"h", *spec.h},         {"re", r.value.real()}, {"im", r.value.imag()},
              {"abs", abs},         {"points", r.points},   {"twist_zeros", r.twist_zeros}, {"seed", cfg.seed}};
    if (r.exact) j["exact"] = r.exact->counts();
    write_json(j, json_out);
  }
  return kExitOk;
}

// --- grid -----------------------------------------------------------------

int cmd_grid(const SpecArgs& a, const std::string& path, int dual_sign, const RunConfig& cfg, std::ostream& out) {
  check_prime(a.p);
  if (a.m != 1) throw DomainError("grids are over F_p (m = 1)");
  const auto spec = build_spec(a, false);
  auto ctx = FieldCtx::create(a.p);
  GridOptions go;
  go.dual_sign = dual_sign;
  const auto grid = complete_grid(spec, *ctx, cfg.engine(), go);
  double mx = 0;
  std::uint64_t arg = 0;
  for (std::uint64_t i = 0; i < grid.size(); ++i) {
    if (grid.abs(i) > mx) {
      mx = grid.abs(i);
      arg = i;
    }
  }
  out << "p = " << a.p << ", n = " << grid.n() << ", entries = " << grid.size()
      << (grid.exact() ? ", exact" : ", floating") << '\n';
  const auto h = grid.point_of(arg);
  out << "max |S| = " << fmt(mx) << " at h = (";
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << ")\n";
  if (!path.empty()) {
    save_grid(grid, path);
    out << "wrote " << path << '\n';
  }
  return kExitOk;
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string chain;
  std::string catalog;
  std::string params = "{}";
  std::string primes = "5,7,11,13";
  std::string report;
  bool quiet = false;
  std::size_t max_violations = 20;
};

int cmd_verify(const VerifyArgs& v, const RunConfig& cfg, std::ostream& out) {
  if (v.chain.empty() == v.catalog.empty()) throw ParseError("pass exactly one of --chain and --catalog");
  ChainFile cf;
  std::optional<CatalogEntry> entry;
  if (!v.chain.empty()) {
    cf = read_chain_file(v.chain);
    if (cf.catalog_name) entry = build_catalog_entry(*cf.catalog_name, cf.catalog_params);
  } else {
    json params;
    try {
      params = json::parse(v.params);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("--params is not JSON: ") + e.what());
    }
    entry = build_catalog_entry(v.catalog, params);
    cf.datum = entry->datum;
    cf.sum = entry->spec;
  }
  if (!entry && !cf.sum) throw ParseError("chain file needs a \"sum\" or \"catalog\" section");
  const auto primes = parse_primes(v.primes);

  bool all_pass = true;
  json reports = json::array();
  out << std::left << std::setw(8) << "p" << std::setw(28) << "grid" << std::setw(14) << "measured C"
      << "status\n";
  std::ostringstream tables;
  for (auto p : primes) {
    auto ctx = FieldCtx::create(p);
    ChainCheckOptions co;
    co.workers = cfg.workers;
    validate_chain(cf.datum.chain, *ctx, co);
    std::vector<LabeledGrid> grids;
    if (entry) {
      grids = entry->grids(*ctx, cfg.engine());
    } else {
      grids.push_back({"T", complete_grid(*cf.sum, *ctx, cfg.engine())});
    }
    for (const auto& g : grids) {
      VerifyOptions vo;
      vo.workers = cfg.workers;
      vo.max_violations = v.max_violations;
      const auto rep = verify_kl(cf.datum, g.grid, vo);
      const char* status = rep.excluded_prime ? "EXCLUDED" : (rep.pass() ? "PASS" : "FAIL");
      if (!rep.excluded_prime && !rep.pass()) all_pass = false;
      out << std::setw(8) << p << std::setw(28) << g.label << std::setw(14) << fmt(rep.measured_C()).substr(0, 12)
          << status << '\n';
      tables << "\n[" << g.label << "] ";
      write_report_table(rep, tables);
      json jr = report_to_json(rep);
      jr["grid"] = g.label;
      reports.push_back(jr);
    }
  }
  if (!v.quiet) out << tables.str();
  out << (all_pass ? "PASS" : "FAIL") << '\n';
  if (!v.report.empty()) write_json({{"schema", 1}, {"seed", cfg.seed}, {"reports", reports}}, v.report);
  return all_pass ? kExitOk : kExitCheckFailed;
}

// --- weights --------------------------------------------------------------

struct WeightArgs {
  std::size_t N = 6;
  double w_max = 1;
  double tol = 1e-6;
  double rel_tol = 1e-3;
  std::size_t modulus_rank = 0;
  std::string json_out;
};

int cmd_weights(const SpecArgs& a, const WeightArgs& w, const RunConfig& cfg, std::ostream& out) {
  check_prime(a.p);
  if (!(w.tol > 0 && w.tol < 1) || !(w.rel_tol > 0 && w.rel_tol < 1)) {
    throw DomainError("tolerances must lie in (0, 1)");
  }
  const auto spec = build_spec(a, true);
  if (spec.n > 2) throw DomainError("weights expects a spec in 1 or 2 variables");
  const auto seq = extension_sums(spec, a.p, w.N, cfg.engine(), w.modulus_rank);
  const auto prof = fit_recurrence(seq, w.tol);
  const auto check = weight_check(prof, w.w_max, w.rel_tol);
  out << "p = " << a.p << ", N = " << w.N << ", rank = " << prof.rank << ", residual = " << prof.residual
      << ", condition = " << prof.condition << '\n';
  out << "  alpha                                      |alpha|     weight  sign  mult\n";
  for (const auto& r : prof.roots) {
    out << "  " << std::left << std::setw(42) << fmt_complex(r.alpha).substr(0, 40) << std::setw(12)
        << fmt(std::abs(r.alpha)).substr(0, 10) << std::setw(8) << r.weight << std::setw(6) << r.sign << r.mult
        << '\n';
  }
  out << (check.pass ? "PASS" : "FAIL") << ": weights <= " << w.w_max << '\n';
  if (!w.json_out.empty()) {
    json j = profile_to_json(prof);
    j["w_max"] = w.w_max;
    j["pass"] = check.pass;
    write_json(j, w.json_out);
  }
  return check.pass ? kExitOk : kExitCheckFailed;
}

// --- catalog --------------------------------------------------------------

int cmd_catalog_list(std::ostream& out) {
  for (const auto& name : catalog_names()) {
    const auto e = build_catalog_entry(name, json::object());
    out << std::left << std::setw(22) << name << e.params.dump() << "\n    " << e.notes << '\n';
  }
  return kExitOk;
}

int cmd_catalog_build(const std::string& name, const std::string& params, const std::string& path,
                      std::ostream& out) {
  json pj;
  try {
    pj = json::parse(params);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("--params is not JSON: ") + e.what());
  }
  const auto j = catalog_entry_to_json(build_catalog_entry(name, pj));
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json(j, path);
    out << "wrote " << path << '\n';
  }
  return kExitOk;
}

// --- discrepancy ----------------------------------------------------------

struct DiscArgs {
  std::uint32_t p = 0;
  std::uint64_t w = 0;
  std::vector<std::string> P;
  std::string alpha, beta;
  std::uint64_t K = 0;
  std::string csv;
};

int cmd_discrepancy(const DiscArgs& d, const RunConfig& cfg, std::ostream& out) {
  DiscrepancySpec s;
  std::size_t n = 0;
  for (const auto& text : d.P) {
    for (const auto& piece : split(text, ";")) n = std::max(n, infer_n(piece, false));
  }
  for (const auto& text : d.P) {
    for (const auto& piece : split(text, ";")) s.polys.push_back(IntPolynomial::parse(piece, VarLayout{n, false}));
  }
  s.p = d.p;
  s.w = d.w == 0 ? d.p : d.w;
  s.alpha = d.alpha.empty() ? std::vector<double>(s.polys.size(), 0.0) : parse_doubles(d.alpha);
  s.beta = d.beta.empty() ? std::vector<double>(s.polys.size(), 1.0) : parse_doubles(d.beta);
  if (d.K == 0) {
    const auto r = discrepancy(s, cfg.engine());
    out << "count = " << r.count << ", expected = " << fmt(r.expected) << ", D = " << fmt(r.D) << '\n';
    return kExitOk;
  }
  const auto rep = erdos_turan_rhs(s, d.K, cfg.engine());
  out << "count = " << rep.discrepancy.count << ", expected = " << fmt(rep.discrepancy.expected)
      << ", D = " << fmt(rep.discrepancy.D) << '\n';
  out << "Erdos-Turan right-hand side (constant 1) = " << fmt(rep.rhs) << '\n';
  if (!d.csv.empty()) {
    std::ofstream f(d.csv);
    if (!f) throw ParseError("cannot write " + d.csv);
    write_et_csv(rep, f);
  }
  if (rep.explicit_bound) {
    out << "explicit bound w^n/(K+1) + 3 sum |S(k)|/k = " << fmt(*rep.explicit_bound) << ": "
        << (*rep.explicit_holds ? "holds" : "VIOLATED") << '\n';
    return *rep.explicit_holds ? kExitOk : kExitCheckFailed;
  }
  return kExitOk;
}

// --- sieve ----------------------------------------------------------------

struct SieveArgs {
  std::string F;
  std::string pairs;
  std::int64_t u_bound = 0;
  std::string chain;
  double C = 0;
  std::string csv;
};

int cmd_sieve(const SieveArgs& s, const RunConfig& cfg, std::ostream& out) {
  SieveSpec spec;
  VarLayout layout;
  IntPolynomial::parse(s.F, &layout);
  if (!layout.has_y) throw ParseError("--F must involve y");
  spec.F = IntPolynomial::parse(s.F, VarLayout{layout.n_x, true});
  const std::size_t n = layout.n_x;
  for (const auto& pr : split(s.pairs, ",")) {
    const auto parts = split(pr, ":");
    if (parts.size() != 2) throw ParseError("pairs look like 3:5,5:3");
    const auto ps = parse_primes(parts[0] + "," + parts[1]);
    spec.pairs.emplace_back(ps[0], ps[1]);
  }
  if (spec.pairs.empty()) throw ParseError("--pairs is empty");
  spec.u_bound = s.u_bound;
  if (!s.chain.empty()) {
    spec.datum = read_chain_file(s.chain).datum;
  } else {
    IntPolynomial prod = IntPolynomial::constant(n, 1);
    for (std::size_t i = 0; i < n; ++i) prod = prod * IntPolynomial::variable(n, i);
    spec.datum.chain.ambient_n = n;
    spec.datum.chain.strata.push_back(Stratum::from_equations(AffineVariety(n, {prod}), "h1...hn = 0"));
    spec.datum.chain.strata.push_back(Stratum::from_equations(AffineVariety::origin(n), "{0}"));
  }
  if (s.C > 0) spec.datum.C = s.C;
  const auto rep = sieve_double_sum(spec, cfg.engine());
  out << "terms = " << rep.terms << '\n';
  out << "direct total    = " << fmt(rep.direct.value()) << '\n';
  out << "regrouped total = " << fmt(rep.regrouped.value()) << '\n';
  out << "partition " << (rep.partition_exact() ? "exact" : "MISMATCH") << '\n';
  out << "  j  k     count          max term             bound\n";
  for (const auto& [key, b] : rep.buckets) {
    out << std::right << std::setw(3) << key.first << std::setw(3) << key.second << std::setw(10) << b.count
        << std::setw(18) << fmt(b.max_term).substr(0, 14) << std::setw(18) << fmt(b.bound).substr(0, 14)
        << (b.within ? "" : "  above bound") << '\n';
  }
  if (!s.csv.empty()) {
    std::ofstream f(s.csv);
    if (!f) throw ParseError("cannot write " + s.csv);
    write_sieve_csv(rep, f);
  }
  return rep.partition_exact() ? kExitOk : kExitCheckFailed;
}

// --- dual -----------------------------------------------------------------

int cmd_dual(const std::string& F, std::uint32_t p, const std::string& v, unsigned max_ext, std::ostream& out) {
  check_prime(p);
  const auto poly = IntPolynomial::parse(F);
  if (!poly.is_homogeneous()) throw DomainError("--F must be homogeneous");
  const auto vals = parse_ints(v);
  if (vals.size() != poly.nvars()) throw ParseError("--v needs one entry per variable of F");
  std::vector<std::uint32_t> vv;
  for (auto x : vals) vv.push_back(static_cast<std::uint32_t>(((x % p) + p) % p));
  if (max_ext == 0) max_ext = std::min(4u, dual_search_bound(poly.degree(), poly.nvars()));
  auto ctx = FieldCtx::create(p);
  const auto m = dual_variety_membership(poly, vv, *ctx, max_ext);
  out << to_string(m) << " (searched up to F_" << p << "^" << max_ext << ")\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponential sums over finite fields: evaluation, stratification checks, weights."};
  app.set_help_flag("--help", "print help");
  app.footer(kCsvHelp);
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
  app.add_option("--seed", cfg.seed, "seed recorded in JSON outputs");
  app.add_option("--enum-cap", cfg.enum_cap, "max points per enumeration")->check(CLI::PositiveNumber);
  app.add_option("--grid-cap", cfg.grid_cap, "max grid entries")->check(CLI::PositiveNumber);

  SpecArgs sum_args, grid_args, weight_args;
  std::string sum_json, grid_out;
  int dual_sign = 1;
  auto* sum = app.add_subcommand("sum", "evaluate one sum");
  add_spec_options(sum, sum_args, true);
  sum->add_option("--m", sum_args.m, "extension degree");
  sum->add_option("--json", sum_json, "write the result as JSON");

  auto* grid = app.add_subcommand("grid", "complete grid over all h");
  add_spec_options(grid, grid_args, false);
  grid->add_option("--out", grid_out, "grid file (.csv or binary)");
  grid->add_option("--dual-sign", dual_sign, "+1 for psi(h.x), -1 for psi(-h.x)")->check(CLI::IsMember({-1, 1}));

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check a KL datum against complete grids");
  verify->add_option("--chain", verify_args.chain, "chain JSON file");
  verify->add_option("--catalog", verify_args.catalog, "catalog entry name");
  verify->add_option("--params", verify_args.params, "catalog parameters as JSON");
  verify->add_option("--primes", verify_args.primes, "comma separated primes");
  verify->add_option("--report", verify_args.report, "write reports as JSON");
  verify->add_option("--max-violations", verify_args.max_violations, "violations kept per report");
  verify->add_flag("--quiet", verify_args.quiet, "only the summary table");

  WeightArgs w;
  auto* weights = app.add_subcommand("weights", "recover Frobenius eigenvalues from extension sums");
  add_spec_options(weights, weight_args, true);
  weights->add_option("--N", w.N, "number of extension sums");
  weights->add_option("--w-max", w.w_max, "largest allowed weight");
  weights->add_option("--tol", w.tol, "Hankel rank threshold in (0, 1)");
  weights->add_option("--rel-tol", w.rel_tol, "weight tolerance in (0, 1)");
  weights->add_option("--modulus-rank", w.modulus_rank, "model of F_(p^n): k-th irreducible");
  weights->add_option("--json", w.json_out, "write the profile as JSON");

  auto* catalog = app.add_subcommand("catalog", "built-in families");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "list entries");
  std::string build_name, build_params = "{}", build_out;
  auto* build = catalog->add_subcommand("build", "write an entry as a chain file");
  build->add_option("name", build_name, "entry name")->required();
  build->add_option("--params", build_params, "parameters as JSON");
  build->add_option("--out", build_out, "output path (default stdout)");

  DiscArgs disc_args;
  auto* disc = app.add_subcommand("discrepancy", "discrepancy of {P_i(x)/p} on a box");
  disc->add_option("--p", disc_args.p, "prime")->required();
  disc->add_option("--w", disc_args.w, "box side (default p)");
  disc->add_option("--P", disc_args.P, "polynomials (repeat or separate with ;)")->required();
  disc->add_option("--alpha", disc_args.alpha, "lower corners, comma separated");
  disc->add_option("--beta", disc_args.beta, "upper corners, comma separated");
  disc->add_option("--K", disc_args.K, "Erdos-Turan cutoff (0 = skip)");
  disc->add_option("--csv", disc_args.csv, "write the (A, |S(A)|) table");

  SieveArgs sieve_args;
  auto* sieve = app.add_subcommand("sieve", "double sum over prime pairs with stratified regrouping");
  sieve->add_option("--F", sieve_args.F, "polynomial in y, x1..xn, monic in y")->required();
  sieve->add_option("--pairs", sieve_args.pairs, "prime pairs like 3:5,5:3")->required();
  sieve->add_option("--u-bound", sieve_args.u_bound, "u ranges over [-U, U]^n");
  sieve->add_option("--chain", sieve_args.chain, "chain JSON on A^n (default {h1...hn = 0} > {0})");
  sieve->add_option("--C", sieve_args.C, "constant C of the KL datum");
  sieve->add_option("--csv", sieve_args.csv, "write the bucket table");

  std::string dual_F, dual_v;
  std::uint32_t dual_p = 0;
  unsigned dual_ext = 0;
  auto* dual = app.add_subcommand("dual", "membership of a hyperplane in the dual variety");
  dual->add_option("--F", dual_F, "homogeneous form")->required();
  dual->add_option("--p", dual_p, "prime")->required();
  dual->add_option("--v", dual_v, "hyperplane coefficients")->required();
  dual->add_option("--max-ext", dual_ext, "largest extension degree searched");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (*sum) return cmd_sum(sum_args, sum_json, cfg, out);
    if (*grid) return cmd_grid(grid_args, grid_out, dual_sign, cfg, out);
    if (*verify) return cmd_verify(verify_args, cfg, out);
    if (*weights) return cmd_weights(weight_args, w, cfg, out);
    if (*list) return cmd_catalog_list(out);
    if (*build) return cmd_catalog_build(build_name, build_params, build_out, out);
    if (*disc) return cmd_discrepancy(disc_args, cfg, out);
    if (*sieve) return cmd_sieve(sieve_args, cfg, out);
    if (*dual) return cmd_dual(dual_F, dual_p, dual_v, dual_ext, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitParse;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kExitCap;
  } catch (const ChainError& e) {
    err << "chain error: " << e.what() << '\n';
    return kExitChain;
  } catch (const RankError& e) {
    err << "rank error: " << e.what() << " (raise --N)\n";
    return kExitRank;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitParse;
}

}  // namespace expsum
