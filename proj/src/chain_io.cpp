#include "expsum/chain_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "expsum/errors.hpp"

namespace expsum {

using json = nlohmann::json;

namespace {

json stratum_to_json(const Stratum& s) {
  if (s.equations) return s.equations->to_strings();
  return json::parse(s.predicate_json);
}

std::vector<std::string> poly_strings(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of polynomial strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError(std::string(what) + " must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

json sum_to_json(const SumSpec& s) {
  json j = {{"n", s.n}, {"f", s.f.to_string()}};
  j["variety"] = s.variety ? s.variety->to_strings() : std::vector<std::string>{};
  return j;
}

SumSpec sum_from_json(const json& j) {
  const std::size_t n = j.at("n").get<std::size_t>();
  SumSpec s(n);
  const auto eqs = poly_strings(j.value("variety", json::array()), "sum.variety");
  if (!eqs.empty()) s.variety = AffineVariety::parse(n, eqs);
  if (j.contains("f")) s.f = IntPolynomial::parse(j.at("f").get<std::string>(), VarLayout{n, false});
  return s;
}

}  // namespace

Stratum predicate_stratum_from_json(const json& j) {
  const auto name = j.at("predicate").get<std::string>();
  const json params = j.value("params", json::object());
  if (name == "dual_variety") {
    return dual_variety_stratum(IntPolynomial::parse(params.at("F").get<std::string>()),
                                params.value("max_ext", 2u));
  }
  if (name == "family_quadratic") {
    return family_quadratic_stratum(params.at("n").get<std::size_t>(), params.at("j").get<std::size_t>());
  }
  if (name == "burgess_degenerate") return burgess_degenerate_stratum(params.at("r").get<std::size_t>());
  throw ParseError("unknown stratum predicate '" + name + "'");
}

ChainFile chain_from_json(const json& j) {
  try {
    if (j.value("schema", 1) != 1) throw ParseError("unsupported chain schema");
    ChainFile cf;
    auto& chain = cf.datum.chain;
    chain.ambient_n = j.at("ambient_n").get<std::size_t>();
    for (const auto& s : j.at("strata")) {
      if (s.is_object()) {
        chain.strata.push_back(predicate_stratum_from_json(s));
      } else {
        chain.strata.push_back(Stratum::from_equations(AffineVariety::parse(chain.ambient_n, poly_strings(s, "stratum"))));
      }
    }
    if (j.contains("claimed_codims")) chain.claimed_codims = j.at("claimed_codims").get<std::vector<int>>();
    if (j.contains("kl")) {
      const auto& kl = j.at("kl");
      cf.datum.C = kl.value("C", 1.0);
      cf.datum.N = kl.value("N", std::uint64_t{1});
      cf.datum.d = kl.value("d", 0);
      if (kl.contains("exponents")) cf.datum.exponents = kl.at("exponents").get<std::vector<int>>();
      if (kl.contains("slack")) cf.datum.slack = kl.at("slack").get<double>();
    }
    if (j.contains("sum")) cf.sum = sum_from_json(j.at("sum"));
    if (j.contains("catalog")) {
      cf.catalog_name = j.at("catalog").at("name").get<std::string>();
      cf.catalog_params = j.at("catalog").value("params", json::object());
    }
    return cf;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed chain JSON: ") + e.what());
  }
}

ChainFile read_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open chain file " + path);
  try {
    return chain_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("chain file is not JSON: ") + e.what());
  }
}

json chain_to_json(const KLDatum& datum, const std::optional<SumSpec>& sum) {
  json j = {{"schema", 1}, {"ambient_n", datum.chain.ambient_n}};
  json strata = json::array();
  for (const auto& s : datum.chain.strata) strata.push_back(stratum_to_json(s));
  j["strata"] = strata;
  if (datum.chain.claimed_codims) j["claimed_codims"] = *datum.chain.claimed_codims;
  json kl = {{"C", datum.C}, {"N", datum.N}, {"d", datum.d}};
  if (datum.exponents) kl["exponents"] = *datum.exponents;
  j["kl"] = kl;
  if (sum) j["sum"] = sum_to_json(*sum);
  return j;
}

json catalog_entry_to_json(const CatalogEntry& entry) {
  json j = chain_to_json(entry.datum, entry.spec);
  j["catalog"] = {{"name", entry.name}, {"params", entry.params}};
  return j;
}

json report_to_json(const StratReport& rep) {
  json records = json::array();
  for (const auto& r : rep.records) {
    json jr = {{"index", r.index}, {"count", r.count}, {"max_abs", r.max_abs}, {"min_C", r.min_C},
               {"exponent", r.exponent}};
    if (r.witness) jr["witness"] = *r.witness;
    records.push_back(jr);
  }
  json violations = json::array();
  for (const auto& v : rep.violations) {
    violations.push_back({{"h", v.h}, {"index", v.index}, {"value", v.value}, {"bound", v.bound}});
  }
  return {{"schema", 1},
          {"p", rep.p},
          {"n", rep.n},
          {"C", rep.C},
          {"excluded_prime", rep.excluded_prime},
          {"pass", rep.pass()},
          {"measured_C", rep.measured_C()},
          {"violation_count", rep.violation_count},
          {"records", records},
          {"violations", violations}};
}

StratReport report_from_json(const json& j) {
  try {
    StratReport rep;
    rep.p = j.at("p").get<std::uint32_t>();
    rep.n = j.at("n").get<std::size_t>();
    rep.C = j.at("C").get<double>();
    rep.excluded_prime = j.at("excluded_prime").get<bool>();
    rep.violation_count = j.at("violation_count").get<std::uint64_t>();
    for (const auto& r : j.at("records")) {
      StratRecord rec;
      rec.index = r.at("index").get<std::size_t>();
      rec.count = r.at("count").get<std::uint64_t>();
      rec.max_abs = r.at("max_abs").get<double>();
      rec.min_C = r.at("min_C").get<double>();
      rec.exponent = r.at("exponent").get<int>();
      if (r.contains("witness")) rec.witness = r.at("witness").get<std::vector<std::uint32_t>>();
      rep.records.push_back(rec);
    }
    for (const auto& v : j.at("violations")) {
      rep.violations.push_back({v.at("h").get<std::vector<std::uint32_t>>(), v.at("index").get<std::size_t>(),
                                v.at("value").get<double>(), v.at("bound").get<double>()});
    }
    return rep;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what());
  }
}

void write_report_table(const StratReport& rep, std::ostream& out) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "p = %u, n = %zu, C = %g%s\n", rep.p, rep.n, rep.C,
                rep.excluded_prime ? " (p divides N: bound not claimed)" : "");
  out << buf;
  out << " index  2*exp        count          max|S|       min C  status\n";
  for (const auto& r : rep.records) {
    const bool ok = r.min_C <= rep.C * (1 + 1e-9) || r.count == 0;
    std::snprintf(buf, sizeof buf, "%6zu %6d %12llu %15.6g %11.6g  %s\n", r.index, r.exponent,
                  static_cast<unsigned long long>(r.count), r.max_abs, r.min_C,
                  r.count == 0 ? "empty" : (ok ? "ok" : "VIOLATED"));
    out << buf;
  }
  for (const auto& v : rep.violations) {
    out << "violation at h = (";
    for (std::size_t i = 0; i < v.h.size(); ++i) out << (i ? "," : "") << v.h[i];
    std::snprintf(buf, sizeof buf, "), stratum %zu: |S| = %.12g > %.12g\n", v.index, v.value, v.bound);
    out << buf;
  }
  if (rep.violation_count > rep.violations.size()) {
    out << "... " << rep.violation_count - rep.violations.size() << " more violations\n";
  }
  out << (rep.pass() ? "PASS" : "FAIL") << " (measured C = " << rep.measured_C() << ")\n";
}

json profile_to_json(const WeightProfile& prof) {
  json roots = json::array();
  for (const auto& r : prof.roots) {
    roots.push_back({{"re", r.alpha.real()}, {"im", r.alpha.imag()}, {"sign", r.sign}, {"mult", r.mult}});
  }
  return {{"schema", 1},
          {"p", prof.p},
          {"rank", prof.rank},
          {"roots", roots},
          {"weights", prof.weights()},
          {"residual", prof.residual},
          {"relative_residual", prof.relative_residual},
          {"condition", prof.condition},
          {"singular_values", prof.singular_values}};
}

WeightProfile profile_from_json(const json& j) {
  try {
    WeightProfile prof;
    prof.p = j.at("p").get<std::uint32_t>();
    const auto weights = j.at("weights").get<std::vector<double>>();
    const auto& roots = j.at("roots");
    if (weights.size() != roots.size()) throw ParseError("profile weights and roots differ in length");
    for (std::size_t i = 0; i < roots.size(); ++i) {
      SpectralRoot r;
      r.alpha = {roots[i].at("re").get<double>(), roots[i].at("im").get<double>()};
      r.sign = roots[i].at("sign").get<int>();
      r.mult = roots[i].at("mult").get<int>();
      r.amplitude = static_cast<double>(r.sign * r.mult);
      r.weight = weights[i];
      r.raw_weight = 2 * std::log(std::abs(r.alpha)) / std::log(static_cast<double>(prof.p));
      prof.roots.push_back(r);
    }
    prof.rank = j.value("rank", roots.size());
    prof.residual = j.at("residual").get<double>();
    prof.relative_residual = j.value("relative_residual", 0.0);
    prof.condition = j.value("condition", 0.0);
    prof.singular_values = j.value("singular_values", std::vector<double>{});
    return prof;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed profile JSON: ") + e.what());
  }
}

}  // namespace expsum
