#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "expsum/chain_io.hpp"
#include "expsum/cli.hpp"
#include "expsum/errors.hpp"
#include "expsum/grid_io.hpp"

using namespace expsum;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "expsum_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) { return ::testing::TempDir() + name; }

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Cli, SumQuadraticGaussSum) {
  const auto r = run({"sum", "--p", "3", "--f", "x1^2", "--h", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("value = 0 + 1.7320508075688772i"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("abs^2 = 3"), std::string::npos);
}

TEST(Cli, SumLinearSpace) {
  const std::string js = temp("cli_sum.json");
  const auto r = run({"sum", "--p", "5", "--variety", "x1,x2", "--n", "3", "--h", "1,0,0", "--json", js});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("integer = 5"), std::string::npos);
  const auto j = read_json(js);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_DOUBLE_EQ(j["re"].get<double>(), 5.0);
  std::remove(js.c_str());
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(run({"sum", "--p", "5", "--f", "x^^2"}).code, kExitParse);
  EXPECT_EQ(run({"sum", "--p", "6", "--f", "x1"}).code, kExitParse);
  EXPECT_EQ(run({"sum", "--f", "x1"}).code, kExitParse);
  EXPECT_EQ(run({"frobnicate"}).code, kExitParse);
  EXPECT_EQ(run({"verify", "--catalog", "linear_space", "--primes", "4"}).code, kExitParse);
  EXPECT_EQ(run({"verify", "--chain", "/nonexistent.json"}).code, kExitParse);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, CapExceeded) {
  EXPECT_EQ(run({"--enum-cap", "1000", "sum", "--p", "13", "--n", "4"}).code, kExitCap);
  EXPECT_EQ(run({"--grid-cap", "100", "grid", "--p", "11", "--n", "2"}).code, kExitCap);
}

TEST(Cli, GridRoundTrip) {
  const std::string path = temp("cli_grid.csv");
  const auto r = run({"grid", "--p", "5", "--variety", "x1^2 + x2^2", "--out", path});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto g = load_grid(path);
  EXPECT_EQ(g.size(), 25u);
  EXPECT_NEAR(g.value(0).real(), 9.0, 1e-12);
  std::remove(path.c_str());
}

TEST(Cli, VerifyCatalogAndCorruptedChain) {
  const std::string report = temp("cli_report.json");
  auto r = run({"verify", "--catalog", "linear_space", "--params", "{\"n\":3}", "--primes", "5", "--report", report});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  const auto rep = report_from_json(read_json(report)["reports"][0]);
  EXPECT_EQ(rep.p, 5u);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(report_to_json(rep)["records"], read_json(report)["reports"][0]["records"]);

  const std::string chain = temp("cli_chain.json");
  EXPECT_EQ(run({"catalog", "build", "linear_space", "--params", "{\"n\":3}", "--out", chain}).code, 0);
  auto j = read_json(chain);
  EXPECT_EQ(run({"verify", "--chain", chain, "--primes", "5,7"}).code, 0);
  std::reverse(j["strata"].begin(), j["strata"].end());
  std::ofstream(chain) << j.dump();
  EXPECT_EQ(run({"verify", "--chain", chain, "--primes", "5"}).code, kExitChain);
  std::remove(chain.c_str());
  std::remove(report.c_str());
}

TEST(Cli, VerifyDetectsWrongConstant) {
  const std::string chain = temp("cli_chain_c.json");
  run({"catalog", "build", "diagonal_quadratic", "--params", "{\"n\":3}", "--out", chain});
  auto j = read_json(chain);
  EXPECT_EQ(run({"verify", "--chain", chain, "--primes", "5,7,11,13", "--quiet"}).code, 0);
  j["kl"]["C"] = 0.5;
  std::ofstream(chain) << j.dump();
  const auto r = run({"verify", "--chain", chain, "--primes", "5"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_NE(r.out.find("violation at h"), std::string::npos);
  std::remove(chain.c_str());
}

TEST(Cli, VerifyPredicateChains) {
  EXPECT_EQ(run({"verify", "--catalog", "burgess_family", "--params", "{\"r\":1}", "--primes", "7", "--quiet"}).code, 0);
  EXPECT_EQ(run({"verify", "--catalog", "family_quadratic", "--params", "{\"n\":1}", "--primes", "3,5", "--quiet"}).code,
            0);
  const std::string chain = temp("cli_cubic.json");
  run({"catalog", "build", "smooth_form", "--params", "{\"F\":\"x1^3 + x2^3 + x3^3\"}", "--out", chain});
  const auto cf = read_chain_file(chain);
  EXPECT_FALSE(cf.datum.chain.strata[0].equations.has_value());
  EXPECT_EQ(run({"verify", "--chain", chain, "--primes", "7", "--quiet"}).code, 0);
  std::remove(chain.c_str());
}

TEST(Cli, Weights) {
  const std::string js = temp("cli_profile.json");
  auto r = run({"weights", "--p", "5", "--weight", "kloosterman", "--N", "6", "--w-max", "1", "--json", js});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto prof = profile_from_json(read_json(js));
  EXPECT_EQ(prof.roots.size(), 2u);
  EXPECT_EQ(profile_to_json(prof)["roots"], read_json(js)["roots"]);
  EXPECT_EQ(run({"weights", "--p", "5", "--n", "1", "--N", "6", "--w-max", "1"}).code, kExitCheckFailed);
  EXPECT_EQ(run({"weights", "--p", "5", "--weight", "kloosterman", "--N", "3"}).code, kExitRank);
  EXPECT_EQ(run({"weights", "--p", "5", "--weight", "kloosterman", "--tol", "2"}).code, kExitParse);
  std::remove(js.c_str());
}

TEST(Cli, CatalogList) {
  const auto r = run({"catalog", "list"});
  EXPECT_EQ(r.code, 0);
  for (const auto& name : catalog_names()) EXPECT_NE(r.out.find(name), std::string::npos);
}

TEST(Cli, DiscrepancySieveDual) {
  auto r = run({"discrepancy", "--p", "11", "--P", "x1^2", "--beta", "0.3", "--K", "5"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("holds"), std::string::npos);
  r = run({"sieve", "--F", "y^2 - x1*x2 - 1", "--pairs", "3:5", "--u-bound", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("partition exact"), std::string::npos);
  EXPECT_EQ(run({"sieve", "--F", "y^2 - x1*x2 - 1", "--pairs", "5:5"}).code, kExitParse);
  r = run({"dual", "--F", "x1^2 + x2^2 - x3^2", "--p", "7", "--v", "3,4,5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("member", 0), 0u) << r.out;
  r = run({"dual", "--F", "x1^2 + x2^2 - x3^2", "--p", "7", "--v", "1,0,0"});
  EXPECT_EQ(r.out.rfind("nonmember", 0), 0u) << r.out;
}

TEST(ChainIO, RoundTripKeepsStrata) {
  const auto e = diagonal_quadratic(4, {1, 2, 3, 5});
  const auto j = catalog_entry_to_json(e);
  const auto cf = chain_from_json(j);
  EXPECT_EQ(cf.datum.chain.depth(), e.datum.chain.depth());
  EXPECT_EQ(cf.datum.N, e.datum.N);
  EXPECT_EQ(*cf.catalog_name, "diagonal_quadratic");
  EXPECT_EQ(chain_to_json(cf.datum, cf.sum), chain_to_json(e.datum, e.spec));
  EXPECT_THROW(chain_from_json(nlohmann::json{{"strata", 1}}), ParseError);
  EXPECT_THROW(chain_from_json(nlohmann::json{{"ambient_n", 2}, {"strata", {{{"predicate", "nope"}}}}}), ParseError);
}
