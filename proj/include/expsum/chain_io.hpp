#pragma once

// JSON forms of chains, KL data, verification reports and weight profiles.
//
// Chain file (schema 1):
//   {"schema": 1, "ambient_n": 3,
//    "strata": [["x3"], ["1"], ["1"]],            // generators per stratum; ["1"] is empty
//    "claimed_codims": [1, 3, 3],                 // optional
//    "kl": {"C": 1, "N": 1, "d": 1, "exponents": [1, 2, 3, 4]},   // optional, exponents doubled
//    "sum": {"n": 3, "variety": ["x1", "x2"], "f": "0"},           // optional
//    "catalog": {"name": "linear_space", "params": {...}}}         // optional
// A stratum may also be a predicate object {"predicate": name, "params": {...}}
// with name one of dual_variety, family_quadratic, burgess_degenerate.

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "expsum/catalog.hpp"
#include "expsum/spectral.hpp"
#include "expsum/strat.hpp"

namespace expsum {

struct ChainFile {
  KLDatum datum;
  std::optional<SumSpec> sum;
  std::optional<std::string> catalog_name;
  nlohmann::json catalog_params = nlohmann::json::object();
};

/// Throws ParseError on malformed input.
ChainFile chain_from_json(const nlohmann::json& j);
ChainFile read_chain_file(const std::string& path);
nlohmann::json chain_to_json(const KLDatum& datum, const std::optional<SumSpec>& sum = std::nullopt);
nlohmann::json catalog_entry_to_json(const CatalogEntry& entry);
/// Rebuilds a predicate stratum from its JSON form.
Stratum predicate_stratum_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const StratReport& rep);
StratReport report_from_json(const nlohmann::json& j);
/// Fixed-width table: index, exponent, count, max |S|, min C, status.
void write_report_table(const StratReport& rep, std::ostream& out);

nlohmann::json profile_to_json(const WeightProfile& prof);
WeightProfile profile_from_json(const nlohmann::json& j);

}  // namespace expsum
