#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "mzlab/classify.hpp"
#include "mzlab/estimate.hpp"
#include "mzlab/op/multilinear.hpp"
#include "mzlab/report.hpp"
#include "mzlab/solver/norm_solver.hpp"
#include "mzlab/space/exponent.hpp"
#include "mzlab/space/family.hpp"
#include "mzlab/space/measure.hpp"
#include "mzlab/witnesses.hpp"

namespace mzlab::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Malformed input document; the message names the path of the
// offending field, e.g. "$.input_measures[1].weights[3]".
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exponents serialize as numbers, with infinity as the string "inf"
// (JSON has no infinity literal).
json exponent_json(const space::Exponent& e);
space::Exponent exponent_from(const json& j, const std::string& path);
space::Exponent exponent_from_string(const std::string& text);

// {"weights": [...]}
json measure_json(const space::DiscreteMeasure& mu);
space::DiscreteMeasure measure_from(const json& j, const std::string& path);

// {"values": [[...], ...], "measure": {...}} — one row per function.
json family_json(const space::FunctionFamily& fam);
space::FunctionFamily family_from(const json& j, const std::string& path);

// {"arity": m, "input_dims": [...], "coeffs": [...] (flat row-major,
//  last input index fastest), "output_measure": {...},
//  "input_measures": [...]}
json operator_json(const op::MultilinearOperator& T);
op::MultilinearOperator operator_from(const json& j, const std::string& path);

json bracket_json(const solver::NormBracket& b);
json triple_json(std::span<const space::Exponent> q, const space::Exponent& p,
                 const space::Exponent& r);
json classification_json(const classify::KClassification& c);
json check_report_json(const CheckReport& rep);
json estimate_json(const estimate::KEstimate& est);
json growth_report_json(const witnesses::GrowthReport& rep);

// Operator schema plus a {kind, n, seed, bracket} metadata block.
json witness_bundle_json(const op::MultilinearOperator& T,
                         const std::string& kind, std::size_t n,
                         std::uint64_t seed, const solver::NormBracket& b);

// Key-sorted, minified dump: two structurally equal documents produce
// identical bytes, so hashes and written reports are reproducible.
std::string canonical_dump(const json& j);

// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string content_hash_hex(const json& j);

// Write-then-rename so readers never observe partial files.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

// Writes the canonical report bytes (deterministic for a fixed
// document) plus a "<path>.sidecar.json" holding the write timestamp
// and the content hash; the sidecar is excluded from determinism
// comparisons.
void write_report(const std::filesystem::path& path, const json& body);

// CSV hand-off table; fixed column order, %.17g values.
struct CsvRow {
  std::size_t n = 0;
  double lower_bound = 0.0;
  double norm_upper = 0.0;
  double lhs = 0.0;
  double rhs_product = 1.0;
  std::uint64_t seed = 0;
};
std::string csv_table(std::span<const CsvRow> rows);

// Result cache keyed by the canonical hash of a config document.
// Directory: $MZLAB_CACHE_DIR if set, else ~/.cache/mzlab.
std::filesystem::path cache_dir();
std::optional<json> cache_lookup(const std::string& key);
void cache_store(const std::string& key, const json& body);

}  // namespace mzlab::io
