#include "mzlab/io.hpp"

#include <cerrno>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <system_error>

namespace mzlab::io {

namespace fs = std::filesystem;
using space::DiscreteMeasure;
using space::Exponent;
using space::FunctionFamily;

namespace {

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw SchemaError(path + "." + key + ": missing required field");
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number())
    throw SchemaError(path + ": expected a number, got " +
                      std::string(j.type_name()));
  return j.get<double>();
}

std::size_t index_at(const json& j, const std::string& path) {
  if (!j.is_number_unsigned())
    throw SchemaError(path + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array");
  return j;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json exponent_json(const Exponent& e) {
  if (e.is_inf()) return json("inf");
  return json(e.value());
}

Exponent exponent_from(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Exponent::infinity();
    throw SchemaError(path + ": the only admitted string is \"inf\", got \"" +
                      j.get<std::string>() + "\"");
  }
  const double v = number_at(j, path);
  try {
    return Exponent(v);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

Exponent exponent_from_string(const std::string& text) {
  if (text == "inf") return Exponent::infinity();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (errno != 0 || end == text.c_str() || *end != '\0')
    throw std::invalid_argument("exponent: expected a number or \"inf\", got \"" +
                                text + "\"");
  return Exponent(v);
}

json measure_json(const DiscreteMeasure& mu) {
  return json{{"weights", mu.weights()}};
}

DiscreteMeasure measure_from(const json& j, const std::string& path) {
  const json& w = array_at(require(j, "weights", path), path + ".weights");
  std::vector<double> weights;
  weights.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    weights.push_back(
        number_at(w[i], path + ".weights[" + std::to_string(i) + "]"));
  try {
    return DiscreteMeasure(std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ".weights: " + e.what());
  }
}

json family_json(const FunctionFamily& fam) {
  json rows = json::array();
  for (std::size_t k = 0; k < fam.function_count(); ++k) {
    std::span<const double> f = fam.function(k);
    rows.push_back(std::vector<double>(f.begin(), f.end()));
  }
  return json{{"values", rows}, {"measure", measure_json(fam.measure())}};
}

FunctionFamily family_from(const json& j, const std::string& path) {
  DiscreteMeasure mu = measure_from(require(j, "measure", path), path + ".measure");
  const json& rows = array_at(require(j, "values", path), path + ".values");
  if (rows.empty()) throw SchemaError(path + ".values: no functions");
  std::vector<double> values;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string rpath = path + ".values[" + std::to_string(k) + "]";
    const json& row = array_at(rows[k], rpath);
    if (row.size() != mu.atom_count())
      throw SchemaError(rpath + ": expected " +
                        std::to_string(mu.atom_count()) + " atom values, got " +
                        std::to_string(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i)
      values.push_back(number_at(row[i], rpath + "[" + std::to_string(i) + "]"));
  }
  return FunctionFamily(std::move(values), rows.size(), std::move(mu));
}

json operator_json(const op::MultilinearOperator& T) {
  json in_dims = json::array();
  json in_measures = json::array();
  for (std::size_t s = 0; s < T.arity(); ++s) {
    in_dims.push_back(T.input_dim(s));
    in_measures.push_back(measure_json(T.input_measure(s)));
  }
  return json{{"arity", T.arity()},
              {"input_dims", in_dims},
              {"coeffs", T.coeffs()},
              {"output_measure", measure_json(T.output_measure())},
              {"input_measures", in_measures}};
}

op::MultilinearOperator operator_from(const json& j, const std::string& path) {
  const std::size_t arity = index_at(require(j, "arity", path), path + ".arity");
  const json& dims = array_at(require(j, "input_dims", path), path + ".input_dims");
  const json& measures =
      array_at(require(j, "input_measures", path), path + ".input_measures");
  if (measures.size() != arity)
    throw SchemaError(path + ".input_measures: expected " +
                      std::to_string(arity) + " entries, got " +
                      std::to_string(measures.size()));
  if (dims.size() != arity)
    throw SchemaError(path + ".input_dims: expected " + std::to_string(arity) +
                      " entries, got " + std::to_string(dims.size()));

  std::vector<DiscreteMeasure> ins;
  std::size_t coeff_n = 1;
  for (std::size_t s = 0; s < arity; ++s) {
    const std::string mpath =
        path + ".input_measures[" + std::to_string(s) + "]";
    ins.push_back(measure_from(measures[s], mpath));
    const std::size_t d =
        index_at(dims[s], path + ".input_dims[" + std::to_string(s) + "]");
    if (d != ins.back().atom_count())
      throw SchemaError(path + ".input_dims[" + std::to_string(s) +
                        "]: disagrees with the measure's atom count");
    coeff_n *= d;
  }
  DiscreteMeasure out =
      measure_from(require(j, "output_measure", path), path + ".output_measure");
  coeff_n *= out.atom_count();

  const json& cj = array_at(require(j, "coeffs", path), path + ".coeffs");
  if (cj.size() != coeff_n)
    throw SchemaError(path + ".coeffs: expected " + std::to_string(coeff_n) +
                      " coefficients, got " + std::to_string(cj.size()));
  std::vector<double> coeffs;
  coeffs.reserve(cj.size());
  for (std::size_t i = 0; i < cj.size(); ++i)
    coeffs.push_back(number_at(cj[i], path + ".coeffs[" + std::to_string(i) + "]"));

  try {
    return op::MultilinearOperator(std::move(ins), std::move(out),
                                   std::move(coeffs));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

json bracket_json(const solver::NormBracket& b) {
  const char* method = nullptr;
  switch (b.method) {
    case solver::NormMethod::exact_linear: method = "exact"; break;
    case solver::NormMethod::vertex_enum: method = "vertex_enum"; break;
    case solver::NormMethod::spectral: method = "spectral"; break;
    case solver::NormMethod::alternating: method = "alternating"; break;
    case solver::NormMethod::holder: method = "holder_bound"; break;
  }
  json witness = json::array();
  for (const auto& v : b.witness) witness.push_back(v);
  return json{{"lower", b.lower},
              {"upper", std::isfinite(b.upper) ? json(b.upper) : json("inf")},
              {"method", method},
              {"exact", b.exact},
              {"converged", b.converged},
              {"declared_tol", b.declared_tol},
              {"lower_witness", witness}};
}

json triple_json(std::span<const Exponent> q, const Exponent& p,
                 const Exponent& r) {
  json qs = json::array();
  for (const auto& e : q) qs.push_back(exponent_json(e));
  return json{{"q", qs}, {"p", exponent_json(p)}, {"r", exponent_json(r)}};
}

json classification_json(const classify::KClassification& c) {
  const char* status = nullptr;
  switch (c.status) {
    case classify::KStatus::finite: status = "Finite"; break;
    case classify::KStatus::infinite: status = "Infinite"; break;
    case classify::KStatus::undetermined: status = "Undetermined"; break;
  }
  json j{{"status", status}, {"provenance", c.provenance}};
  if (c.status == classify::KStatus::finite) {
    j["value_known"] = c.has_value;
    if (c.has_value) {
      j["value"] = c.value;
      j["error"] = c.error;
    }
  }
  return j;
}

json check_report_json(const CheckReport& rep) {
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json r{{"name", row.name}, {"pass", row.pass}, {"margin", row.margin}};
    if (row.advisory) r["advisory"] = true;
    rows.push_back(std::move(r));
  }
  return json{{"suite", rep.suite}, {"checks", rows}, {"pass", rep.all_pass()}};
}

json estimate_json(const estimate::KEstimate& est) {
  json witness;
  if (est.witness_op) {
    json fams = json::array();
    for (const auto& f : est.witness_families) fams.push_back(family_json(f));
    witness = json{{"operator", operator_json(*est.witness_op)},
                   {"families", fams}};
  }
  json j{{"n", est.n},
         {"lower", est.lower},
         {"lhs", est.lhs},
         {"norm_upper", est.norm_upper},
         {"rhs_product", est.rhs_product},
         {"seed", est.seed},
         {"budget", est.budget},
         {"converged", est.converged},
         {"strategy", est.strategy},
         {"bracket", bracket_json(est.bracket)},
         {"witness_digest", witness.is_null() ? json() : json(content_hash_hex(witness))}};
  return j;
}

json growth_report_json(const witnesses::GrowthReport& rep) {
  json rows = json::array();
  for (const auto& row : rep.rows)
    rows.push_back(json{{"n", row.n},
                        {"lhs", row.lhs},
                        {"norm_upper", row.norm_upper},
                        {"rhs_product", row.rhs_product},
                        {"ratio", row.ratio},
                        {"seed", row.seed}});
  return json{{"rows", rows},
              {"fitted_exponent", rep.fitted_exponent},
              {"threshold", rep.threshold},
              {"below_threshold", rep.below_threshold}};
}

json witness_bundle_json(const op::MultilinearOperator& T,
                         const std::string& kind, std::size_t n,
                         std::uint64_t seed, const solver::NormBracket& b) {
  return json{{"operator", operator_json(T)},
              {"metadata", json{{"kind", kind},
                                {"n", n},
                                {"seed", seed},
                                {"bracket", bracket_json(b)}}}};
}

std::string canonical_dump(const json& j) {
  // nlohmann objects iterate in key order, so dump() is already
  // canonical for structurally equal documents.
  return j.dump();
}

std::string content_hash_hex(const json& j) {
  const std::string bytes = canonical_dump(j);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
      throw std::runtime_error("atomic_write: short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    throw std::runtime_error("atomic_write: rename to " + path.string() +
                             " failed: " + ec.message());
}

void write_report(const fs::path& path, const json& body) {
  atomic_write(path, canonical_dump(body) + "\n");
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  json sidecar{{"written_at", stamp}, {"content_hash", content_hash_hex(body)}};
  fs::path side = path;
  side += ".sidecar.json";
  atomic_write(side, sidecar.dump(2) + "\n");
}

std::string csv_table(std::span<const CsvRow> rows) {
  std::string out = "n,lower_bound,norm_upper,lhs,rhs_product,seed\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + fmt_double(r.lower_bound) + "," +
           fmt_double(r.norm_upper) + "," + fmt_double(r.lhs) + "," +
           fmt_double(r.rhs_product) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

fs::path cache_dir() {
  if (const char* env = std::getenv("MZLAB_CACHE_DIR"); env && *env)
    return fs::path(env);
  if (const char* home = std::getenv("HOME"); home && *home)
    return fs::path(home) / ".cache" / "mzlab";
  return fs::path(".mzlab-cache");
}

std::optional<json> cache_lookup(const std::string& key) {
  const fs::path file = cache_dir() / (key + ".json");
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return json::parse(in);
  } catch (const json::parse_error&) {
    return std::nullopt;  // damaged entry: treat as a miss
  }
}

void cache_store(const std::string& key, const json& body) {
  atomic_write(cache_dir() / (key + ".json"), canonical_dump(body) + "\n");
}

}  // namespace mzlab::io
