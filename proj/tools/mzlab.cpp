// mzlab — command-line laboratory for multilinear extension constants
// on finite weighted L^p spaces.
//
// Subcommands: classify, moment, norm, estimate, witness, verify,
// report. Every command prints a human-readable summary on stdout and
// can emit a canonical JSON report (deterministic bytes for a fixed
// config + seed; timestamps live in a .sidecar.json next to the
// report). Exit codes: 0 success, 1 failed verification check (or an
// internal computation failure), 2 usage/schema error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mzlab/classify.hpp"
#include "mzlab/estimate.hpp"
#include "mzlab/io.hpp"
#include "mzlab/op/multilinear.hpp"
#include "mzlab/report.hpp"
#include "mzlab/rng/philox.hpp"
#include "mzlab/solver/norm_solver.hpp"
#include "mzlab/space/norms.hpp"
#include "mzlab/stable/stable_law.hpp"
#include "mzlab/verify.hpp"
#include "mzlab/witnesses.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using mzlab::space::Exponent;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string exp_str(const Exponent& e) {
  if (e.is_inf()) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", e.value());
  return buf;
}

std::string exps_str(std::span<const Exponent> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += exp_str(v[i]);
  }
  return out + ")";
}

std::vector<Exponent> parse_exponents(const std::vector<std::string>& toks) {
  std::vector<Exponent> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(mzlab::io::exponent_from_string(t));
  if (out.empty()) throw mzlab::io::SchemaError("empty exponent list");
  return out;
}

json exponents_json(std::span<const Exponent> v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(mzlab::io::exponent_json(e));
  return a;
}

// Shared emission path: canonical body bytes + timestamp sidecar.
void emit_report(const std::string& out, const json& body) {
  if (out.empty()) return;
  mzlab::io::write_report(out, body);
  std::cout << "report: " << out << " (hash "
            << mzlab::io::content_hash_hex(body) << ")\n";
}

void print_check_report(const mzlab::CheckReport& rep) {
  for (const auto& row : rep.rows) {
    const char* tag = row.advisory ? "info" : (row.pass ? "PASS" : "FAIL");
    std::cout << "  [" << tag << "] " << row.name
              << " margin=" << num(row.margin) << "\n";
  }
  std::cout << "result: " << (rep.all_pass() ? "PASS" : "FAIL") << "\n";
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw mzlab::io::SchemaError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw mzlab::io::SchemaError(path + ": " + e.what());
  }
}

// ---- classify --------------------------------------------------------

int run_classify(const std::vector<std::string>& q_toks, const std::string& p_s,
                 const std::string& r_s, const std::string& out) {
  const auto q = parse_exponents(q_toks);
  const Exponent p = mzlab::io::exponent_from_string(p_s);
  const Exponent r = mzlab::io::exponent_from_string(r_s);
  const auto c = (q.size() == 1) ? mzlab::classify::linear_k(q[0], p, r)
                                 : mzlab::classify::multilinear_k(q, p, r);

  std::cout << "triple: q=" << exps_str(q) << " p=" << exp_str(p)
            << " r=" << exp_str(r) << "\n";
  switch (c.status) {
    case mzlab::classify::KStatus::finite:
      std::cout << "status: Finite\n";
      if (c.has_value)
        std::cout << "value: " << num(c.value) << " +- " << num(c.error)
                  << "\n";
      else
        std::cout << "value: finite, closed form unknown\n";
      break;
    case mzlab::classify::KStatus::infinite:
      std::cout << "status: Infinite\n";
      break;
    case mzlab::classify::KStatus::undetermined:
      std::cout << "status: Undetermined\n";
      break;
  }
  std::cout << "provenance: " << c.provenance << "\n";

  json body{{"schema_version", mzlab::io::kSchemaVersion},
            {"command", "classify"},
            {"triple", mzlab::io::triple_json(q, p, r)},
            {"classification", mzlab::io::classification_json(c)}};
  emit_report(out, body);
  return 0;
}

// ---- moment ----------------------------------------------------------

int run_moment(double r, double s, bool mc, std::size_t samples,
               std::uint64_t seed, double tol, const std::string& out) {
  const mzlab::stable::StableLaw law(r);
  const auto quad = mzlab::stable::stable_moment(
      law, s, mzlab::stable::MomentMethod::quadrature, tol);
  std::cout << "c(r=" << num(r) << ", s=" << num(s) << ") = "
            << num(quad.value) << " +- " << num(quad.error_estimate)
            << " (quadrature)\n";

  json body{{"schema_version", mzlab::io::kSchemaVersion},
            {"command", "moment"},
            {"r", r},
            {"s", s},
            {"quadrature",
             json{{"value", quad.value}, {"error", quad.error_estimate}}}};
  if (mc) {
    const auto est = mzlab::stable::stable_moment(
        law, s, mzlab::stable::MomentMethod::monte_carlo, tol, seed, samples);
    const double gap = std::fabs(est.value - quad.value);
    const bool ok = gap <= est.error_estimate + quad.error_estimate;
    std::cout << "monte-carlo: " << num(est.value) << " +- "
              << num(est.error_estimate) << " (3 SE, samples=" << samples
              << ", seed=" << seed << ")\n";
    std::cout << "agreement: |quad - mc| = " << num(gap)
              << (ok ? " (within 3 SE)" : " (OUTSIDE 3 SE)") << "\n";
    body["monte_carlo"] = json{{"value", est.value},
                               {"error", est.error_estimate},
                               {"samples", samples},
                               {"seed", seed}};
    body["agreement_within_3se"] = ok;
  }
  emit_report(out, body);
  return 0;
}

// ---- norm ------------------------------------------------------------

int run_norm(const std::string& file, const std::vector<std::string>& q_toks,
             const std::string& p_s, const std::string& mode_s,
             std::size_t budget, std::uint64_t seed, const std::string& out) {
  json doc = load_json_file(file);
  // Accept either a bare operator document or a witness bundle that
  // nests the operator under "operator".
  const bool bundled = doc.is_object() && doc.contains("operator");
  const auto T = bundled
                     ? mzlab::io::operator_from(doc["operator"], "$.operator")
                     : mzlab::io::operator_from(doc, "$");
  const auto q = parse_exponents(q_toks);
  const Exponent p = mzlab::io::exponent_from_string(p_s);

  mzlab::solver::NormMode mode = mzlab::solver::NormMode::automatic;
  if (mode_s == "exact")
    mode = mzlab::solver::NormMode::exact;
  else if (mode_s == "ascent")
    mode = mzlab::solver::NormMode::ascent;
  else if (mode_s != "auto")
    throw mzlab::io::SchemaError("unknown norm mode: " + mode_s +
                                 " (expected auto|exact|ascent)");

  const auto b = mzlab::solver::operator_norm(T, q, p, mode, budget, seed);
  std::cout << "operator: arity " << T.arity() << ", output dim "
            << T.output_dim() << "\n";
  std::cout << "q=" << exps_str(q) << " p=" << exp_str(p)
            << " mode=" << mode_s << "\n";
  std::cout << "norm in [" << num(b.lower) << ", " << num(b.upper) << "]"
            << (b.exact ? " exact" : "")
            << (b.converged ? "" : " NOT CONVERGED") << "\n";

  json body{{"schema_version", mzlab::io::kSchemaVersion},
            {"command", "norm"},
            {"q", exponents_json(q)},
            {"p", mzlab::io::exponent_json(p)},
            {"mode", mode_s},
            {"budget", budget},
            {"seed", seed},
            {"bracket", mzlab::io::bracket_json(b)}};
  emit_report(out, body);
  return 0;
}

// ---- estimate --------------------------------------------------------

int run_estimate(const std::vector<std::string>& q_toks, const std::string& p_s,
                 const std::string& r_s, std::vector<std::size_t> n_list,
                 std::vector<std::size_t> dims, std::size_t budget,
                 std::uint64_t seed, bool use_cache, const std::string& out,
                 const std::string& csv) {
  const auto q = parse_exponents(q_toks);
  const Exponent p = mzlab::io::exponent_from_string(p_s);
  const Exponent r = mzlab::io::exponent_from_string(r_s);
  if (n_list.empty()) n_list = {4};
  if (dims.empty()) dims = {4};
  std::sort(n_list.begin(), n_list.end());

  json config{{"schema_version", mzlab::io::kSchemaVersion},
              {"command", "estimate"},
              {"triple", mzlab::io::triple_json(q, p, r)},
              {"n", n_list},
              {"dims", dims},
              {"budget", budget},
              {"seed", seed}};
  const std::string key = mzlab::io::content_hash_hex(config);

  json body;
  bool hit = false;
  if (use_cache) {
    if (auto cached = mzlab::io::cache_lookup(key)) {
      body = std::move(*cached);
      hit = true;
    }
  }

  if (!hit) {
    const auto c = (q.size() == 1) ? mzlab::classify::linear_k(q[0], p, r)
                                   : mzlab::classify::multilinear_k(q, p, r);
    json estimates = json::array();
    double max_lower = 0.0;
    for (std::size_t n : n_list) {
      const auto est =
          mzlab::estimate::estimate_kn(q, p, r, n, dims, budget, seed);
      max_lower = std::max(max_lower, est.lower);
      estimates.push_back(mzlab::io::estimate_json(est));
    }

    // Soundness checks on the certified bounds themselves.
    json checks = json::array();
    {
      const double margin = max_lower - 1.0;
      checks.push_back(json{{"name", "lower_at_least_one"},
                            {"pass", margin >= -1e-9},
                            {"margin", margin}});
    }
    if (c.status == mzlab::classify::KStatus::finite && c.has_value) {
      const double tol = c.error + 1e-9 * std::max(1.0, c.value);
      const double margin = c.value + tol - max_lower;
      checks.push_back(json{{"name", "lower_within_known_value"},
                            {"pass", margin >= 0.0},
                            {"margin", margin}});
    }

    body = json{{"schema_version", mzlab::io::kSchemaVersion},
                {"command", "estimate"},
                {"triple", mzlab::io::triple_json(q, p, r)},
                {"classification", mzlab::io::classification_json(c)},
                {"config", json{{"n", n_list},
                                {"dims", dims},
                                {"budget", budget},
                                {"seed", seed}}},
                {"estimates", std::move(estimates)},
                {"checks", std::move(checks)}};
    if (use_cache) mzlab::io::cache_store(key, body);
  }

  const auto& cls = body.at("classification");
  std::cout << "triple: q=" << exps_str(q) << " p=" << exp_str(p)
            << " r=" << exp_str(r) << "\n";
  std::cout << "classifier: " << cls.at("status").get<std::string>();
  if (cls.contains("value"))
    std::cout << " value=" << num(cls.at("value").get<double>());
  std::cout << "\n";
  std::vector<mzlab::io::CsvRow> rows;
  for (const auto& e : body.at("estimates")) {
    mzlab::io::CsvRow row;
    row.n = e.at("n").get<std::size_t>();
    row.lower_bound = e.at("lower").get<double>();
    row.norm_upper = e.at("norm_upper").get<double>();
    row.lhs = e.at("lhs").get<double>();
    row.rhs_product = e.at("rhs_product").get<double>();
    row.seed = e.at("seed").get<std::uint64_t>();
    rows.push_back(row);
    std::cout << "  n=" << row.n << ": lower=" << num(row.lower_bound)
              << " strategy=" << e.at("strategy").get<std::string>() << "\n";
  }
  bool checks_ok = true;
  for (const auto& ch : body.at("checks")) {
    const bool pass = ch.at("pass").get<bool>();
    checks_ok = checks_ok && pass;
    std::cout << "  [" << (pass ? "PASS" : "FAIL") << "] "
              << ch.at("name").get<std::string>()
              << " margin=" << num(ch.at("margin").get<double>()) << "\n";
  }
  std::cout << "cache: " << (hit ? "hit" : (use_cache ? "miss" : "off"))
            << " (key " << key << ")\n";

  emit_report(out, body);
  if (!csv.empty()) {
    mzlab::io::atomic_write(csv, mzlab::io::csv_table(rows));
    std::cout << "csv: " << csv << "\n";
  }
  return checks_ok ? 0 : 1;
}

// ---- witness ---------------------------------------------------------

int run_witness(const std::string& kind, std::size_t n, std::size_t m,
                std::vector<std::string> q_toks, const std::string& p_s,
                std::uint64_t seed, std::size_t attempts, std::string out) {
  std::optional<mzlab::op::MultilinearOperator> T;
  mzlab::solver::NormBracket bracket;

  if (kind == "littlewood") {
    T = mzlab::witnesses::littlewood_witness(n);
    const std::vector<Exponent> q(2, Exponent::infinity());
    bracket = mzlab::solver::operator_norm(*T, q, Exponent::infinity(),
                                           mzlab::solver::NormMode::exact);
  } else if (kind == "ksz") {
    std::vector<Exponent> q;
    if (q_toks.empty())
      q.assign(m, Exponent::infinity());
    else
      q = parse_exponents(q_toks);
    if (q.size() != m)
      throw mzlab::io::SchemaError("ksz: --q needs one exponent per slot");
    const Exponent p = mzlab::io::exponent_from_string(p_s);
    auto w = mzlab::witnesses::ksz_witness(m, n, q, p, seed, attempts);
    std::cout << "best attempt: " << w.attempt << " (of " << attempts << ")\n";
    T = std::move(w.form);
    bracket = std::move(w.bracket);
  } else if (kind == "convolution") {
    T = mzlab::witnesses::convolution_operator(n);
    const std::vector<Exponent> q(2, Exponent(1.0));
    bracket = mzlab::solver::operator_norm(*T, q, Exponent(1.0),
                                           mzlab::solver::NormMode::exact);
  } else {
    throw mzlab::io::SchemaError(
        "unknown witness kind: " + kind +
        " (expected littlewood|ksz|convolution)");
  }

  if (out.empty()) out = "witness_" + kind + "_n" + std::to_string(n) + ".json";
  std::cout << "kind=" << kind << " n=" << n << " seed=" << seed << "\n";
  std::cout << "operator: arity " << T->arity() << ", output dim "
            << T->output_dim() << "\n";
  std::cout << "norm in [" << num(bracket.lower) << ", " << num(bracket.upper)
            << "]" << (bracket.exact ? " exact" : "") << "\n";
  emit_report(out,
              mzlab::io::witness_bundle_json(*T, kind, n, seed, bracket));
  return 0;
}

// ---- verify: trial-based suites composed here ------------------------

// Random nonnegative families against the cyclic-convolution operator:
// pointwise domination margin and the full extension inequality with
// constant exactly 1, both across every r in r_list.
mzlab::CheckReport positivity_suite(std::size_t size, std::size_t trials,
                                    std::uint64_t seed,
                                    std::span<const Exponent> r_list) {
  const auto T = mzlab::witnesses::convolution_operator(size);
  const std::vector<Exponent> q(2, Exponent(1.0));
  const Exponent p(1.0);
  const auto bracket =
      mzlab::solver::operator_norm(T, q, p, mzlab::solver::NormMode::exact);

  double min_dom = std::numeric_limits<double>::infinity();
  double min_mz = std::numeric_limits<double>::infinity();
  const auto mu = mzlab::space::DiscreteMeasure::counting(size);
  for (std::size_t t = 0; t < trials; ++t) {
    mzlab::rng::Stream gen(seed, 100 + t);
    std::vector<mzlab::space::FunctionFamily> fams;
    for (std::size_t slot = 0; slot < 2; ++slot) {
      const std::size_t count = 1 + (gen.next_u64() % 4);
      std::vector<double> vals(count * size);
      for (auto& v : vals) v = gen.next_unit();
      fams.emplace_back(std::move(vals), count, mu);
    }
    for (const auto& r : r_list) {
      min_dom = std::min(
          min_dom, mzlab::witnesses::check_positive_domination(T, fams, r));
      const double lhs = mzlab::op::extension_lhs(T, fams, r, p);
      double rhs = bracket.upper;
      for (std::size_t slot = 0; slot < 2; ++slot)
        rhs *= mzlab::space::mixed_norm(fams[slot], r, q[slot]);
      min_mz = std::min(min_mz, (rhs - lhs) / std::max(rhs, 1e-300));
    }
  }

  mzlab::CheckReport rep;
  rep.suite = "positivity";
  rep.add("domination_min_margin", min_dom >= -1e-12, min_dom);
  rep.add("extension_constant_one", min_mz >= -1e-12, min_mz);
  return rep;
}

// Random signed functions on a weighted atom set: both sides of the
// level-set sandwich around the weak L^p quasinorm, worst case over
// trials and over an s grid below p.
mzlab::CheckReport weak_suite(std::size_t atoms, std::size_t trials,
                              std::uint64_t seed) {
  double min_lower = std::numeric_limits<double>::infinity();
  double min_upper = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    mzlab::rng::Stream gen(seed, 500 + t);
    std::vector<double> weights(atoms), values(atoms);
    for (auto& w : weights) w = 0.05 + gen.next_unit();
    for (auto& v : values) v = gen.next_symmetric();
    const mzlab::space::DiscreteMeasure mu(weights);
    const double p = 0.5 + 2.5 * gen.next_unit();
    const std::vector<Exponent> s_grid{Exponent(0.25 * p), Exponent(0.5 * p),
                                       Exponent(0.75 * p)};
    const auto rep =
        mzlab::witnesses::weak_sandwich_check(values, mu, Exponent(p), s_grid);
    for (const auto& row : rep.rows) {
      if (row.name == "level_sup_dominates_weak")
        min_lower = std::min(min_lower, row.margin);
      else if (row.name == "factor_bounds_level_sup")
        min_upper = std::min(min_upper, row.margin);
    }
  }
  mzlab::CheckReport rep;
  rep.suite = "weak";
  rep.add("level_sup_dominates_weak_min", min_lower >= -1e-10, min_lower);
  rep.add("factor_bounds_level_sup_min", min_upper >= -1e-10, min_upper);
  return rep;
}

int run_verify(const std::string& suite, const std::vector<std::string>& q_toks,
               const std::string& p_s, const std::string& r_s,
               const std::string& r2_s, const std::vector<std::string>& grid,
               const std::vector<double>& thetas,
               const std::vector<std::size_t>& sizes,
               const std::vector<std::uint64_t>& seeds, std::size_t n,
               std::size_t m, std::size_t trials, std::size_t budget,
               std::uint64_t seed, const std::string& out) {
  mzlab::CheckReport rep;
  json params{{"trials", trials}, {"seed", seed}};
  std::optional<json> growth;

  if (suite == "monotonicity") {
    const auto q = parse_exponents(q_toks);
    const Exponent r = mzlab::io::exponent_from_string(r_s);
    const auto p_grid = parse_exponents(
        grid.empty() ? std::vector<std::string>{"1", "1.2", "1.5", "2", "3"}
                     : grid);
    rep = mzlab::verify::verify_monotonicity_p(q, r, p_grid, n, budget, seed);
    params["q"] = exponents_json(q);
    params["r"] = mzlab::io::exponent_json(r);
    params["p_grid"] = exponents_json(p_grid);
    params["n"] = n;
    params["budget"] = budget;
  } else if (suite == "interpolation") {
    const auto q = parse_exponents(q_toks);
    const Exponent p = mzlab::io::exponent_from_string(p_s);
    const Exponent r1 = mzlab::io::exponent_from_string(r_s);
    const Exponent r2 = mzlab::io::exponent_from_string(r2_s);
    std::vector<double> th =
        thetas.empty() ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}
                       : thetas;
    rep = mzlab::verify::verify_interpolation_r(q, p, r1, r2, th, n, budget,
                                                seed);
    params["q"] = exponents_json(q);
    params["p"] = mzlab::io::exponent_json(p);
    params["r1"] = mzlab::io::exponent_json(r1);
    params["r2"] = mzlab::io::exponent_json(r2);
    params["thetas"] = th;
    params["n"] = n;
    params["budget"] = budget;
  } else if (suite == "duality") {
    const auto q = parse_exponents(q_toks);
    if (q.size() != 1)
      throw mzlab::io::SchemaError("duality: --q takes a single exponent");
    const Exponent p = mzlab::io::exponent_from_string(p_s);
    const Exponent r = mzlab::io::exponent_from_string(r_s);
    rep = mzlab::verify::verify_duality(q[0], p, r);
    params["q"] = mzlab::io::exponent_json(q[0]);
    params["p"] = mzlab::io::exponent_json(p);
    params["r"] = mzlab::io::exponent_json(r);
  } else if (suite == "positivity") {
    const std::vector<Exponent> r_list{Exponent(1.0), Exponent(1.7),
                                       Exponent(3.0), Exponent::infinity()};
    rep = positivity_suite(n == 4 ? 16 : n, trials, seed, r_list);
    params["size"] = (n == 4 ? 16 : n);
    params["r_list"] = exponents_json(r_list);
  } else if (suite == "weak") {
    rep = weak_suite(n == 4 ? 32 : n, trials, seed);
    params["atoms"] = (n == 4 ? 32 : n);
  } else if (suite == "divergence") {
    std::vector<Exponent> q = q_toks.empty()
                                  ? std::vector<Exponent>(m, Exponent::infinity())
                                  : parse_exponents(q_toks);
    const Exponent r = mzlab::io::exponent_from_string(r_s);
    const std::vector<std::size_t> ns =
        sizes.empty() ? std::vector<std::size_t>{2, 4, 8, 16} : sizes;
    const std::vector<std::uint64_t> ss =
        seeds.empty() ? std::vector<std::uint64_t>{seed} : seeds;
    const auto g = mzlab::witnesses::divergence_probe(m, ns, q, r, ss);
    growth = mzlab::io::growth_report_json(g);
    rep.suite = "divergence";
    bool positive = true;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& row : g.rows) {
      positive = positive && row.ratio > 0.0;
      worst = std::min(worst, row.ratio);
    }
    rep.add("ratios_positive", positive, worst);
    rep.add("fitted_exponent_reported", true, g.fitted_exponent, true);
    rep.add("threshold_reported", true, g.threshold, true);
    params["q"] = exponents_json(q);
    params["r"] = mzlab::io::exponent_json(r);
    params["sizes"] = ns;
    params["seeds"] = ss;
    params["m"] = m;
    std::cout << "fitted growth exponent: " << num(g.fitted_exponent)
              << " (threshold r < " << num(g.threshold) << ": "
              << (g.below_threshold ? "growth regime" : "bounded regime")
              << ")\n";
  } else {
    throw mzlab::io::SchemaError(
        "unknown suite: " + suite +
        " (expected monotonicity|interpolation|duality|positivity|weak|"
        "divergence)");
  }

  std::cout << "suite: " << rep.suite << "\n";
  print_check_report(rep);

  json body{{"schema_version", mzlab::io::kSchemaVersion},
            {"command", "verify"},
            {"suite", rep.suite},
            {"params", params},
            {"report", mzlab::io::check_report_json(rep)}};
  if (growth) body["growth"] = *growth;
  emit_report(out, body);
  return rep.all_pass() ? 0 : 1;
}

// ---- report: aggregate a directory of emitted reports ----------------

int run_report(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw mzlab::io::SchemaError("report: not a directory: " + dir);

  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (!de.is_regular_file()) continue;
    const std::string name = de.path().filename().string();
    if (!name.ends_with(".json")) continue;
    if (name.ends_with(".sidecar.json")) continue;
    if (name == "index.json") continue;
    files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());

  json entries = json::array();
  std::vector<mzlab::io::CsvRow> rows;
  for (const auto& f : files) {
    json body;
    try {
      body = load_json_file(f.string());
    } catch (const mzlab::io::SchemaError& e) {
      std::cout << "skipped (unparseable): " << f.filename().string() << "\n";
      continue;
    }
    json entry{{"file", f.filename().string()},
               {"hash", mzlab::io::content_hash_hex(body)},
               {"command", body.value("command", std::string("unknown"))}};
    if (body.contains("suite")) entry["suite"] = body["suite"];
    entries.push_back(std::move(entry));

    if (body.contains("estimates") && body["estimates"].is_array()) {
      for (const auto& e : body["estimates"]) {
        mzlab::io::CsvRow row;
        row.n = e.value("n", std::size_t{0});
        row.lower_bound = e.value("lower", 0.0);
        row.norm_upper = e.value("norm_upper", 0.0);
        row.lhs = e.value("lhs", 0.0);
        row.rhs_product = e.value("rhs_product", 0.0);
        row.seed = e.value("seed", std::uint64_t{0});
        rows.push_back(row);
      }
    }
    if (body.contains("growth") && body["growth"].contains("rows")) {
      for (const auto& e : body["growth"]["rows"]) {
        mzlab::io::CsvRow row;
        row.n = e.value("n", std::size_t{0});
        row.lower_bound = e.value("ratio", 0.0);
        row.norm_upper = e.value("norm_upper", 0.0);
        row.lhs = e.value("lhs", 0.0);
        row.rhs_product = e.value("rhs_product", 0.0);
        row.seed = e.value("seed", std::uint64_t{0});
        rows.push_back(row);
      }
    }
  }

  json index{{"schema_version", mzlab::io::kSchemaVersion},
             {"command", "report"},
             {"report_count", entries.size()},
             {"entries", std::move(entries)}};
  mzlab::io::write_report(fs::path(dir) / "index.json", index);
  mzlab::io::atomic_write(fs::path(dir) / "summary.csv",
                          mzlab::io::csv_table(rows));
  std::cout << "scanned " << files.size() << " report(s) in " << dir << "\n";
  std::cout << "wrote " << (fs::path(dir) / "index.json").string() << " (hash "
            << mzlab::io::content_hash_hex(index) << ")\n";
  std::cout << "wrote " << (fs::path(dir) / "summary.csv").string() << " ("
            << rows.size() << " data row(s))\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mzlab — extension constants of multilinear operators on "
               "finite weighted L^p spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mzlab 1.0.0");

  // classify
  auto* c_cmd = app.add_subcommand(
      "classify", "Classify k(q,p;r): Finite/Infinite/Undetermined + value");
  std::vector<std::string> c_q;
  std::string c_p, c_r, c_out;
  c_cmd->add_option("--q", c_q, "input exponents, comma separated")
      ->required()
      ->delimiter(',');
  c_cmd->add_option("--p", c_p, "output exponent")->required();
  c_cmd->add_option("--r", c_r, "aggregation exponent")->required();
  c_cmd->add_option("--out", c_out, "write JSON report here");

  // moment
  auto* m_cmd = app.add_subcommand(
      "moment", "Absolute moment constant c_{r,s} of the symmetric stable law");
  double m_r = 2.0, m_s = 2.0, m_tol = 1e-7;
  bool m_mc = false;
  std::size_t m_samples = 1'000'000;
  std::uint64_t m_seed = 1;
  std::string m_out;
  m_cmd->add_option("--r", m_r, "stable index, 0 < r <= 2")->required();
  m_cmd->add_option("--s", m_s, "moment order")->required();
  m_cmd->add_flag("--mc", m_mc, "add a Monte Carlo cross-check");
  m_cmd->add_option("--samples", m_samples, "Monte Carlo sample count");
  m_cmd->add_option("--seed", m_seed, "Monte Carlo seed");
  m_cmd->add_option("--tol", m_tol, "quadrature tolerance");
  m_cmd->add_option("--out", m_out, "write JSON report here");

  // norm
  auto* n_cmd = app.add_subcommand(
      "norm", "Operator norm bracket for an operator JSON file");
  std::string n_file, n_p, n_mode = "auto", n_out;
  std::vector<std::string> n_q;
  std::size_t n_budget = 600;
  std::uint64_t n_seed = 1;
  n_cmd->add_option("--operator", n_file, "operator JSON file")->required();
  n_cmd->add_option("--q", n_q, "input exponents")->required()->delimiter(',');
  n_cmd->add_option("--p", n_p, "output exponent")->required();
  n_cmd->add_option("--mode", n_mode, "auto|exact|ascent");
  n_cmd->add_option("--budget", n_budget, "ascent iteration budget");
  n_cmd->add_option("--seed", n_seed, "ascent restart seed");
  n_cmd->add_option("--out", n_out, "write JSON report here");

  // estimate
  auto* e_cmd = app.add_subcommand(
      "estimate", "Certified lower bounds for k^(n) over a list of n");
  std::vector<std::string> e_q;
  std::string e_p, e_r, e_out = "estimate_report.json", e_csv;
  std::vector<std::size_t> e_n, e_dims;
  std::size_t e_budget = 400;
  std::uint64_t e_seed = 1;
  bool e_nocache = false;
  e_cmd->add_option("--q", e_q, "input exponents")->required()->delimiter(',');
  e_cmd->add_option("--p", e_p, "output exponent")->required();
  e_cmd->add_option("--r", e_r, "aggregation exponent")->required();
  e_cmd->add_option("--n", e_n, "family-size caps")->delimiter(',');
  e_cmd->add_option("--dims", e_dims, "slot dimensions (1 or arity entries)")
      ->delimiter(',');
  e_cmd->add_option("--budget", e_budget, "ascent budget per candidate");
  e_cmd->add_option("--seed", e_seed, "search seed");
  e_cmd->add_flag("--no-cache", e_nocache, "bypass the result cache");
  e_cmd->add_option("--out", e_out, "JSON report path");
  e_cmd->add_option("--csv", e_csv, "also write a CSV table here");

  // witness
  auto* w_cmd = app.add_subcommand(
      "witness", "Emit a named witness operator with its norm bracket");
  std::string w_kind, w_p = "inf", w_out;
  std::size_t w_n = 4, w_m = 2, w_attempts = 20;
  std::uint64_t w_seed = 1;
  std::vector<std::string> w_q;
  w_cmd->add_option("--kind", w_kind, "littlewood|ksz|convolution")
      ->required();
  w_cmd->add_option("--n", w_n, "slot dimension (or Z_n size)")->required();
  w_cmd->add_option("--m", w_m, "arity (ksz)");
  w_cmd->add_option("--q", w_q, "input exponents (ksz)")->delimiter(',');
  w_cmd->add_option("--p", w_p, "output exponent (ksz)");
  w_cmd->add_option("--seed", w_seed, "draw seed (ksz)");
  w_cmd->add_option("--attempts", w_attempts, "draws to minimize over (ksz)");
  w_cmd->add_option("--out", w_out, "bundle path (default witness_<kind>_nN.json)");

  // verify
  auto* v_cmd = app.add_subcommand(
      "verify", "Run a verification suite; exit 1 if any check fails");
  std::string v_suite, v_p, v_r, v_r2, v_out;
  std::vector<std::string> v_q, v_grid;
  std::vector<double> v_thetas;
  std::vector<std::size_t> v_sizes;
  std::vector<std::uint64_t> v_seeds;
  std::size_t v_n = 4, v_m = 2, v_trials = 1000, v_budget = 200;
  std::uint64_t v_seed = 1;
  v_cmd->add_option("--suite", v_suite,
                    "monotonicity|interpolation|duality|positivity|weak|"
                    "divergence")
      ->required();
  v_cmd->add_option("--q", v_q, "input exponents")->delimiter(',');
  v_cmd->add_option("--p", v_p, "output exponent");
  v_cmd->add_option("--r", v_r, "aggregation exponent (r1 for interpolation)");
  v_cmd->add_option("--r2", v_r2, "second endpoint (interpolation)");
  v_cmd->add_option("--grid", v_grid, "p grid (monotonicity)")->delimiter(',');
  v_cmd->add_option("--thetas", v_thetas, "interpolation points in [0,1]")
      ->delimiter(',');
  v_cmd->add_option("--sizes", v_sizes, "slot sizes (divergence)")
      ->delimiter(',');
  v_cmd->add_option("--seeds", v_seeds, "per-size seeds (divergence)")
      ->delimiter(',');
  v_cmd->add_option("--n", v_n, "family-size cap / trial dimension");
  v_cmd->add_option("--m", v_m, "arity (divergence)");
  v_cmd->add_option("--trials", v_trials, "random trials (positivity/weak)");
  v_cmd->add_option("--budget", v_budget, "estimator budget");
  v_cmd->add_option("--seed", v_seed, "trial seed");
  v_cmd->add_option("--out", v_out, "write JSON report here");

  // report
  auto* r_cmd = app.add_subcommand(
      "report", "Aggregate a directory of reports into index + summary CSV");
  std::string r_dir;
  r_cmd->add_option("--dir", r_dir, "directory of JSON reports")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(c_cmd)) return run_classify(c_q, c_p, c_r, c_out);
    if (app.got_subcommand(m_cmd))
      return run_moment(m_r, m_s, m_mc, m_samples, m_seed, m_tol, m_out);
    if (app.got_subcommand(n_cmd))
      return run_norm(n_file, n_q, n_p, n_mode, n_budget, n_seed, n_out);
    if (app.got_subcommand(e_cmd))
      return run_estimate(e_q, e_p, e_r, e_n, e_dims, e_budget, e_seed,
                          !e_nocache, e_out, e_csv);
    if (app.got_subcommand(w_cmd))
      return run_witness(w_kind, w_n, w_m, w_q, w_p, w_seed, w_attempts, w_out);
    if (app.got_subcommand(v_cmd))
      return run_verify(v_suite, v_q, v_p, v_r, v_r2, v_grid, v_thetas,
                        v_sizes, v_seeds, v_n, v_m, v_trials, v_budget, v_seed,
                        v_out);
    if (app.got_subcommand(r_cmd)) return run_report(r_dir);
  } catch (const mzlab::io::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
