#include "mzlab/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "mzlab/rng/philox.hpp"
#include "mzlab/space/norms.hpp"

namespace mzlab::witnesses {

using space::DiscreteMeasure;
using space::Exponent;
using space::FunctionFamily;

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string pattern_string(std::span<const Exponent> q, const Exponent& p) {
  std::string s = "q=(";
  for (std::size_t i = 0; i < q.size(); ++i)
    s += (i ? "," : "") + q[i].str();
  s += "), p=" + p.str();
  return s;
}

double least_squares_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return den > 0.0 ? num / den : 0.0;
}

// sup over super-level sets E of nu(E)^(1/p-1/s) (int_E |f|^s)^(1/s).
// For a fixed measure the integral is maximized by taking atoms in
// decreasing order of |f|, so prefixes of that order exhaust the
// candidates for the supremum.
double level_set_sup(std::span<const double> values, const DiscreteMeasure& mu,
                     double p, double s) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(values[a]) > std::fabs(values[b]);
  });
  double best = 0.0, meas = 0.0, integral = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    meas += mu.weight(i);
    integral += mu.weight(i) * std::pow(std::fabs(values[i]), s);
    const double cand =
        std::pow(meas, 1.0 / p - 1.0 / s) * std::pow(integral, 1.0 / s);
    best = std::fmax(best, cand);
  }
  return best;
}

}  // namespace

std::vector<double> sylvester_matrix(std::size_t n) {
  if (!power_of_two(n) || n > 64)
    throw std::invalid_argument(
        "sylvester_matrix: order must be a power of two <= 64, got " +
        std::to_string(n));
  std::vector<double> h(n * n, 1.0);
  for (std::size_t block = 1; block < n; block *= 2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((i & block) && (j & block)) h[i * n + j] *= -1.0;
  return h;
}

op::MultilinearOperator littlewood_witness(std::size_t n) {
  if (n != 2 && n != 4 && n != 8 && n != 16)
    throw std::invalid_argument(
        "littlewood_witness: n must be one of {2,4,8,16} so the sign-vertex "
        "norm stays exactly enumerable, got " +
        std::to_string(n));
  const DiscreteMeasure atoms = DiscreteMeasure::counting(n);
  return op::MultilinearOperator({atoms, atoms}, DiscreteMeasure::counting(1),
                                 sylvester_matrix(n));
}

SignTensorWitness ksz_witness(std::size_t m, std::size_t n,
                              std::span<const Exponent> q, const Exponent& p,
                              std::uint64_t seed, std::size_t attempts) {
  if (m == 0 || m != q.size())
    throw std::invalid_argument("ksz_witness: arity/exponent mismatch");
  if (n == 0) throw std::invalid_argument("ksz_witness: empty slots");
  if (attempts == 0) throw std::invalid_argument("ksz_witness: attempts >= 1");

  const DiscreteMeasure atoms = DiscreteMeasure::counting(n);
  const DiscreteMeasure out =
      DiscreteMeasure::counting(p.is_inf() ? n : 1);
  std::vector<DiscreteMeasure> ins(m, atoms);
  std::size_t coeff_n = out.atom_count();
  for (std::size_t s = 0; s < m; ++s) coeff_n *= n;

  std::optional<SignTensorWitness> best;
  for (std::size_t a = 0; a < attempts; ++a) {
    rng::Stream stream(seed, 2000 + a);
    std::vector<double> coeffs(coeff_n);
    for (double& c : coeffs) c = (stream.next_u64() & 1u) ? 1.0 : -1.0;
    op::MultilinearOperator T(ins, out, std::move(coeffs));
    solver::NormBracket bracket;
    try {
      bracket = solver::operator_norm(T, q, p, solver::NormMode::exact);
    } catch (const std::domain_error&) {
      throw std::domain_error(
          "ksz_witness: no exact norm mode for the exponent pattern " +
          pattern_string(q, p) +
          "; supported: every q_i in {1, inf} with p = inf or scalar output, "
          "m = 1 with q = 1, p = inf or (q,p) = (2,2), and m = 2 with "
          "q = (2,2) onto sup-normed or scalar output");
    }
    if (!best || bracket.upper < best->bracket.upper) {
      best.emplace(SignTensorWitness{std::move(T), std::move(bracket), seed, a});
    }
  }
  return std::move(*best);
}

GrowthReport divergence_probe(std::size_t m, std::span<const std::size_t> n_list,
                              std::span<const Exponent> q, const Exponent& r,
                              std::span<const std::uint64_t> seeds) {
  if (m == 0 || m != q.size())
    throw std::invalid_argument("divergence_probe: arity/exponent mismatch");
  if (n_list.empty())
    throw std::invalid_argument("divergence_probe: empty size list");
  if (seeds.empty())
    throw std::invalid_argument("divergence_probe: need at least one seed");
  if (!r.is_inf() && r.value() < 1.0)
    throw std::domain_error("divergence_probe: r >= 1 required");

  GrowthReport report;
  // Divergence threshold at p = inf: with bq = max q_i, the constant
  // is infinite for r < m / (1/max(bq', 2) + sum_i 1/min(q_i, 2)).
  Exponent bq = q[0];
  for (const auto& e : q) bq = space::max(bq, e);
  double denom = 1.0 / std::fmax(bq.dual().value_or_inf(), 2.0);
  for (const auto& e : q) denom += 1.0 / std::fmin(e.value_or_inf(), 2.0);
  report.threshold = static_cast<double>(m) / denom;
  report.below_threshold = r.value_or_inf() < report.threshold;

  const Exponent p_inf = Exponent::infinity();
  const bool hadamard_route =
      m == 2 && std::all_of(q.begin(), q.end(),
                            [](const Exponent& e) { return e.is_inf(); });

  std::vector<double> log_n, log_ratio;
  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    const std::size_t n = n_list[idx];
    const std::uint64_t seed = seeds[idx % seeds.size()];

    op::MultilinearOperator T = [&] {
      if (hadamard_route) return littlewood_witness(n);
      return ksz_witness(m, n, q, p_inf, seed).form;
    }();
    solver::NormBracket bracket =
        solver::operator_norm(T, q, p_inf, solver::NormMode::exact);

    const DiscreteMeasure atoms = DiscreteMeasure::counting(n);
    std::vector<FunctionFamily> fams(m, FunctionFamily::basis(atoms));
    const double lhs = op::extension_lhs(
        T, std::span<const FunctionFamily>(fams.data(), fams.size()), r,
        p_inf);
    double rhs = 1.0;
    for (std::size_t s = 0; s < m; ++s)
      rhs *= space::mixed_norm(fams[s], r, q[s]);

    GrowthRow row;
    row.n = n;
    row.lhs = lhs;
    row.norm_upper = bracket.upper;
    row.rhs_product = rhs;
    row.ratio = lhs / (bracket.upper * rhs);
    row.seed = seed;
    report.rows.push_back(row);
    if (row.ratio > 0.0) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_ratio.push_back(std::log(row.ratio));
    }
  }
  if (log_n.size() >= 2)
    report.fitted_exponent = least_squares_slope(log_n, log_ratio);
  return report;
}

op::MultilinearOperator convolution_operator(std::size_t N) {
  if (N == 0) throw std::invalid_argument("convolution_operator: N >= 1");
  const DiscreteMeasure atoms = DiscreteMeasure::counting(N);
  std::vector<double> coeffs(N * N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      coeffs[((i + j) % N) * N * N + i * N + j] = 1.0;
  return op::MultilinearOperator({atoms, atoms}, atoms, std::move(coeffs));
}

double check_positive_domination(const op::MultilinearOperator& T,
                                 std::span<const FunctionFamily> families,
                                 const Exponent& r) {
  for (double c : T.coeffs())
    if (c < 0.0) throw std::domain_error("operator not positive");
  if (families.size() != T.arity())
    throw std::invalid_argument(
        "check_positive_domination: one family per slot");

  std::vector<double> lhs = op::extension_aggregate(T, families, r);
  std::vector<std::vector<double>> aggregates;
  std::vector<std::span<const double>> inputs;
  for (std::size_t s = 0; s < families.size(); ++s)
    aggregates.push_back(space::lr_aggregate(families[s], r));
  for (const auto& a : aggregates) inputs.emplace_back(a.data(), a.size());
  std::vector<double> rhs =
      T.apply(std::span<const std::span<const double>>(inputs));

  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < lhs.size(); ++j)
    margin = std::fmin(margin, rhs[j] - lhs[j]);
  return margin;
}

CheckReport weak_sandwich_check(std::span<const double> values,
                                const DiscreteMeasure& mu, const Exponent& p,
                                std::span<const Exponent> s_grid) {
  if (p.is_inf())
    throw std::domain_error("weak_sandwich_check: finite p required");
  if (values.size() != mu.atom_count())
    throw std::invalid_argument("weak_sandwich_check: value shape mismatch");
  const double pv = p.value();

  CheckReport report;
  report.suite = "weak_sandwich";
  double slack_lower = std::numeric_limits<double>::infinity();
  double slack_upper = std::numeric_limits<double>::infinity();
  const double weak = space::weak_lp_quasinorm(values, p, mu);
  for (const auto& s : s_grid) {
    if (s.is_inf() || !(s.value_or_inf() < pv) || !(s.value_or_inf() > 0.0))
      throw std::domain_error(
          "weak_sandwich_check: need 0 < s < p, got s = " + s.str());
    const double sv = s.value();
    const double sup = level_set_sup(values, mu, pv, sv);
    const double factor = std::pow(pv / (pv - sv), 1.0 / sv);
    slack_lower = std::fmin(slack_lower, (sup - weak) / std::fmax(weak, 1.0));
    slack_upper =
        std::fmin(slack_upper, (factor * weak - sup) / std::fmax(sup, 1.0));
  }
  report.add("level_sup_dominates_weak", slack_lower >= -1e-10, slack_lower);
  report.add("factor_bounds_level_sup", slack_upper >= -1e-10, slack_upper);
  return report;
}

CheckReport weak_extension_check(const op::MultilinearOperator& T,
                                 std::span<const Exponent> q,
                                 const Exponent& p,
                                 std::span<const FunctionFamily> families,
                                 const Exponent& r,
                                 std::span<const Exponent> s_grid) {
  std::vector<double> agg = op::extension_aggregate(T, families, r);
  CheckReport report =
      weak_sandwich_check(agg, T.output_measure(), p, s_grid);
  report.suite = "weak_extension";

  // Reported (never asserted) weak-type extension ratio: the weak
  // aggregate against e^(1/p) times an attained lower bound on the
  // weak operator norm times the families' mixed norms. The bound's
  // constant is existential, so the ratio is informational.
  solver::NormBracket bracket = solver::operator_norm(T, q, p);
  double weak_norm_lb = 0.0;
  if (!bracket.witness.empty()) {
    std::vector<std::span<const double>> w;
    for (const auto& x : bracket.witness) w.emplace_back(x.data(), x.size());
    std::vector<double> image =
        T.apply(std::span<const std::span<const double>>(w));
    weak_norm_lb =
        space::weak_lp_quasinorm(image, p, T.output_measure());
  }
  if (weak_norm_lb > 0.0) {
    double rhs = 1.0;
    for (std::size_t s = 0; s < families.size(); ++s)
      rhs *= space::mixed_norm(families[s], r, q[s]);
    const double lhs_weak = op::extension_lhs_weak(T, families, r, p);
    const double ratio =
        lhs_weak / (std::exp(1.0 / p.value()) * weak_norm_lb * rhs);
    report.add("weak_mz_e1p_ratio", true, ratio, /*advisory=*/true);
  }
  return report;
}

}  // namespace mzlab::witnesses
