#include "mzlab/space/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mzlab/kern/kernels.hpp"

namespace mzlab::space {

namespace {
// Compensation threshold: powers this large lose enough bits that the
// plain sum's cancellation shows up at the solver tolerances.
constexpr double kCompExponent = 8.0;
}  // namespace

double lp_norm(std::span<const double> values, const Exponent& p,
               const DiscreteMeasure& mu) {
  if (values.size() != mu.atom_count())
    throw std::invalid_argument("lp_norm: value/measure size mismatch");
  const auto& k = kern::ops();
  const double* x = values.data();
  const std::size_t n = values.size();
  if (p.is_inf()) return k.max_abs(x, n);
  const double pv = p.value();
  if (mu.is_counting()) {
    if (pv == 1.0) return k.sum_abs(x, n);
    if (pv == 2.0) return std::sqrt(k.sum_sq(x, n));
    const double s = pv >= kCompExponent ? kern::sum_abs_pow_comp(x, n, pv)
                                         : kern::sum_abs_pow(x, n, pv);
    return std::pow(s, 1.0 / pv);
  }
  const double* w = mu.weights().data();
  if (pv == 1.0) return k.sum_abs_w(x, w, n);
  if (pv == 2.0) return std::sqrt(k.sum_sq_w(x, w, n));
  const double s = pv >= kCompExponent ? kern::sum_abs_pow_w_comp(x, w, n, pv)
                                       : kern::sum_abs_pow_w(x, w, n, pv);
  return std::pow(s, 1.0 / pv);
}

std::vector<double> lr_aggregate(const FunctionFamily& family,
                                 const Exponent& r) {
  const std::size_t n = family.atom_count();
  const std::size_t kf = family.function_count();
  const auto& k = kern::ops();
  std::vector<double> acc(n, 0.0);
  if (r.is_inf()) {
    for (std::size_t i = 0; i < kf; ++i)
      k.accum_max_abs(acc.data(), family.function(i).data(), n);
    return acc;
  }
  const double rv = r.value();
  if (rv == 1.0) {
    for (std::size_t i = 0; i < kf; ++i)
      k.accum_abs(acc.data(), family.function(i).data(), n);
    return acc;
  }
  if (rv == 2.0) {
    for (std::size_t i = 0; i < kf; ++i)
      k.accum_sq(acc.data(), family.function(i).data(), n);
    for (double& v : acc) v = std::sqrt(v);
    return acc;
  }
  for (std::size_t i = 0; i < kf; ++i)
    kern::accum_abs_pow(acc.data(), family.function(i).data(), n, rv);
  const double inv = 1.0 / rv;
  for (double& v : acc) v = std::pow(v, inv);
  return acc;
}

double mixed_norm(const FunctionFamily& family, const Exponent& r,
                  const Exponent& q) {
  const std::vector<double> agg = lr_aggregate(family, r);
  return lp_norm(agg, q, family.measure());
}

double weak_lp_quasinorm(std::span<const double> values, const Exponent& p,
                         const DiscreteMeasure& mu) {
  if (p.is_inf())
    throw std::domain_error("weak_lp_quasinorm: requires finite p");
  if (values.size() != mu.atom_count())
    throw std::invalid_argument("weak_lp_quasinorm: size mismatch");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(values[a]) > std::fabs(values[b]);
  });
  // mu(|f| > t) for t just below level v equals the cumulative weight of
  // atoms with |f| >= v, so the sup over t is a scan over distinct levels.
  const double inv_p = 1.0 / p.value();
  double best = 0.0, cum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double level = std::fabs(values[order[i]]);
    while (i < n && std::fabs(values[order[i]]) == level) {
      cum += mu.weight(order[i]);
      ++i;
    }
    if (level == 0.0) break;
    best = std::fmax(best, level * std::pow(cum, inv_p));
  }
  return best;
}

DiscreteMeasure product_measure(const std::vector<DiscreteMeasure>& factors) {
  if (factors.empty())
    throw std::invalid_argument("product_measure: no factors");
  std::vector<double> weights{1.0};
  for (const auto& m : factors) {
    std::vector<double> next;
    next.reserve(weights.size() * m.atom_count());
    for (double a : weights)
      for (double b : m.weights()) next.push_back(a * b);
    weights = std::move(next);
  }
  return DiscreteMeasure(std::move(weights));
}

}  // namespace mzlab::space
