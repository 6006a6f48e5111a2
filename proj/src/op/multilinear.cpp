#include "mzlab/op/multilinear.hpp"

#include <cmath>
#include <stdexcept>

#include "mzlab/kern/kernels.hpp"
#include "mzlab/space/norms.hpp"

namespace mzlab::op {

namespace {
constexpr std::size_t kMaxArity = 3;
constexpr std::size_t kMaxDim = 64;
}  // namespace

MultilinearOperator::MultilinearOperator(
    std::vector<space::DiscreteMeasure> input_measures,
    space::DiscreteMeasure output_measure, std::vector<double> coeffs)
    : input_measures_(std::move(input_measures)),
      output_measure_(std::move(output_measure)),
      coeffs_(std::move(coeffs)) {
  if (input_measures_.empty() || input_measures_.size() > kMaxArity)
    throw std::invalid_argument("MultilinearOperator: arity must be 1..3");
  std::size_t expect = output_measure_.atom_count();
  if (output_measure_.atom_count() > kMaxDim * kMaxDim)
    throw std::invalid_argument("MultilinearOperator: output too large");
  for (const auto& mu : input_measures_) {
    if (mu.atom_count() > kMaxDim)
      throw std::invalid_argument("MultilinearOperator: axis dim > 64");
    expect *= mu.atom_count();
  }
  if (coeffs_.size() != expect)
    throw std::invalid_argument("MultilinearOperator: coefficient count " +
                                std::to_string(coeffs_.size()) +
                                " does not match shape " +
                                std::to_string(expect));
  for (double c : coeffs_)
    if (!std::isfinite(c))
      throw std::invalid_argument("MultilinearOperator: non-finite coefficient");
}

MultilinearOperator MultilinearOperator::identity(
    const space::DiscreteMeasure& mu) {
  const std::size_t n = mu.atom_count();
  std::vector<double> coeffs(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) coeffs[i * n + i] = 1.0;
  return MultilinearOperator({mu}, mu, std::move(coeffs));
}

std::size_t MultilinearOperator::flat_index(
    std::size_t out, std::span<const std::size_t> inputs) const {
  std::size_t idx = out;
  for (std::size_t slot = 0; slot < arity(); ++slot)
    idx = idx * input_dim(slot) + inputs[slot];
  return idx;
}

std::vector<double> MultilinearOperator::apply(
    std::span<const std::span<const double>> inputs) const {
  const std::size_t m = arity();
  if (inputs.size() != m)
    throw std::invalid_argument("apply: wrong number of inputs");
  for (std::size_t slot = 0; slot < m; ++slot)
    if (inputs[slot].size() != input_dim(slot))
      throw std::invalid_argument("apply: input length mismatch at slot " +
                                  std::to_string(slot));

  const auto& k = kern::ops();
  const std::size_t out_n = output_dim();
  const std::size_t last = input_dim(m - 1);
  std::vector<double> out(out_n, 0.0);
  const double* lastf = inputs[m - 1].data();

  // Contract the contiguous last axis with a dot kernel; walk the outer
  // index tuple explicitly (arity <= 3 keeps this shallow).
  if (m == 1) {
    for (std::size_t j = 0; j < out_n; ++j)
      out[j] = k.dot(coeffs_.data() + j * last, lastf, last);
    return out;
  }
  if (m == 2) {
    const std::size_t d1 = input_dim(0);
    for (std::size_t j = 0; j < out_n; ++j) {
      double acc = 0.0;
      const double* base = coeffs_.data() + j * d1 * last;
      for (std::size_t i1 = 0; i1 < d1; ++i1)
        acc += inputs[0][i1] * k.dot(base + i1 * last, lastf, last);
      out[j] = acc;
    }
    return out;
  }
  const std::size_t d1 = input_dim(0), d2 = input_dim(1);
  for (std::size_t j = 0; j < out_n; ++j) {
    double acc = 0.0;
    const double* base = coeffs_.data() + j * d1 * d2 * last;
    for (std::size_t i1 = 0; i1 < d1; ++i1)
      for (std::size_t i2 = 0; i2 < d2; ++i2)
        acc += inputs[0][i1] * inputs[1][i2] *
               k.dot(base + (i1 * d2 + i2) * last, lastf, last);
    out[j] = acc;
  }
  return out;
}

std::vector<double> MultilinearOperator::apply(
    std::span<const double> f) const {
  const std::span<const double> arr[1] = {f};
  return apply(std::span<const std::span<const double>>(arr, 1));
}

std::vector<double> MultilinearOperator::apply(
    std::span<const double> f, std::span<const double> g) const {
  const std::span<const double> arr[2] = {f, g};
  return apply(std::span<const std::span<const double>>(arr, 2));
}

namespace {

void validate_families(const MultilinearOperator& T,
                       std::span<const space::FunctionFamily> families) {
  if (families.size() != T.arity())
    throw std::invalid_argument("extension: one family per input slot");
  for (std::size_t slot = 0; slot < T.arity(); ++slot)
    if (!(families[slot].measure() == T.input_measure(slot)))
      throw std::invalid_argument(
          "extension: family measure mismatch at slot " +
          std::to_string(slot));
}

}  // namespace

std::vector<double> extension_aggregate(
    const MultilinearOperator& T,
    std::span<const space::FunctionFamily> families,
    const space::Exponent& r) {
  validate_families(T, families);
  const std::size_t m = T.arity();
  const std::size_t out_n = T.output_dim();
  const auto& k = kern::ops();

  std::vector<std::size_t> counts(m), tuple(m, 0);
  std::size_t tuples = 1;
  for (std::size_t slot = 0; slot < m; ++slot) {
    counts[slot] = families[slot].function_count();
    tuples *= counts[slot];
  }

  std::vector<double> acc(out_n, 0.0);
  const bool use_pow = !r.is_inf() && r.value() != 1.0 && r.value() != 2.0;
  std::vector<std::span<const double>> inputs(m);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rem = t;
    for (std::size_t slot = m; slot-- > 0;) {
      tuple[slot] = rem % counts[slot];
      rem /= counts[slot];
    }
    for (std::size_t slot = 0; slot < m; ++slot)
      inputs[slot] = families[slot].function(tuple[slot]);
    std::vector<double> img =
        T.apply(std::span<const std::span<const double>>(inputs));
    if (r.is_inf())
      k.accum_max_abs(acc.data(), img.data(), out_n);
    else if (r.value() == 1.0)
      k.accum_abs(acc.data(), img.data(), out_n);
    else if (r.value() == 2.0)
      k.accum_sq(acc.data(), img.data(), out_n);
    else
      kern::accum_abs_pow(acc.data(), img.data(), out_n, r.value());
  }
  if (!r.is_inf()) {
    if (r.value() == 2.0)
      for (double& v : acc) v = std::sqrt(v);
    else if (use_pow) {
      const double inv = 1.0 / r.value();
      for (double& v : acc) v = std::pow(v, inv);
    }
  }
  return acc;
}

double extension_lhs(const MultilinearOperator& T,
                     std::span<const space::FunctionFamily> families,
                     const space::Exponent& r, const space::Exponent& p) {
  std::vector<double> agg = extension_aggregate(T, families, r);
  return space::lp_norm(agg, p, T.output_measure());
}

double extension_lhs_weak(const MultilinearOperator& T,
                          std::span<const space::FunctionFamily> families,
                          const space::Exponent& r, const space::Exponent& p) {
  if (p.is_inf())
    throw std::domain_error("extension_lhs_weak: requires finite p");
  std::vector<double> agg = extension_aggregate(T, families, r);
  return space::weak_lp_quasinorm(agg, p, T.output_measure());
}

MultilinearOperator tensor_product(
    std::span<const MultilinearOperator> linear_factors) {
  const std::size_t m = linear_factors.size();
  if (m == 0 || m > kMaxArity)
    throw std::invalid_argument("tensor_product: need 1..3 linear factors");
  std::vector<space::DiscreteMeasure> in_measures;
  std::vector<space::DiscreteMeasure> out_measures;
  for (const auto& T : linear_factors) {
    if (T.arity() != 1)
      throw std::invalid_argument("tensor_product: factors must be linear");
    in_measures.push_back(T.input_measure(0));
    out_measures.push_back(T.output_measure());
  }
  space::DiscreteMeasure out_mu = space::product_measure(out_measures);

  std::vector<std::size_t> out_dims(m), in_dims(m);
  for (std::size_t i = 0; i < m; ++i) {
    out_dims[i] = linear_factors[i].output_dim();
    in_dims[i] = linear_factors[i].input_dim(0);
  }
  std::size_t out_total = out_mu.atom_count(), in_total = 1;
  for (std::size_t d : in_dims) in_total *= d;

  std::vector<double> coeffs(out_total * in_total);
  std::vector<std::size_t> jout(m), jin(m);
  for (std::size_t jo = 0; jo < out_total; ++jo) {
    std::size_t rem = jo;
    for (std::size_t i = m; i-- > 0;) {
      jout[i] = rem % out_dims[i];
      rem /= out_dims[i];
    }
    for (std::size_t ji = 0; ji < in_total; ++ji) {
      rem = ji;
      for (std::size_t i = m; i-- > 0;) {
        jin[i] = rem % in_dims[i];
        rem /= in_dims[i];
      }
      double prod = 1.0;
      for (std::size_t i = 0; i < m; ++i)
        prod *= linear_factors[i].coeffs()[jout[i] * in_dims[i] + jin[i]];
      coeffs[jo * in_total + ji] = prod;
    }
  }
  return MultilinearOperator(std::move(in_measures), std::move(out_mu),
                             std::move(coeffs));
}

}  // namespace mzlab::op
