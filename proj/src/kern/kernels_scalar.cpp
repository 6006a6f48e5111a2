#include "mzlab/kern/kernels.hpp"

#include <cmath>

namespace mzlab::kern {
namespace {

double s_sum_abs(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double s_sum_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double s_max_abs(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fmax(acc, std::fabs(x[i]));
  return acc;
}

double s_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double s_sum_abs_w(const double* x, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]) * w[i];
  return acc;
}

double s_sum_sq_w(const double* x, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i] * w[i];
  return acc;
}

void s_accum_abs(double* dst, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += std::fabs(x[i]);
}

void s_accum_sq(double* dst, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += x[i] * x[i];
}

void s_accum_max_abs(double* dst, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::fmax(dst[i], std::fabs(x[i]));
}

void s_add_scaled(double* dst, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a * x[i];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{s_sum_abs, s_sum_sq,       s_max_abs,
                         s_dot,     s_sum_abs_w,    s_sum_sq_w,
                         s_accum_abs, s_accum_sq,   s_accum_max_abs,
                         s_add_scaled, "scalar"};
  return table;
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::fabs(x[i]), p);
  return acc;
}

double sum_abs_pow_w(const double* x, const double* w, std::size_t n, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::fabs(x[i]), p) * w[i];
  return acc;
}

double sum_abs_pow_comp(const double* x, std::size_t n, double p) {
  double acc = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = std::pow(std::fabs(x[i]), p) - carry;
    const double next = acc + term;
    carry = (next - acc) - term;
    acc = next;
  }
  return acc;
}

double sum_abs_pow_w_comp(const double* x, const double* w, std::size_t n,
                          double p) {
  double acc = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = std::pow(std::fabs(x[i]), p) * w[i] - carry;
    const double next = acc + term;
    carry = (next - acc) - term;
    acc = next;
  }
  return acc;
}

void accum_abs_pow(double* dst, const double* x, std::size_t n, double p) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += std::pow(std::fabs(x[i]), p);
}

}  // namespace mzlab::kern
