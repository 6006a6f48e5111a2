#pragma once

#include <cstddef>

namespace mzlab::kern {

// Reduction kernels behind the norm, enumeration and Monte Carlo inner
// loops. kernels_scalar.cpp holds the reference implementations;
// kernels_avx2.cpp (built with -mavx2, used only after a cpuid check)
// holds the vector variants. Both backends fill the same table, so the
// callers never branch on the ISA.
//
// General real exponents (sum |x|^p for arbitrary p) stay on the libm
// scalar path in both backends; the vector payoff is in the abs/square/
// max/accumulate reductions that dominate at the exponents 1, 2, inf.
struct Ops {
  double (*sum_abs)(const double* x, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_abs_w)(const double* x, const double* w, std::size_t n);
  double (*sum_sq_w)(const double* x, const double* w, std::size_t n);
  // dst[j] op= f(x[j]) over j < n
  void (*accum_abs)(double* dst, const double* x, std::size_t n);
  void (*accum_sq)(double* dst, const double* x, std::size_t n);
  void (*accum_max_abs)(double* dst, const double* x, std::size_t n);
  void (*add_scaled)(double* dst, const double* x, double a, std::size_t n);
  const char* name;
};

const Ops& scalar_ops();
bool avx2_available();        // compiled in and supported by this cpu
const Ops& avx2_ops();        // precondition: avx2_available()

// Runtime-selected table. Env MZLAB_KERNEL=scalar|avx2 pins the choice
// (read once); default is avx2 when available.
const Ops& ops();

// Exponent-generic reductions (scalar in both backends). The *_comp
// variants use Kahan compensation; norm code switches to them for
// exponents >= 8 where cancellation in the powers bites.
double sum_abs_pow(const double* x, std::size_t n, double p);
double sum_abs_pow_w(const double* x, const double* w, std::size_t n, double p);
double sum_abs_pow_comp(const double* x, std::size_t n, double p);
double sum_abs_pow_w_comp(const double* x, const double* w, std::size_t n, double p);
void accum_abs_pow(double* dst, const double* x, std::size_t n, double p);

}  // namespace mzlab::kern
