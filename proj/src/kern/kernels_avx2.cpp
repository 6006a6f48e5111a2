// AVX2 variants of the reduction kernels. This translation unit is the
// only one compiled with -mavx2; dispatch.cpp guards every entry behind
// a cpuid check, so no AVX2 instruction runs on an unsupported cpu.

#include "mzlab/kern/kernels.hpp"

#ifdef __AVX2__

#include <immintrin.h>

#include <cmath>

namespace mzlab::kern {
namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double v_sum_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double out = hsum(acc);
  for (; i < n; ++i) out += std::fabs(x[i]);
  return out;
}

double v_sum_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i] * x[i];
  return out;
}

double v_max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double out = hmax(acc);
  for (; i < n; ++i) out = std::fmax(out, std::fabs(x[i]));
  return out;
}

double v_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

double v_sum_abs_w(const double* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(abs_pd(_mm256_loadu_pd(x + i)), _mm256_loadu_pd(w + i)));
  double out = hsum(acc);
  for (; i < n; ++i) out += std::fabs(x[i]) * w[i];
  return out;
}

double v_sum_sq_w(const double* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(v, v), _mm256_loadu_pd(w + i)));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i] * x[i] * w[i];
  return out;
}

void v_accum_abs(double* dst, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), abs_pd(_mm256_loadu_pd(x + i))));
  for (; i < n; ++i) dst[i] += std::fabs(x[i]);
}

void v_accum_sq(double* dst, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_mul_pd(v, v)));
  }
  for (; i < n; ++i) dst[i] += x[i] * x[i];
}

void v_accum_max_abs(double* dst, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_max_pd(_mm256_loadu_pd(dst + i), abs_pd(_mm256_loadu_pd(x + i))));
  for (; i < n; ++i) dst[i] = std::fmax(dst[i], std::fabs(x[i]));
}

void v_add_scaled(double* dst, const double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  for (; i < n; ++i) dst[i] += a * x[i];
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops table{v_sum_abs, v_sum_sq,       v_max_abs,
                         v_dot,     v_sum_abs_w,    v_sum_sq_w,
                         v_accum_abs, v_accum_sq,   v_accum_max_abs,
                         v_add_scaled, "avx2"};
  return table;
}

}  // namespace mzlab::kern

#else

namespace mzlab::kern {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace mzlab::kern

#endif
