#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mzlab::stable {

// Symmetric r-stable law normalized by its characteristic function
// exp(-|t|^r), 0 < r <= 2. r = 2 is Gaussian with variance 2; r = 1 is
// Cauchy with density 1/(pi(1+x^2)).
struct StableLaw {
  explicit StableLaw(double index);
  double r;
};

// Density w(x) = (1/pi) Int_0^inf exp(-t^r) cos(xt) dt by oscillation-
// aware quadrature; symmetric in x by construction. Throws
// quad::QuadratureFailure if the budget cannot reach `tol`.
double stable_density(const StableLaw& law, double x, double tol = 1e-10);

enum class MomentMethod { quadrature, monte_carlo };

struct MomentValue {
  double r = 0.0;
  double s = 0.0;
  double value = 0.0;           // c_{r,s} = (E|X|^s)^(1/s)
  double error_estimate = 0.0;  // error bound (quadrature) or 3 SE (MC)
  MomentMethod method = MomentMethod::quadrature;
};

// Absolute moment constant c_{r,s}. Quadrature integrates |x|^s w(x)
// over a symmetric grid and corrects the tail with the known
// |x|^(-1-kr) expansion; Monte Carlo is the cross-check. Requires
// s < r (margin 1e-6) unless r = 2, where every 0 < s < inf converges.
MomentValue stable_moment(const StableLaw& law, double s,
                          MomentMethod method = MomentMethod::quadrature,
                          double tol = 1e-7, std::uint64_t seed = 1,
                          std::size_t samples = 1'000'000);

// Memoized quadrature value of c_{r,s}; cache key is (r, s) rounded to
// 12 significant digits. Safe for concurrent readers/writers.
double cached_moment(double r, double s);
MomentValue cached_moment_full(double r, double s);

// Chambers-Mallows-Stuck sampler; deterministic for fixed seed, blocked
// into per-stream counters so the draw order is reproducible and
// splittable.
std::vector<double> sample_stable(const StableLaw& law, std::size_t count,
                                  std::uint64_t seed);

// Relative error of the empirical (E|sum_k a_k X_k|^s)^(1/s) against
// c_{r,s} ||a||_r over `samples` draws. Zero coefficient vector gives 0.
double check_stable_identity(const StableLaw& law, double s,
                             std::span<const double> coeffs,
                             std::size_t samples, std::uint64_t seed);

struct EmbeddingCheck {
  double lhs = 0.0;       // empirical (E|multi-sum|^p)^(1/p)
  double rhs = 0.0;       // constant * (sum |a|^r)^(1/r)
  double margin = 0.0;    // lhs - rhs
  double std_error = 0.0; // standard error of the lhs estimate
  double constant = 0.0;
};

// Lower-bound inequality for the multilinear stable embedding:
// (E|sum_I a_I prod_i X^i_{I_i}|^p)^(1/p) >= C (sum |a_I|^r)^(1/r) with
// C = c_{r,p}^m when 0 < p < r < 2 or 0 < p <= r = 2, C = c_{2,2}^m
// when r = 2 < p, and C = c_{r,r/2}^m when r < 2 and r <= p (any
// moment order below r works there; r/2 is the documented choice).
// coeffs is row-major over dims.
EmbeddingCheck check_embedding_inequality(const StableLaw& law, double p,
                                          std::span<const std::size_t> dims,
                                          std::span<const double> coeffs,
                                          std::size_t samples,
                                          std::uint64_t seed);

}  // namespace mzlab::stable
