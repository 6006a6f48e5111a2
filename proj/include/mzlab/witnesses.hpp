#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mzlab/op/multilinear.hpp"
#include "mzlab/report.hpp"
#include "mzlab/solver/norm_solver.hpp"
#include "mzlab/space/exponent.hpp"
#include "mzlab/space/family.hpp"
#include "mzlab/space/measure.hpp"

namespace mzlab::witnesses {

// Sylvester +-1 matrix of order n (n a power of two <= 64), built from
// H_1 = [1], H_2n = [[H, H], [H, -H]].
std::vector<double> sylvester_matrix(std::size_t n);

// The Sylvester matrix as a scalar bilinear form on l^inf_n x l^inf_n.
// Basis families drive its certified extension ratio to n^(2/r) / ||T||,
// which exceeds every fixed bound as n grows once r < 4/3; n is capped
// at 16 so the sign-vertex norm stays exactly enumerable.
op::MultilinearOperator littlewood_witness(std::size_t n);

// A +-1 coefficient tensor with abnormally small operator norm, found
// by drawing `attempts` seeds and keeping the draw whose exactly
// computed norm is smallest (ties to the lowest attempt index).
struct SignTensorWitness {
  op::MultilinearOperator form;
  solver::NormBracket bracket;
  std::uint64_t seed = 0;
  std::size_t attempt = 0;
};

// m-linear +-1 tensor on n-dimensional slots; output is l^inf_n when
// p = inf and scalar otherwise. Requires an exact norm mode for the
// (q, p) pattern and throws naming the pattern when none applies.
SignTensorWitness ksz_witness(std::size_t m, std::size_t n,
                              std::span<const space::Exponent> q,
                              const space::Exponent& p, std::uint64_t seed,
                              std::size_t attempts = 20);

// Certified growth of the extension ratio at p = inf along a list of
// family sizes. Each row is the basis-family ratio
//   n^(m/r) / (norm_upper * prod_i n^(1/q_i)),
// a true lower bound on k^(n) because norm_upper certifies ||T||.
struct GrowthRow {
  std::size_t n = 0;
  double lhs = 0.0;
  double norm_upper = 0.0;
  double rhs_product = 1.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double fitted_exponent = 0.0;  // least-squares slope of log ratio vs log n
  double threshold = 0.0;        // divergence threshold for (q, p = inf)
  bool below_threshold = false;  // r < threshold: growth expected
};

// Witness route: the Sylvester form when m = 2 and every q_i = inf
// (n must then be a power of two <= 16), otherwise best-of-20 sign
// tensors per size. Seeds cycle over the provided list.
GrowthReport divergence_probe(std::size_t m, std::span<const std::size_t> n_list,
                              std::span<const space::Exponent> q,
                              const space::Exponent& r,
                              std::span<const std::uint64_t> seeds);

// Cyclic convolution on Z_N with counting measure:
// T(f, g)(x) = sum_y f(x - y) g(y). All coefficients are 0/1, so the
// operator is positive.
op::MultilinearOperator convolution_operator(std::size_t N);

// Minimum over output atoms of T(l^r aggregates) - (l^r aggregate of
// T values): the pointwise domination that gives positive operators
// extension constant 1. Nonnegative up to roundoff for every positive
// T. Throws "operator not positive" on any negative coefficient.
double check_positive_domination(const op::MultilinearOperator& T,
                                 std::span<const space::FunctionFamily> families,
                                 const space::Exponent& r);

// Two-sided level-set bound on the weak L^p quasinorm of one function:
// for 0 < s < p,
//   ||f||_{p,inf} <= sup_E nu(E)^(1/p-1/s) (int_E |f|^s)^(1/s)
//                 <= (p/(p-s))^(1/s) ||f||_{p,inf},
// with the supremum scanned exactly over super-level sets (prefixes of
// the atoms sorted by |f|). Rows report the minimum normalized slack
// of each side over the s grid; tolerance 1e-10.
CheckReport weak_sandwich_check(std::span<const double> values,
                                const space::DiscreteMeasure& mu,
                                const space::Exponent& p,
                                std::span<const space::Exponent> s_grid);

// The sandwich applied to the extension aggregate of T at the given
// families, plus an advisory row reporting the weak-type extension
// ratio lhs_weak / (e^(1/p) * ||T||_lower * prod mixed norms). The
// implied constant of the weak-type bound is not quantified, so that
// row never vetoes the report.
CheckReport weak_extension_check(const op::MultilinearOperator& T,
                                 std::span<const space::Exponent> q,
                                 const space::Exponent& p,
                                 std::span<const space::FunctionFamily> families,
                                 const space::Exponent& r,
                                 std::span<const space::Exponent> s_grid);

}  // namespace mzlab::witnesses
