#pragma once

#include <cstdint>
#include <span>

#include "mzlab/report.hpp"
#include "mzlab/space/exponent.hpp"

namespace mzlab::verify {

// Structural checks of the extension constants. Each suite returns one
// CheckReport whose rows carry the minimum slack observed; assertion
// rows are backed by proved inequalities, advisory rows are one-sided
// estimator probes that are reported but cannot certify a violation.

// k is nonincreasing in the target exponent p. Rows:
//   status_order_consistent  — Finite at a smaller p never turns
//                              Infinite at a larger p on the grid;
//   closed_form_nonincreasing — known classifier values nonincreasing
//                              along the grid (within error bars);
//   estimator_vs_smaller_p   — a certified lower bound at the largest
//                              grid p stays below the known value at
//                              the smallest Finite(known) grid p;
//   shared_witness_nonincreasing — the identity-tensor witness ratio,
//                              evaluated at every grid p with its exact
//                              factorized norm, is nonincreasing.
CheckReport verify_monotonicity_p(std::span<const space::Exponent> q,
                                  const space::Exponent& r,
                                  std::span<const space::Exponent> p_grid,
                                  std::size_t n = 4, std::size_t budget = 200,
                                  std::uint64_t seed = 1);

// log k is convex in 1/r: two-endpoint interpolation bounds between r1
// and r2 on a theta grid (theta = 0 is r1, theta = 1 is r2, linear in
// 1/r). Rows: closed_form_two_endpoint and grid_log_convexity on
// classifier values (tolerance 1e-6); estimator_two_endpoint_reported
// (advisory) on a certified midpoint estimate; and, when m = 2 with
// q = (inf, inf), fixed_witness_two_endpoint on the Sylvester-form
// witness whose certified ratio is exactly log-linear in 1/r.
CheckReport verify_interpolation_r(std::span<const space::Exponent> q,
                                   const space::Exponent& p,
                                   const space::Exponent& r1,
                                   const space::Exponent& r2,
                                   std::span<const double> theta_grid,
                                   std::size_t n = 4,
                                   std::size_t budget = 200,
                                   std::uint64_t seed = 1);

// Conjugation symmetry of the linear constant: (q, p, r) and the dual
// triple (p', q', r') classify identically and, where both values are
// known, agree to 1e-8.
CheckReport verify_duality(const space::Exponent& q, const space::Exponent& p,
                           const space::Exponent& r);

}  // namespace mzlab::verify
