#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mzlab/op/multilinear.hpp"
#include "mzlab/solver/norm_solver.hpp"
#include "mzlab/space/exponent.hpp"
#include "mzlab/space/family.hpp"

namespace mzlab::estimate {

// A certified numerical lower bound on the family-size-restricted
// extension constant k^(n). The certificate is the quotient
//
//   lower = lhs / (norm_upper * rhs_product)
//
// where lhs is the extension aggregate of the witness, norm_upper is a
// proven upper bound on ||witness_op|| (the bracket's upper endpoint),
// and rhs_product multiplies the witness families' mixed norms. Any
// admissible operator/family pair yields such a bound, so `lower` is
// sound regardless of how good the witness is.
struct KEstimate {
  std::vector<space::Exponent> q;
  space::Exponent p = space::Exponent(2.0);
  space::Exponent r = space::Exponent(2.0);
  std::size_t n = 1;  // family-size cap: every family has <= n functions

  double lower = 0.0;
  double lhs = 0.0;
  double norm_upper = 0.0;
  double rhs_product = 1.0;

  std::optional<op::MultilinearOperator> witness_op;
  std::vector<space::FunctionFamily> witness_families;
  solver::NormBracket bracket;

  std::uint64_t seed = 0;
  std::size_t budget = 0;
  bool converged = true;
  std::string strategy;  // which candidate produced `lower`
};

// Exact operator norm of the identity on n counting atoms viewed from
// L^q into L^p: n^max(1/p - 1/q, 0). Lower and upper coincide; the
// witness is a first basis vector (p >= q) or the normalized constant
// vector (p < q).
solver::NormBracket identity_norm_bracket(std::size_t n,
                                          const space::Exponent& q,
                                          const space::Exponent& p);

// Search for the best certified lower bound on k^(n) at the triple
// (q, p, r) with witness input dimensions `dims` (one entry per slot,
// or a single entry broadcast to all slots). Candidates tried:
//   - tensor products of identity maps with basis families (certified
//     through the exact factorized norm),
//   - the Sylvester +-1 bilinear form when m = 2 and q = (inf, inf)
//     (certified through exact sign-vertex enumeration),
//   - alternating ascent over both the families and the coefficient
//     tensor of a random operator (certified through the norm
//     bracket's upper endpoint).
// Deterministic for fixed (seed, budget). Nonconvergence of the ascent
// candidate is reported through `converged`; the returned value is
// still a true lower bound.
KEstimate estimate_kn(std::span<const space::Exponent> q,
                      const space::Exponent& p, const space::Exponent& r,
                      std::size_t n, std::span<const std::size_t> dims,
                      std::size_t budget = 400, std::uint64_t seed = 1);

}  // namespace mzlab::estimate
