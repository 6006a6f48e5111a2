#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mzlab/op/multilinear.hpp"
#include "mzlab/space/exponent.hpp"
#include "mzlab/space/family.hpp"

namespace mzlab::solver {

// Enumeration guard: exact vertex modes refuse to walk more than this
// many extreme-point combinations.
inline constexpr std::size_t kEnumGuard = std::size_t{1} << 25;

struct AlignResult {
  std::vector<double> vector;  // unit ball element (aligned maximizer)
  double value = 0.0;          // achieved functional value (dual norm)
};

// argmax of f |-> sum_i v_i f_i over the unit ball of L^q(mu). The
// all-zeros input is a dead end: q = inf returns all ones, finite q
// throws std::domain_error("undefined alignment").
AlignResult dual_align(std::span<const double> v, const space::Exponent& q);
AlignResult dual_align(std::span<const double> v, const space::Exponent& q,
                       const space::DiscreteMeasure& mu);

// Value of the alignment without building the vector.
double dual_norm(std::span<const double> v, const space::Exponent& q,
                 const space::DiscreteMeasure& mu);

struct FamilyAlignResult {
  space::FunctionFamily family;
  double value = 0.0;
};

// argmax of F |-> sum_{k,j} h_k(j) F_k(j) over the unit ball of the
// mixed norm || (sum_k |F_k|^r)^(1/r) ||_{L^q(mu)}. Factorizes into an
// inner l^r alignment per atom and an outer L^q profile alignment.
FamilyAlignResult mixed_dual_align(const space::FunctionFamily& h,
                                   const space::Exponent& r,
                                   const space::Exponent& q);

enum class NormMethod { exact_linear, vertex_enum, spectral, alternating, holder };

struct NormBracket {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  NormMethod method = NormMethod::alternating;
  bool exact = false;      // upper == lower up to declared_tol
  bool converged = true;
  double declared_tol = 1e-12;
  // One vector per input slot, each of unit L^{q_i} norm; applying T to
  // them reproduces `lower`.
  std::vector<std::vector<double>> witness;
};

enum class NormMode { automatic, exact, ascent };

// Operator norm of T between the weighted spaces fixed by (q, p).
// automatic: exact closed forms / enumeration / spectral when the shape
// admits them, otherwise alternating-ascent lower + Holder upper.
// exact: same but throws std::domain_error if no exact mode applies.
// ascent: forces the bracket path (used to cross-check exact modes).
NormBracket operator_norm(const op::MultilinearOperator& T,
                          std::span<const space::Exponent> q,
                          const space::Exponent& p,
                          NormMode mode = NormMode::automatic,
                          std::size_t budget = 600,
                          std::uint64_t seed = 1);

// Iterated Holder contraction bound, minimized over slot orderings.
double holder_upper(const op::MultilinearOperator& T,
                    std::span<const space::Exponent> q,
                    const space::Exponent& p);

struct AscentResult {
  std::vector<space::FunctionFamily> families;  // unit mixed norm each
  double value = 0.0;                           // extension_lhs at them
  bool converged = false;
};

// Block-coordinate ascent on the extension quotient: alternates exact
// mixed-norm alignments of each family and of the dual variable.
// Monotone in the objective; deterministic for fixed seed.
AscentResult family_ascent(const op::MultilinearOperator& T,
                           std::span<const space::Exponent> q,
                           const space::Exponent& p, const space::Exponent& r,
                           std::span<const std::size_t> family_sizes,
                           std::size_t budget = 400, std::uint64_t seed = 1);

}  // namespace mzlab::solver
