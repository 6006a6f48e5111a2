#pragma once

#include <span>
#include <string>

#include "mzlab/space/exponent.hpp"

namespace mzlab::classify {

// Outcome of the case analysis for the best mixed-norm extension
// constant k of operators between weighted L^p spaces.
enum class KStatus { finite, infinite, undetermined };

// Closed-form shape of the constant when one is known. c(r,s) denotes
// the s-th absolute moment's s-th root of the symmetric law with
// characteristic function exp(-|t|^r).
enum class ValueForm {
  one,                 // constant is exactly 1
  moment_ratio,        // c(r,q)/c(r,p)
  dual_moment_ratio,   // c(r',p')/c(r',q')
  moment_ratio_r2_q2,  // c(2,2)/c(2,p)       (r=2 with q=2)
  moment_ratio_r2_p2,  // c(2,2)/c(2,q')      (r=2 with p=2, via duality)
  product,             // product of per-slot linear constants
  unknown,             // finite, but no closed form is known
  none                 // no finite constant (or open question)
};

// Symbolic branch decision: status and value shape only, no numerics.
struct KForm {
  KStatus status = KStatus::undetermined;
  ValueForm form = ValueForm::none;
  const char* branch = "";  // names the deciding case in math terms
};

struct KClassification {
  KStatus status = KStatus::undetermined;
  ValueForm form = ValueForm::none;
  bool has_value = false;  // closed-form value evaluated below
  double value = 0.0;
  double error = 0.0;  // conservative absolute error from quadrature
  std::string provenance;
};

// Pure case analysis (no quadrature); exponents must lie in [1, inf].
KForm linear_k_form(const space::Exponent& q, const space::Exponent& p,
                    const space::Exponent& r);
KForm multilinear_k_form(std::span<const space::Exponent> q,
                         const space::Exponent& p, const space::Exponent& r);

// Full classification; evaluates closed forms lazily through the
// stable-moment cache. If a value is finite but numerically
// near-divergent, has_value stays false and the provenance says so.
KClassification linear_k(const space::Exponent& q, const space::Exponent& p,
                         const space::Exponent& r);
KClassification multilinear_k(std::span<const space::Exponent> q,
                              const space::Exponent& p,
                              const space::Exponent& r);

// Product of the per-slot linear constants. This is a lower bound for
// the multilinear constant; the returned status describes the product
// itself (infinite if any factor is infinite, unknown value if any
// finite factor lacks a closed form).
KClassification product_lower_bound(std::span<const space::Exponent> q,
                                    const space::Exponent& p,
                                    const space::Exponent& r);

}  // namespace mzlab::classify
