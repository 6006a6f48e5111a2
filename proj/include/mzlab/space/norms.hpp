#pragma once

#include <span>

#include "mzlab/space/exponent.hpp"
#include "mzlab/space/family.hpp"
#include "mzlab/space/measure.hpp"

namespace mzlab::space {

// L^p(mu) norm of atom values; admits the quasi-norm range 0 < p < 1.
double lp_norm(std::span<const double> values, const Exponent& p,
               const DiscreteMeasure& mu);

// || (sum_k |f_k|^r)^(1/r) ||_{L^q(mu)}; the r = inf inner aggregate is
// the pointwise max.
double mixed_norm(const FunctionFamily& family, const Exponent& r,
                  const Exponent& q);

// Pointwise l^r aggregate across family rows (the inner part of
// mixed_norm), returned per atom.
std::vector<double> lr_aggregate(const FunctionFamily& family,
                                 const Exponent& r);

// sup_t t * mu(|f| > t)^(1/p) over the (finitely many) levels of |f|.
// Requires 0 < p < inf.
double weak_lp_quasinorm(std::span<const double> values, const Exponent& p,
                         const DiscreteMeasure& mu);

}  // namespace mzlab::space
