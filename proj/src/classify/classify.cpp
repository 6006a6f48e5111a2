#include "mzlab/classify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mzlab/quad/quadrature.hpp"
#include "mzlab/stable/stable_law.hpp"

namespace mzlab::classify {

namespace {

void check_exponent(const space::Exponent& e, const char* name) {
  if (e.is_inf()) return;
  if (e.value() < 1.0)
    throw std::domain_error(std::string("classify: ") + name +
                            " must lie in [1, inf]");
}

KForm make(KStatus st, ValueForm vf, const char* branch) {
  return KForm{st, vf, branch};
}

// c(r,s) with propagated quadrature error, as (value, abs error).
struct Val {
  double v;
  double e;
};

Val moment(double r, double s) {
  stable::MomentValue m = stable::cached_moment_full(r, s);
  return {m.value, m.error_estimate};
}

// a/b with first-order error propagation.
Val ratio(Val a, Val b) {
  const double v = a.v / b.v;
  return {v, v * (a.e / a.v + b.e / b.v)};
}

Val product(Val a, Val b) {
  const double v = a.v * b.v;
  return {v, v * (a.e / a.v + b.e / b.v)};
}

double dual_value(const space::Exponent& e) {
  return e.dual().value();  // caller guarantees the dual is finite
}

}  // namespace

KForm linear_k_form(const space::Exponent& q, const space::Exponent& p,
                    const space::Exponent& r) {
  check_exponent(q, "q");
  check_exponent(p, "p");
  check_exponent(r, "r");

  // Trivial transference: q=1 or p=inf.
  if (q == 1.0 || p.is_inf())
    return make(KStatus::finite, ValueForm::one,
                "linear: q=1 or p=inf; constant 1 for every r");

  // 1 < q <= p < inf: finite exactly on [min(q,2), max(p,2)], value 1.
  if (q <= p) {
    const bool finite = space::min(q, space::Exponent(2.0)) <= r &&
                        r <= space::max(p, space::Exponent(2.0));
    if (finite)
      return make(KStatus::finite, ValueForm::one,
                  "linear: 1<q<=p<inf with min(q,2)<=r<=max(p,2); constant 1");
    return make(KStatus::infinite, ValueForm::none,
                "linear: 1<q<=p<inf with r outside [min(q,2), max(p,2)]; "
                "no finite constant");
  }

  // p < q with q != 1, p != inf.
  if (q <= 2.0 && q < r && r <= 2.0)
    return make(KStatus::finite, ValueForm::moment_ratio,
                "linear: p<q<=2 with q<r<=2; value c(r,q)/c(r,p)");
  if (2.0 <= p && 2.0 <= r && r < p)
    return make(KStatus::finite, ValueForm::dual_moment_ratio,
                "linear: 2<=p<q with 2<=r<p; value c(r',p')/c(r',q')");
  if (p <= 2.0 && 2.0 <= q && r == 2.0) {
    if (q == 2.0)
      return make(KStatus::finite, ValueForm::moment_ratio_r2_q2,
                  "linear: q=2, p<2, r=2; value c(2,2)/c(2,p)");
    if (p == 2.0)
      return make(KStatus::finite, ValueForm::moment_ratio_r2_p2,
                  "linear: p=2, q>2, r=2; value c(2,2)/c(2,q') via the "
                  "adjoint identity k(q,p,r)=k(p',q',r')");
    if (q.is_inf() && p == 1.0)
      return make(KStatus::finite, ValueForm::unknown,
                  "linear: p=1, q=inf, r=2; finite, exact value open "
                  "(this constant is the real Grothendieck constant)");
    return make(KStatus::finite, ValueForm::unknown,
                "linear: p<2<q, r=2; finite, exact value open");
  }
  return make(KStatus::infinite, ValueForm::none,
              "linear: p<q outside every finite branch; no finite constant");
}

KForm multilinear_k_form(std::span<const space::Exponent> q,
                         const space::Exponent& p, const space::Exponent& r) {
  if (q.empty()) throw std::invalid_argument("classify: empty exponent list");
  for (const auto& e : q) check_exponent(e, "q_i");
  check_exponent(p, "p");
  check_exponent(r, "r");

  if (q.size() == 1) return linear_k_form(q[0], p, r);

  bool all_ones = true;
  space::Exponent bq = q[0];
  for (const auto& e : q) {
    if (!(e == 1.0)) all_ones = false;
    bq = space::max(bq, e);
  }
  if (all_ones)
    return make(KStatus::finite, ValueForm::one,
                "multilinear: every input exponent is 1; constant 1 for "
                "every p, r");

  if (p.is_inf()) {
    if (bq <= r)
      return make(KStatus::finite, ValueForm::one,
                  "multilinear p=inf: max(q)<=r; constant 1");
    // divergence threshold m / (1/max(bq',2) + sum_i 1/min(q_i,2))
    const double bqd = bq.is_inf() ? 1.0 : bq.dual().value();
    double denom = 1.0 / std::fmax(bqd, 2.0);
    for (const auto& e : q)
      denom += 1.0 / std::fmin(e.is_inf() ? 2.0 : e.value(), 2.0);
    const double threshold = static_cast<double>(q.size()) / denom;
    const double rv = r.is_inf() ? std::numeric_limits<double>::infinity()
                                 : r.value();
    if (rv < threshold)
      return make(KStatus::infinite, ValueForm::none,
                  "multilinear p=inf: r below the sign-tensor divergence "
                  "threshold m/(1/max(maxq',2) + sum 1/min(q_i,2)); no "
                  "finite constant");
    if (space::min(bq, space::Exponent(2.0)) <= r)
      return make(KStatus::finite, ValueForm::unknown,
                  "multilinear p=inf: min(max(q),2)<=r<max(q); finite by "
                  "interpolation against r=inf, exact value open");
    return make(KStatus::undetermined, ValueForm::none,
                "multilinear p=inf: threshold<=r<min(max(q),2); "
                "finiteness open");
  }

  if (bq <= p) {
    // Same finite window as the linear case at the largest slot.
    const bool finite = space::min(bq, space::Exponent(2.0)) <= r &&
                        r <= space::max(p, space::Exponent(2.0));
    if (!finite)
      return make(KStatus::infinite, ValueForm::none,
                  "multilinear max(q)<=p<inf: r outside "
                  "[min(max(q),2), max(p,2)]; no finite constant");
    if (bq <= r)
      return make(KStatus::finite, ValueForm::one,
                  "multilinear max(q)<=r<=max(p,2): product of per-slot "
                  "constants, each equal to 1");
    return make(KStatus::finite, ValueForm::unknown,
                "multilinear 2<=max(q)<=p with 2<=r<max(q): finite, "
                "exact value open below r=max(q)");
  }

  // p < bq.
  if (bq <= 2.0) {
    const bool finite = (bq < r && r <= 2.0) || (bq == 2.0 && r == 2.0);
    if (finite)
      return make(KStatus::finite, ValueForm::product,
                  "multilinear p<max(q)<=2 with max(q)<r<=2 (or "
                  "max(q)=r=2): value is the product of the per-slot "
                  "constants c(r,q_i)/c(r,p) over slots with q_i>p");
    return make(KStatus::infinite, ValueForm::none,
                "multilinear p<max(q)<=2: r outside (max(q),2]; no "
                "finite constant");
  }
  if (p <= 2.0) {
    if (r == 2.0)
      return make(KStatus::finite, ValueForm::unknown,
                  "multilinear p<=2<max(q), r=2: finite via the "
                  "square-function transference, exact value open");
    return make(KStatus::infinite, ValueForm::none,
                "multilinear p<=2<max(q), r!=2: no finite constant");
  }
  // 2 < p < bq: only necessity (2 <= r < p) plus the r=2 sufficiency.
  if (r == 2.0)
    return make(KStatus::finite, ValueForm::unknown,
                "multilinear 2<p<max(q), r=2: finite via the "
                "square-function transference, exact value open");
  if (2.0 < r.value_or_inf() && r < p)
    return make(KStatus::undetermined, ValueForm::none,
                "multilinear 2<p<max(q), 2<r<p: only necessity is known; "
                "finiteness open");
  return make(KStatus::infinite, ValueForm::none,
              "multilinear 2<p<max(q), r outside [2,p): no finite "
              "constant");
}

namespace {

KClassification from_form(const KForm& f) {
  KClassification c;
  c.status = f.status;
  c.form = f.form;
  c.provenance = f.branch;
  return c;
}

// Evaluate a linear closed form. Returns false if the quadrature
// cannot deliver the value (e.g. r-q is tiny and the moment is
// near-divergent).
bool eval_linear_value(const KForm& f, const space::Exponent& q,
                       const space::Exponent& p, const space::Exponent& r,
                       Val& out) {
  try {
    switch (f.form) {
      case ValueForm::one:
        out = {1.0, 0.0};
        return true;
      case ValueForm::moment_ratio:
        out = ratio(moment(r.value(), q.value()), moment(r.value(), p.value()));
        return true;
      case ValueForm::dual_moment_ratio: {
        const double rd = dual_value(r);
        out = ratio(moment(rd, dual_value(p)), moment(rd, dual_value(q)));
        return true;
      }
      case ValueForm::moment_ratio_r2_q2:
        out = ratio(moment(2.0, 2.0), moment(2.0, p.value()));
        return true;
      case ValueForm::moment_ratio_r2_p2:
        out = ratio(moment(2.0, 2.0), moment(2.0, dual_value(q)));
        return true;
      default:
        return false;
    }
  } catch (const quad::QuadratureFailure&) {
    return false;
  } catch (const std::domain_error&) {
    return false;
  }
}

}  // namespace

KClassification linear_k(const space::Exponent& q, const space::Exponent& p,
                         const space::Exponent& r) {
  const KForm f = linear_k_form(q, p, r);
  KClassification c = from_form(f);
  Val v{};
  if (eval_linear_value(f, q, p, r, v)) {
    c.has_value = true;
    c.value = v.v;
    c.error = v.e;
  } else if (f.form != ValueForm::unknown && f.status == KStatus::finite) {
    c.provenance += " [value not evaluated: moment quadrature infeasible "
                    "this close to the divergence boundary]";
  }
  return c;
}

KClassification multilinear_k(std::span<const space::Exponent> q,
                              const space::Exponent& p,
                              const space::Exponent& r) {
  if (q.size() == 1) return linear_k(q[0], p, r);
  const KForm f = multilinear_k_form(q, p, r);
  KClassification c = from_form(f);
  if (f.form == ValueForm::one) {
    c.has_value = true;
    c.value = 1.0;
    c.error = 0.0;
  } else if (f.form == ValueForm::product) {
    Val acc{1.0, 0.0};
    bool ok = true;
    for (const auto& e : q) {
      KClassification factor = linear_k(e, p, r);
      if (!factor.has_value) {
        ok = false;
        break;
      }
      acc = product(acc, {factor.value, factor.error});
    }
    if (ok) {
      c.has_value = true;
      c.value = acc.v;
      c.error = acc.e;
    } else {
      c.provenance += " [value not evaluated: a slot's moment quadrature "
                      "was infeasible]";
    }
  }
  return c;
}

KClassification product_lower_bound(std::span<const space::Exponent> q,
                                    const space::Exponent& p,
                                    const space::Exponent& r) {
  if (q.empty()) throw std::invalid_argument("classify: empty exponent list");
  KClassification c;
  c.form = ValueForm::product;
  c.provenance =
      "product of the per-slot linear constants (a lower bound for the "
      "multilinear constant)";
  Val acc{1.0, 0.0};
  bool all_known = true;
  for (const auto& e : q) {
    KClassification factor = linear_k(e, p, r);
    if (factor.status == KStatus::infinite) {
      c.status = KStatus::infinite;
      c.form = ValueForm::none;
      c.provenance += "; a slot's linear constant is infinite";
      return c;
    }
    if (factor.status == KStatus::undetermined) {
      c.status = KStatus::undetermined;
      c.form = ValueForm::none;
      c.provenance += "; a slot's linear constant is undetermined";
      return c;
    }
    if (!factor.has_value) {
      all_known = false;
      continue;
    }
    acc = product(acc, {factor.value, factor.error});
  }
  c.status = KStatus::finite;
  if (all_known) {
    c.has_value = true;
    c.value = acc.v;
    c.error = acc.e;
  } else {
    c.form = ValueForm::unknown;
    c.provenance += "; at least one factor has no closed form";
  }
  return c;
}

}  // namespace mzlab::classify
