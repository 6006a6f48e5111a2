#include "mzlab/solver/norm_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "mzlab/kern/kernels.hpp"
#include "mzlab/rng/philox.hpp"
#include "mzlab/space/norms.hpp"

namespace mzlab::solver {

namespace {

bool all_zero(std::span<const double> v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

AlignResult dual_align(std::span<const double> v, const space::Exponent& q,
                       const space::DiscreteMeasure& mu) {
  const std::size_t n = v.size();
  if (n != mu.atom_count())
    throw std::invalid_argument("dual_align: size mismatch");
  AlignResult out;
  out.vector.assign(n, 0.0);

  if (q.is_inf()) {
    // sign vector; sign(0) = +1 keeps the output deterministic
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out.vector[i] = sgn(v[i]);
      acc += std::fabs(v[i]);
    }
    out.value = acc;
    return out;
  }
  if (all_zero(v)) throw std::domain_error("dual_align: undefined alignment");

  const double qv = q.value();
  if (qv < 1.0)
    throw std::domain_error("dual_align: requires q >= 1");
  if (qv == 1.0) {
    // extreme points are +-e_i / w_i; lowest index wins ties
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double cand = std::fabs(v[i]) / mu.weight(i);
      if (cand > best_val) {
        best_val = cand;
        best = i;
      }
    }
    out.vector[best] = sgn(v[best]) / mu.weight(best);
    out.value = best_val;
    return out;
  }

  // 1 < q < inf: |f_i| proportional to (|v_i|/w_i)^(1/(q-1))
  const double expo = 1.0 / (qv - 1.0);
  std::vector<double> mag(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mag[i] = std::pow(std::fabs(v[i]) / mu.weight(i), expo);
    scale = std::fmax(scale, mag[i]);
  }
  if (scale == 0.0) throw std::domain_error("dual_align: undefined alignment");
  double norm_q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mag[i] /= scale;  // guard overflow for extreme exponents
    norm_q += std::pow(mag[i], qv) * mu.weight(i);
  }
  norm_q = std::pow(norm_q, 1.0 / qv);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.vector[i] = sgn(v[i]) * mag[i] / norm_q;
    value += v[i] * out.vector[i];
  }
  out.value = value;
  return out;
}

AlignResult dual_align(std::span<const double> v, const space::Exponent& q) {
  return dual_align(v, q, space::DiscreteMeasure::counting(v.size()));
}

double dual_norm(std::span<const double> v, const space::Exponent& q,
                 const space::DiscreteMeasure& mu) {
  const std::size_t n = v.size();
  if (q.is_inf()) return kern::ops().sum_abs(v.data(), n);
  const double qv = q.value();
  if (qv == 1.0) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      best = std::fmax(best, std::fabs(v[i]) / mu.weight(i));
    return best;
  }
  // || v_i w_i^{-1/q} ||_{q'}  with the weights of mu
  const double qd = q.dual().value();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += std::pow(std::fabs(v[i]), qd) * std::pow(mu.weight(i), 1.0 - qd);
  return std::pow(acc, 1.0 / qd);
}

FamilyAlignResult mixed_dual_align(const space::FunctionFamily& h,
                                   const space::Exponent& r,
                                   const space::Exponent& q) {
  const std::size_t n = h.atom_count();
  const std::size_t K = h.function_count();
  const auto& mu = h.measure();

  // Inner alignment across functions at each atom: direction u(.)(j)
  // with unit l^r norm, achieving H(j) = || h_.(j) ||_{r'}.
  std::vector<double> inner(K * n, 0.0);
  std::vector<double> gain(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (r.is_inf()) {
      // l^inf budget per atom: every function takes its sign
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        inner[k * n + j] = sgn(h.function(k)[j]);
        acc += std::fabs(h.function(k)[j]);
      }
      gain[j] = acc;
      continue;
    }
    const double rv = r.value();
    if (rv == 1.0) {
      std::size_t best = 0;
      double best_val = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double cand = std::fabs(h.function(k)[j]);
        if (cand > best_val) {
          best_val = cand;
          best = k;
        }
      }
      inner[best * n + j] = sgn(h.function(best)[j]);
      gain[j] = best_val;
      continue;
    }
    const double expo = 1.0 / (rv - 1.0);
    double norm_r = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < K; ++k)
      scale = std::fmax(scale, std::fabs(h.function(k)[j]));
    if (scale == 0.0) continue;  // zero column contributes nothing
    for (std::size_t k = 0; k < K; ++k) {
      const double m = std::pow(std::fabs(h.function(k)[j]) / scale, expo);
      inner[k * n + j] = sgn(h.function(k)[j]) * m;
      norm_r += std::pow(m, rv);
    }
    norm_r = std::pow(norm_r, 1.0 / rv);
    double val = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      inner[k * n + j] /= norm_r;
      val += h.function(k)[j] * inner[k * n + j];
    }
    gain[j] = val;
  }

  // Outer profile over atoms under L^q(mu).
  AlignResult profile = dual_align(gain, q, mu);
  std::vector<double> values(K * n, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < n; ++j)
      values[k * n + j] = inner[k * n + j] * profile.vector[j];

  FamilyAlignResult out{space::FunctionFamily(std::move(values), K, mu),
                        profile.value};
  return out;
}

namespace {

// ---- exact modes -----------------------------------------------------

NormBracket make_exact(double value, NormMethod method,
                       std::vector<std::vector<double>> witness) {
  NormBracket b;
  b.lower = value;
  b.upper = value;
  b.method = method;
  b.exact = true;
  b.converged = true;
  b.witness = std::move(witness);
  return b;
}

// m = 1, q = 1: unit-ball extreme points are +-e_i / w_i.
NormBracket exact_linear_q1(const op::MultilinearOperator& T,
                            const space::Exponent& p) {
  const std::size_t n = T.input_dim(0), out_n = T.output_dim();
  const auto& mu = T.input_measure(0);
  std::size_t best = 0;
  double best_val = -1.0;
  std::vector<double> col(out_n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < out_n; ++j) col[j] = T.coeffs()[j * n + i];
    const double v = space::lp_norm(col, p, T.output_measure()) / mu.weight(i);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  std::vector<double> w(n, 0.0);
  w[best] = 1.0 / mu.weight(best);
  return make_exact(best_val, NormMethod::exact_linear, {std::move(w)});
}

// m = 1, p = inf: per output atom the row functional's dual norm.
NormBracket exact_linear_pinf(const op::MultilinearOperator& T,
                              const space::Exponent& q) {
  const std::size_t n = T.input_dim(0), out_n = T.output_dim();
  const auto& mu = T.input_measure(0);
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t j = 0; j < out_n; ++j) {
    std::span<const double> row{T.coeffs().data() + j * n, n};
    const double v = dual_norm(row, q, mu);
    if (v > best_val) {
      best_val = v;
      best = j;
    }
  }
  std::span<const double> row{T.coeffs().data() + best * n, n};
  AlignResult al = dual_align(row, q, mu);
  return make_exact(best_val, NormMethod::exact_linear, {std::move(al.vector)});
}

Eigen::MatrixXd weighted_slice(const op::MultilinearOperator& T,
                               std::size_t j) {
  // D_{mu1}^{-1/2} E_j D_{mu2}^{-1/2} for the bilinear slice at output j
  const std::size_t d1 = T.input_dim(0), d2 = T.input_dim(1);
  Eigen::MatrixXd M(d1, d2);
  for (std::size_t a = 0; a < d1; ++a)
    for (std::size_t b = 0; b < d2; ++b)
      M(a, b) = T.coeffs()[(j * d1 + a) * d2 + b] /
                std::sqrt(T.input_measure(0).weight(a) *
                          T.input_measure(1).weight(b));
  return M;
}

// m = 1, (q,p) = (2,2): weighted largest singular value.
NormBracket exact_linear_spectral(const op::MultilinearOperator& T) {
  const std::size_t n = T.input_dim(0), out_n = T.output_dim();
  Eigen::MatrixXd M(out_n, n);
  for (std::size_t j = 0; j < out_n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      M(j, i) = T.coeffs()[j * n + i] *
                std::sqrt(T.output_measure().weight(j)) /
                std::sqrt(T.input_measure(0).weight(i));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
  const double sigma = svd.singularValues()(0);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = svd.matrixV()(i, 0) / std::sqrt(T.input_measure(0).weight(i));
  return make_exact(sigma, NormMethod::spectral, {std::move(w)});
}

// m = 2, q = (2,2), p = inf or scalar output: slice-wise singular values.
NormBracket exact_bilinear_spectral(const op::MultilinearOperator& T,
                                    const space::Exponent& p) {
  const std::size_t out_n = T.output_dim();
  double best_val = -1.0;
  std::size_t best = 0;
  for (std::size_t j = 0; j < out_n; ++j) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(weighted_slice(T, j));
    double v = svd.singularValues()(0);
    if (!p.is_inf())  // scalar output: single atom carries weight^{1/p}
      v *= std::pow(T.output_measure().weight(j), 1.0 / p.value());
    if (v > best_val) {
      best_val = v;
      best = j;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(weighted_slice(T, best),
                                        Eigen::ComputeThinU |
                                            Eigen::ComputeThinV);
  const std::size_t d1 = T.input_dim(0), d2 = T.input_dim(1);
  std::vector<double> f(d1), g(d2);
  for (std::size_t a = 0; a < d1; ++a)
    f[a] = svd.matrixU()(a, 0) / std::sqrt(T.input_measure(0).weight(a));
  for (std::size_t b = 0; b < d2; ++b)
    g[b] = svd.matrixV()(b, 0) / std::sqrt(T.input_measure(1).weight(b));
  return make_exact(best_val, NormMethod::spectral,
                    {std::move(f), std::move(g)});
}

// Enumeration helpers. A slot with q = inf walks sign vectors (global
// sign fixed, halving the count); q = 1 walks atoms.
struct EnumSlot {
  std::size_t slot;
  bool is_sign;  // else atom
  std::size_t count;
};

std::vector<double> slot_vector(const op::MultilinearOperator& T,
                                const EnumSlot& es, std::size_t index) {
  const std::size_t d = T.input_dim(es.slot);
  std::vector<double> v(d);
  if (es.is_sign) {
    for (std::size_t i = 0; i < d; ++i)
      v[i] = (i == 0) ? 1.0 : ((index >> (i - 1)) & 1 ? -1.0 : 1.0);
  } else {
    std::fill(v.begin(), v.end(), 0.0);
    v[index] = 1.0 / T.input_measure(es.slot).weight(index);
  }
  return v;
}

// Contract T against fixed vectors in every slot except `free_slot`
// (pass arity() for none): result is [output x d_free] (or [output x 1]).
std::vector<double> contract_except(
    const op::MultilinearOperator& T,
    const std::vector<std::vector<double>>& fixed, std::size_t free_slot) {
  const std::size_t m = T.arity();
  const std::size_t out_n = T.output_dim();
  const std::size_t df = free_slot < m ? T.input_dim(free_slot) : 1;
  std::vector<double> res(out_n * df, 0.0);
  std::vector<std::size_t> idx(m, 0);
  const auto& c = T.coeffs();
  std::size_t total = 1;
  for (std::size_t s = 0; s < m; ++s) total *= T.input_dim(s);
  for (std::size_t j = 0; j < out_n; ++j) {
    const std::size_t base = j * total;
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      double prod = 1.0;
      std::size_t fidx = 0;
      for (std::size_t s = m; s-- > 0;) {
        const std::size_t i = rem % T.input_dim(s);
        rem /= T.input_dim(s);
        if (s == free_slot)
          fidx = i;
        else
          prod *= fixed[s][i];
      }
      if (prod != 0.0) res[j * df + fidx] += c[base + flat] * prod;
    }
  }
  return res;
}

struct EnumPlan {
  std::vector<EnumSlot> slots;   // slots to enumerate
  std::size_t free_slot;         // arity() if none
  std::size_t combos = 1;
  bool feasible = false;
};

EnumPlan plan_enumeration(const op::MultilinearOperator& T,
                          std::span<const space::Exponent> q,
                          const space::Exponent& p) {
  EnumPlan plan;
  const std::size_t m = T.arity();
  plan.free_slot = m;
  const bool sup_like = p.is_inf() || T.output_dim() == 1;
  std::vector<std::size_t> general;
  for (std::size_t s = 0; s < m; ++s)
    if (!q[s].is_inf() && q[s].value() != 1.0) general.push_back(s);

  if (general.size() > 1) return plan;
  if (general.size() == 1) {
    if (!sup_like) return plan;  // free slot needs the sup to commute
    plan.free_slot = general[0];
  } else if (sup_like && m > 1) {
    // drop the most expensive enumerable slot; its alignment is exact too
    std::size_t worst = 0, worst_cost = 0;
    for (std::size_t s = 0; s < m; ++s) {
      const std::size_t d = T.input_dim(s);
      const std::size_t cost =
          q[s].is_inf() ? (std::size_t{1} << std::min<std::size_t>(d - 1, 40))
                        : d;
      if (cost > worst_cost) {
        worst_cost = cost;
        worst = s;
      }
    }
    plan.free_slot = worst;
  }

  double cost = 1.0;
  for (std::size_t s = 0; s < m; ++s) {
    if (s == plan.free_slot) continue;
    const std::size_t d = T.input_dim(s);
    EnumSlot es;
    es.slot = s;
    es.is_sign = q[s].is_inf();
    es.count = es.is_sign ? (std::size_t{1} << (d - 1)) : d;
    cost *= static_cast<double>(es.count);
    plan.slots.push_back(es);
  }
  if (cost > static_cast<double>(kEnumGuard)) return plan;
  plan.combos = static_cast<std::size_t>(cost);
  plan.feasible = true;
  return plan;
}

NormBracket exact_enumeration(const op::MultilinearOperator& T,
                              std::span<const space::Exponent> q,
                              const space::Exponent& p, const EnumPlan& plan) {
  const std::size_t m = T.arity();
  const bool has_free = plan.free_slot < m;
  double best_val = -1.0;
  std::vector<std::size_t> best_choice(plan.slots.size(), 0);

  std::vector<std::vector<double>> fixed(m);
  std::vector<std::size_t> choice(plan.slots.size(), 0);
  for (std::size_t combo = 0; combo < plan.combos; ++combo) {
    std::size_t rem = combo;
    for (std::size_t t = 0; t < plan.slots.size(); ++t) {
      choice[t] = rem % plan.slots[t].count;
      rem /= plan.slots[t].count;
    }
    for (std::size_t t = 0; t < plan.slots.size(); ++t)
      fixed[plan.slots[t].slot] = slot_vector(T, plan.slots[t], choice[t]);

    double val;
    if (has_free) {
      std::vector<double> rows =
          contract_except(T, fixed, plan.free_slot);
      const std::size_t df = T.input_dim(plan.free_slot);
      const auto& mu = T.input_measure(plan.free_slot);
      if (T.output_dim() == 1 && !p.is_inf()) {
        const double w0 = T.output_measure().weight(0);
        val = dual_norm({rows.data(), df}, q[plan.free_slot], mu) *
              std::pow(w0, 1.0 / p.value());
      } else {
        val = 0.0;
        for (std::size_t j = 0; j < T.output_dim(); ++j)
          val = std::fmax(
              val, dual_norm({rows.data() + j * df, df}, q[plan.free_slot], mu));
      }
    } else {
      std::vector<double> img = contract_except(T, fixed, m);
      val = space::lp_norm(img, p, T.output_measure());
    }
    if (val > best_val) {
      best_val = val;
      best_choice = choice;
    }
  }

  // rebuild the winning witness
  for (std::size_t t = 0; t < plan.slots.size(); ++t)
    fixed[plan.slots[t].slot] = slot_vector(T, plan.slots[t], best_choice[t]);
  if (has_free) {
    std::vector<double> rows = contract_except(T, fixed, plan.free_slot);
    const std::size_t df = T.input_dim(plan.free_slot);
    const auto& mu = T.input_measure(plan.free_slot);
    std::size_t bestj = 0;
    if (!(T.output_dim() == 1)) {
      double bv = -1.0;
      for (std::size_t j = 0; j < T.output_dim(); ++j) {
        const double v =
            dual_norm({rows.data() + j * df, df}, q[plan.free_slot], mu);
        if (v > bv) {
          bv = v;
          bestj = j;
        }
      }
    }
    AlignResult al =
        dual_align({rows.data() + bestj * df, df}, q[plan.free_slot], mu);
    fixed[plan.free_slot] = std::move(al.vector);
  }
  return make_exact(best_val, NormMethod::vertex_enum, std::move(fixed));
}

// ---- Holder upper bound ---------------------------------------------

double holder_for_order(const op::MultilinearOperator& T,
                        std::span<const space::Exponent> q,
                        const space::Exponent& p,
                        const std::vector<std::size_t>& order) {
  const std::size_t m = T.arity();
  std::vector<std::size_t> dims(m);
  for (std::size_t s = 0; s < m; ++s) dims[s] = T.input_dim(s);
  std::vector<double> cur(T.coeffs().size());
  for (std::size_t i = 0; i < cur.size(); ++i)
    cur[i] = std::fabs(T.coeffs()[i]);
  std::vector<bool> gone(m, false);

  for (std::size_t axis : order) {
    // Contract `axis` by the dual norm of the q_axis unit ball. Layout
    // is row-major [out, live slots in increasing order], so the axis
    // stride is the product of the later live dims; removing the axis
    // keeps the remaining layout row-major.
    std::size_t stride = 1;
    for (std::size_t s = m; s-- > axis + 1;)
      if (!gone[s]) stride *= dims[s];
    const std::size_t d = dims[axis];
    const std::size_t blocks = cur.size() / (d * stride);
    const auto& mu = T.input_measure(axis);
    std::vector<double> next(cur.size() / d);
    std::vector<double> fiber(d);
    for (std::size_t b = 0; b < blocks; ++b)
      for (std::size_t in = 0; in < stride; ++in) {
        for (std::size_t a = 0; a < d; ++a)
          fiber[a] = cur[(b * d + a) * stride + in];
        next[b * stride + in] = dual_norm(fiber, q[axis], mu);
      }
    cur = std::move(next);
    gone[axis] = true;
  }
  return space::lp_norm(cur, p, T.output_measure());
}

// ---- alternating ascent ---------------------------------------------

std::vector<double> apply_vectors(const op::MultilinearOperator& T,
                                  const std::vector<std::vector<double>>& f) {
  std::vector<std::span<const double>> inputs(f.begin(), f.end());
  return T.apply(inputs);
}

struct AscentState {
  std::vector<std::vector<double>> f;  // one per slot, unit L^{q_i}
  double value = 0.0;
};

double ascent_pass(const op::MultilinearOperator& T,
                   std::span<const space::Exponent> q,
                   const space::Exponent& p, AscentState& st) {
  const std::size_t m = T.arity();
  // dual variable g aligned to the current image
  std::vector<double> img = apply_vectors(T, st.f);
  std::vector<double> v(img.size());
  for (std::size_t j = 0; j < img.size(); ++j)
    v[j] = img[j] * T.output_measure().weight(j);
  if (all_zero(v)) return 0.0;
  AlignResult g = dual_align(v, p.dual(), T.output_measure());

  for (std::size_t s = 0; s < m; ++s) {
    // gradient of sum_j w_j g_j T(f...)(j) in slot s
    std::vector<double> grad(T.input_dim(s), 0.0);
    std::vector<double> rows = contract_except(T, st.f, s);
    const std::size_t d = T.input_dim(s);
    for (std::size_t j = 0; j < T.output_dim(); ++j) {
      const double w = g.vector[j] * T.output_measure().weight(j);
      if (w == 0.0) continue;
      kern::ops().add_scaled(grad.data(), rows.data() + j * d, w, d);
    }
    if (all_zero(grad)) return 0.0;
    AlignResult al = dual_align(grad, q[s], T.input_measure(s));
    st.f[s] = std::move(al.vector);
  }
  std::vector<double> img2 = apply_vectors(T, st.f);
  return space::lp_norm(img2, p, T.output_measure());
}

NormBracket ascent_bracket(const op::MultilinearOperator& T,
                           std::span<const space::Exponent> q,
                           const space::Exponent& p, std::size_t budget,
                           std::uint64_t seed) {
  const std::size_t m = T.arity();
  NormBracket b;
  b.method = NormMethod::alternating;
  b.exact = false;
  b.upper = holder_upper(T, q, p);

  const std::size_t starts = 6;
  const std::size_t sweeps = std::max<std::size_t>(budget / starts, 8);
  double best = -1.0;
  std::vector<std::vector<double>> best_f;
  bool best_converged = false;

  for (std::size_t start = 0; start < starts; ++start) {
    AscentState st;
    st.f.resize(m);
    rng::Stream stream(seed, start);
    for (std::size_t s = 0; s < m; ++s) {
      std::vector<double> v(T.input_dim(s));
      if (start == 0)
        std::fill(v.begin(), v.end(), 1.0);
      else
        for (double& x : v) x = stream.next_symmetric();
      double nrm = space::lp_norm(v, q[s], T.input_measure(s));
      if (nrm == 0.0) {
        v[0] = 1.0;
        nrm = space::lp_norm(v, q[s], T.input_measure(s));
      }
      for (double& x : v) x /= nrm;
      st.f[s] = std::move(v);
    }
    double prev = 0.0;
    bool converged = false;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
      double val;
      try {
        val = ascent_pass(T, q, p, st);
      } catch (const std::domain_error&) {
        break;  // dead end (zero gradient); next start
      }
      if (val == 0.0) break;
      if (val <= prev * (1.0 + 1e-10) && sweep > 0) {
        prev = std::fmax(prev, val);
        converged = true;
        break;
      }
      prev = val;
    }
    if (prev > best) {
      best = prev;
      best_f = st.f;
      best_converged = converged;
    }
  }
  b.lower = std::fmax(best, 0.0);
  b.witness = std::move(best_f);
  b.converged = best_converged;
  if (b.lower > b.upper) b.upper = b.lower;  // fp guard; holder dominates
  return b;
}

}  // namespace

double holder_upper(const op::MultilinearOperator& T,
                    std::span<const space::Exponent> q,
                    const space::Exponent& p) {
  const std::size_t m = T.arity();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::fmin(best, holder_for_order(T, q, p, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

NormBracket operator_norm(const op::MultilinearOperator& T,
                          std::span<const space::Exponent> q,
                          const space::Exponent& p, NormMode mode,
                          std::size_t budget, std::uint64_t seed) {
  if (q.size() != T.arity())
    throw std::invalid_argument("operator_norm: one exponent per slot");
  for (const auto& e : q)
    if (!e.is_inf() && e.value() < 1.0)
      throw std::domain_error("operator_norm: input exponents need q >= 1");
  if (!p.is_inf() && p.value() < 1.0)
    throw std::domain_error("operator_norm: output exponent needs p >= 1");

  if (mode != NormMode::ascent) {
    const std::size_t m = T.arity();
    if (m == 1) {
      if (q[0] == 1.0) return exact_linear_q1(T, p);
      if (p.is_inf()) return exact_linear_pinf(T, q[0]);
      if (q[0] == 2.0 && p == 2.0) return exact_linear_spectral(T);
    }
    if (m == 2 && q[0] == 2.0 && q[1] == 2.0 &&
        (p.is_inf() || T.output_dim() == 1))
      return exact_bilinear_spectral(T, p);
    EnumPlan plan = plan_enumeration(T, q, p);
    if (plan.feasible) return exact_enumeration(T, q, p, plan);
    if (mode == NormMode::exact)
      throw std::domain_error(
          "operator_norm: no exact mode for this shape (or enumeration "
          "guard exceeded)");
  }
  return ascent_bracket(T, q, p, budget, seed);
}

AscentResult family_ascent(const op::MultilinearOperator& T,
                           std::span<const space::Exponent> q,
                           const space::Exponent& p, const space::Exponent& r,
                           std::span<const std::size_t> family_sizes,
                           std::size_t budget, std::uint64_t seed) {
  const std::size_t m = T.arity();
  if (family_sizes.size() != m)
    throw std::invalid_argument("family_ascent: one family size per slot");
  for (const auto& e : q)
    if (!e.is_inf() && e.value() < 1.0)
      throw std::domain_error("family_ascent: q >= 1 required");
  if (!r.is_inf() && r.value() < 1.0)
    throw std::domain_error("family_ascent: r >= 1 required");
  if (!p.is_inf() && p.value() < 1.0)
    throw std::domain_error("family_ascent: p >= 1 required");

  std::vector<std::size_t> counts(family_sizes.begin(), family_sizes.end());
  std::size_t tuples = 1;
  for (std::size_t c : counts) tuples *= c;
  const std::size_t out_n = T.output_dim();

  auto families_value = [&](const std::vector<space::FunctionFamily>& F) {
    return op::extension_lhs(
        T, std::span<const space::FunctionFamily>(F.data(), F.size()), r, p);
  };

  const std::size_t starts = 4;
  const std::size_t sweeps = std::max<std::size_t>(budget / starts, 6);
  AscentResult best;

  for (std::size_t start = 0; start < starts; ++start) {
    // seed families: basis-prefix, concentrated, random
    std::vector<space::FunctionFamily> F;
    rng::Stream stream(seed, 1000 + start);
    for (std::size_t s = 0; s < m; ++s) {
      const std::size_t d = T.input_dim(s);
      std::vector<double> vals(counts[s] * d, 0.0);
      if (start == 0) {
        for (std::size_t k = 0; k < counts[s]; ++k) vals[k * d + (k % d)] = 1.0;
      } else if (start == 1) {
        for (std::size_t k = 0; k < counts[s]; ++k) vals[k * d] = 1.0;
      } else {
        for (double& v : vals) v = stream.next_symmetric();
      }
      space::FunctionFamily fam(std::move(vals), counts[s],
                                T.input_measure(s));
      const double nrm = space::mixed_norm(fam, r, q[s]);
      if (nrm > 0.0)
        for (double& v : fam.values()) v /= nrm;
      F.push_back(std::move(fam));
    }

    double prev = families_value(F);
    bool converged = false;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
      // dual step: G aligned against w_j * T(f tuple)(j)
      std::vector<double> U(tuples * out_n);
      std::vector<std::size_t> tup(m);
      std::vector<std::span<const double>> inputs(m);
      for (std::size_t t = 0; t < tuples; ++t) {
        std::size_t rem = t;
        for (std::size_t s = m; s-- > 0;) {
          tup[s] = rem % counts[s];
          rem /= counts[s];
        }
        for (std::size_t s = 0; s < m; ++s)
          inputs[s] = F[s].function(tup[s]);
        std::vector<double> img =
            T.apply(std::span<const std::span<const double>>(inputs));
        for (std::size_t j = 0; j < out_n; ++j)
          U[t * out_n + j] = img[j] * T.output_measure().weight(j);
      }
      if (all_zero(U)) break;
      space::FunctionFamily Ufam(std::move(U), tuples, T.output_measure());
      std::optional<FamilyAlignResult> G;
      try {
        G.emplace(mixed_dual_align(Ufam, r.dual(), p.dual()));
      } catch (const std::domain_error&) {
        break;
      }

      // family steps
      bool aligned_all = true;
      for (std::size_t s = 0; s < m; ++s) {
        const std::size_t d = T.input_dim(s);
        std::vector<double> H(counts[s] * d, 0.0);
        for (std::size_t t = 0; t < tuples; ++t) {
          std::size_t rem = t;
          for (std::size_t s2 = m; s2-- > 0;) {
            tup[s2] = rem % counts[s2];
            rem /= counts[s2];
          }
          std::vector<std::vector<double>> fixed(m);
          for (std::size_t s2 = 0; s2 < m; ++s2)
            if (s2 != s)
              fixed[s2] = {F[s2].function(tup[s2]).begin(),
                           F[s2].function(tup[s2]).end()};
          std::vector<double> rows = contract_except(T, fixed, s);
          for (std::size_t j = 0; j < out_n; ++j) {
            const double w =
                G->family.function(t)[j] * T.output_measure().weight(j);
            if (w == 0.0) continue;
            kern::ops().add_scaled(H.data() + tup[s] * d, rows.data() + j * d,
                                   w, d);
          }
        }
        if (all_zero(H)) {
          aligned_all = false;
          break;
        }
        space::FunctionFamily Hf(std::move(H), counts[s], T.input_measure(s));
        try {
          FamilyAlignResult al = mixed_dual_align(Hf, r, q[s]);
          F[s] = std::move(al.family);
        } catch (const std::domain_error&) {
          aligned_all = false;
          break;
        }
      }
      if (!aligned_all) break;

      const double val = families_value(F);
      if (val <= prev * (1.0 + 1e-10) && sweep > 0) {
        prev = std::fmax(prev, val);
        converged = true;
        break;
      }
      prev = std::fmax(prev, val);
    }

    if (prev > best.value || best.families.empty()) {
      best.value = prev;
      best.families = F;
      best.converged = converged;
    }
  }
  return best;
}

}  // namespace mzlab::solver
