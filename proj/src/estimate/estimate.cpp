#include "mzlab/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "mzlab/kern/kernels.hpp"
#include "mzlab/rng/philox.hpp"
#include "mzlab/space/measure.hpp"
#include "mzlab/space/norms.hpp"
#include "mzlab/witnesses.hpp"

namespace mzlab::estimate {

using space::DiscreteMeasure;
using space::Exponent;
using space::FunctionFamily;

namespace {

void check_exponent(const Exponent& e, const char* name) {
  if (!e.is_inf() && e.value() < 1.0)
    throw std::domain_error(std::string("estimate_kn: ") + name +
                            " must lie in [1, inf]");
}

double inv(const Exponent& e) { return e.is_inf() ? 0.0 : 1.0 / e.value(); }

// One fully evaluated witness: everything needed to certify
// lhs / (bracket.upper * rhs) as a lower bound on k^(n).
struct Candidate {
  op::MultilinearOperator T;
  std::vector<FunctionFamily> families;
  solver::NormBracket bracket;
  double lhs = 0.0;
  double rhs = 1.0;
  double lower = 0.0;
  std::string strategy;
  bool converged = true;
};

double certified_ratio(double lhs, double upper, double rhs) {
  if (!(upper > 0.0) || !(rhs > 0.0) || !std::isfinite(upper)) return 0.0;
  return lhs / (upper * rhs);
}

Candidate evaluate_candidate(op::MultilinearOperator T,
                             std::vector<FunctionFamily> families,
                             solver::NormBracket bracket, const Exponent& r,
                             const Exponent& p,
                             std::span<const Exponent> q,
                             std::string strategy) {
  Candidate c{std::move(T), std::move(families), std::move(bracket),
              0.0,          1.0,                 0.0,
              {},           true};
  c.lhs = op::extension_lhs(
      c.T, std::span<const FunctionFamily>(c.families.data(),
                                           c.families.size()),
      r, p);
  c.rhs = 1.0;
  for (std::size_t s = 0; s < c.families.size(); ++s)
    c.rhs *= space::mixed_norm(c.families[s], r, q[s]);
  c.lower = certified_ratio(c.lhs, c.bracket.upper, c.rhs);
  c.strategy = std::move(strategy);
  c.converged = c.bracket.converged;
  return c;
}

// Family-size cap keeping the identity-tensor evaluation (K^m tuples,
// K^m output atoms, K^m coefficients per output) at desk scale.
std::size_t identity_cap(std::size_t m) {
  double cap = std::pow(3.0e7, 1.0 / (3.0 * static_cast<double>(m)));
  return std::min<std::size_t>(16, static_cast<std::size_t>(cap));
}

// Tensor product of identity maps on K counting atoms per slot, with
// the K basis functions as every family. The norm factorizes exactly
// over the slots, so the bracket is tight and the certificate sharp.
Candidate identity_candidate(std::span<const Exponent> q, const Exponent& p,
                             const Exponent& r, std::size_t K) {
  const std::size_t m = q.size();
  const DiscreteMeasure atoms = DiscreteMeasure::counting(K);

  std::vector<op::MultilinearOperator> factors;
  factors.reserve(m);
  for (std::size_t s = 0; s < m; ++s)
    factors.push_back(op::MultilinearOperator::identity(atoms));
  op::MultilinearOperator T = op::tensor_product(
      std::span<const op::MultilinearOperator>(factors.data(), factors.size()));

  solver::NormBracket bracket;
  bracket.lower = bracket.upper = 1.0;
  bracket.method = solver::NormMethod::exact_linear;
  bracket.exact = true;
  bracket.converged = true;
  for (std::size_t s = 0; s < m; ++s) {
    solver::NormBracket per = identity_norm_bracket(K, q[s], p);
    bracket.lower *= per.lower;
    bracket.upper *= per.upper;
    bracket.witness.push_back(per.witness.front());
  }

  std::vector<FunctionFamily> families;
  families.reserve(m);
  for (std::size_t s = 0; s < m; ++s)
    families.push_back(FunctionFamily::basis(atoms));

  return evaluate_candidate(std::move(T), std::move(families),
                            std::move(bracket), r, p, q, "tensor_identity");
}

// Scalar bilinear form with Sylvester coefficients on two l^inf slots.
// The exact sign-vertex norm certifies the ratio n^(2/r) / ||T||.
Candidate hadamard_candidate(std::span<const Exponent> q, const Exponent& p,
                             const Exponent& r, std::size_t n_h) {
  const DiscreteMeasure atoms = DiscreteMeasure::counting(n_h);
  op::MultilinearOperator T({atoms, atoms}, DiscreteMeasure::counting(1),
                            witnesses::sylvester_matrix(n_h));
  solver::NormBracket bracket =
      solver::operator_norm(T, q, p, solver::NormMode::exact);

  std::vector<FunctionFamily> families{FunctionFamily::basis(atoms),
                                       FunctionFamily::basis(atoms)};
  return evaluate_candidate(std::move(T), std::move(families),
                            std::move(bracket), r, p, q, "hadamard_form");
}

// Outer product of the tuple's functions, flattened row-major to match
// the coefficient layout (last slot fastest).
std::vector<double> tuple_outer(const std::vector<FunctionFamily>& F,
                                std::span<const std::size_t> tup) {
  std::vector<double> out{1.0};
  for (std::size_t s = 0; s < F.size(); ++s) {
    std::span<const double> f = F[s].function(tup[s]);
    std::vector<double> next(out.size() * f.size());
    for (std::size_t a = 0; a < out.size(); ++a)
      for (std::size_t b = 0; b < f.size(); ++b)
        next[a * f.size() + b] = out[a] * f[b];
    out = std::move(next);
  }
  return out;
}

// Alternating search over a free coefficient tensor: family ascent at
// fixed T, then one dual-aligned update of the coefficients, keeping
// whichever iterate certifies best. Every iterate is certified through
// operator_norm's upper endpoint, so a bad step can never overstate
// the result.
std::optional<Candidate> ascent_candidate(std::span<const Exponent> q,
                                          const Exponent& p, const Exponent& r,
                                          std::size_t n,
                                          std::span<const std::size_t> dims,
                                          std::size_t out_dim,
                                          std::size_t budget,
                                          std::uint64_t seed,
                                          std::uint64_t variant) {
  const std::size_t m = q.size();
  std::vector<DiscreteMeasure> in_measures;
  std::vector<std::size_t> counts;
  std::size_t coeff_n = out_dim;
  for (std::size_t s = 0; s < m; ++s) {
    in_measures.push_back(DiscreteMeasure::counting(dims[s]));
    counts.push_back(std::min(n, dims[s]));
    coeff_n *= dims[s];
  }
  const DiscreteMeasure out_measure = DiscreteMeasure::counting(out_dim);

  rng::Stream stream(seed, 40 + variant);
  std::vector<double> coeffs(coeff_n);
  if (variant % 2 == 0) {
    for (double& c : coeffs) c = stream.next_unit() < 0.5 ? -1.0 : 1.0;
  } else {
    for (double& c : coeffs) c = stream.next_symmetric();
  }
  op::MultilinearOperator T(in_measures, out_measure, std::move(coeffs));

  std::optional<Candidate> best;
  const std::size_t rounds = 3;
  for (std::size_t round = 0; round < rounds; ++round) {
    solver::NormBracket bracket =
        solver::operator_norm(T, q, p, solver::NormMode::automatic, budget,
                              seed + round);
    solver::AscentResult fam = solver::family_ascent(
        T, q, p, r, counts, budget, seed + 7 * round + variant);
    if (fam.families.empty()) break;

    Candidate cand = evaluate_candidate(T, fam.families, bracket, r, p, q,
                                        "coefficient_ascent");
    cand.converged = fam.converged && bracket.converged;
    if (!best || cand.lower > best->lower) best = cand;

    if (round + 1 == rounds) break;

    // Dual-align the aggregate, then push the coefficients toward the
    // gradient of the certified numerator at fixed families.
    const std::vector<FunctionFamily>& F = best->families;
    std::size_t tuples = 1;
    for (std::size_t s = 0; s < m; ++s) tuples *= F[s].function_count();
    std::vector<double> U(tuples * out_dim);
    std::vector<std::size_t> tup(m);
    std::vector<std::span<const double>> inputs(m);
    for (std::size_t t = 0; t < tuples; ++t) {
      std::size_t rem = t;
      for (std::size_t s = m; s-- > 0;) {
        tup[s] = rem % F[s].function_count();
        rem /= F[s].function_count();
      }
      for (std::size_t s = 0; s < m; ++s) inputs[s] = F[s].function(tup[s]);
      std::vector<double> img =
          T.apply(std::span<const std::span<const double>>(inputs));
      for (std::size_t j = 0; j < out_dim; ++j)
        U[t * out_dim + j] = img[j] * out_measure.weight(j);
    }
    FunctionFamily Ufam(std::move(U), tuples, out_measure);
    std::optional<solver::FamilyAlignResult> G;
    try {
      G.emplace(solver::mixed_dual_align(Ufam, r.dual(), p.dual()));
    } catch (const std::domain_error&) {
      break;
    }

    const std::size_t inner = coeff_n / out_dim;
    std::vector<double> grad(coeff_n, 0.0);
    for (std::size_t t = 0; t < tuples; ++t) {
      std::size_t rem = t;
      for (std::size_t s = m; s-- > 0;) {
        tup[s] = rem % F[s].function_count();
        rem /= F[s].function_count();
      }
      std::vector<double> outer = tuple_outer(F, tup);
      for (std::size_t j = 0; j < out_dim; ++j) {
        const double w = G->family.function(t)[j] * out_measure.weight(j);
        if (w == 0.0) continue;
        kern::ops().add_scaled(grad.data() + j * inner, outer.data(), w,
                               inner);
      }
    }
    double peak = 0.0;
    for (double g : grad) peak = std::fmax(peak, std::fabs(g));
    if (peak == 0.0) break;
    for (double& g : grad) g /= peak;
    T.coeffs() = std::move(grad);
  }
  return best;
}

}  // namespace

solver::NormBracket identity_norm_bracket(std::size_t n, const Exponent& q,
                                          const Exponent& p) {
  if (n == 0)
    throw std::invalid_argument("identity_norm_bracket: empty space");
  check_exponent(q, "q");
  check_exponent(p, "p");
  // On n counting atoms, l^q embeds in l^p with constant 1 when p >= q
  // (power-mean inequality) and with constant n^(1/p - 1/q) when
  // p < q (Holder with exponent q/p); basis vectors and the constant
  // vector attain the two cases.
  const double gap = inv(p) - inv(q);
  solver::NormBracket b;
  b.method = solver::NormMethod::exact_linear;
  b.exact = true;
  b.converged = true;
  std::vector<double> w(n, 0.0);
  if (gap <= 0.0) {
    b.lower = b.upper = 1.0;
    w[0] = 1.0;
  } else {
    b.lower = b.upper = std::pow(static_cast<double>(n), gap);
    const double unit =
        q.is_inf() ? 1.0
                   : std::pow(static_cast<double>(n), -1.0 / q.value());
    std::fill(w.begin(), w.end(), unit);
  }
  b.witness.push_back(std::move(w));
  return b;
}

KEstimate estimate_kn(std::span<const Exponent> q, const Exponent& p,
                      const Exponent& r, std::size_t n,
                      std::span<const std::size_t> dims, std::size_t budget,
                      std::uint64_t seed) {
  const std::size_t m = q.size();
  if (m == 0) throw std::invalid_argument("estimate_kn: empty exponent list");
  if (n == 0) throw std::invalid_argument("estimate_kn: family size cap >= 1");
  for (const auto& e : q) check_exponent(e, "q");
  check_exponent(p, "p");
  check_exponent(r, "r");
  if (dims.empty())
    throw std::invalid_argument("estimate_kn: no witness dimensions");
  if (dims.size() != 1 && dims.size() != m)
    throw std::invalid_argument(
        "estimate_kn: dims must have one entry or one per slot");
  std::vector<std::size_t> dim(m);
  for (std::size_t s = 0; s < m; ++s) {
    dim[s] = dims.size() == 1 ? dims[0] : dims[s];
    if (dim[s] == 0)
      throw std::invalid_argument("estimate_kn: zero witness dimension");
  }
  const std::size_t min_dim = *std::min_element(dim.begin(), dim.end());

  std::vector<Candidate> candidates;

  // Tensor identity, largest admissible basis family and the trivial
  // one-function fallback (which certifies exactly 1).
  const std::size_t K =
      std::max<std::size_t>(1, std::min({n, min_dim, identity_cap(m)}));
  candidates.push_back(identity_candidate(q, p, r, K));
  if (K > 1) candidates.push_back(identity_candidate(q, p, r, 1));

  // Sylvester form when both slots are sup-normed.
  if (m == 2 && q[0].is_inf() && q[1].is_inf()) {
    std::size_t n_h = 1;
    while (2 * n_h <= std::min({n, dim[0], dim[1], std::size_t{16}}))
      n_h *= 2;
    if (n_h >= 2) candidates.push_back(hadamard_candidate(q, p, r, n_h));
  }

  // Free-coefficient search, vector and scalar output shapes, sign and
  // smooth starts.
  if (budget > 0) {
    for (std::uint64_t variant = 0; variant < 4; ++variant) {
      const std::size_t out_dim = variant < 2 ? min_dim : 1;
      std::optional<Candidate> c = ascent_candidate(
          q, p, r, n, dim, out_dim, budget, seed, variant);
      if (c) candidates.push_back(std::move(*c));
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].lower > candidates[best].lower) best = i;
  Candidate& win = candidates[best];

  KEstimate est;
  est.q.assign(q.begin(), q.end());
  est.p = p;
  est.r = r;
  est.n = n;
  est.lower = win.lower;
  est.lhs = win.lhs;
  est.norm_upper = win.bracket.upper;
  est.rhs_product = win.rhs;
  est.witness_op = std::move(win.T);
  est.witness_families = std::move(win.families);
  est.bracket = std::move(win.bracket);
  est.seed = seed;
  est.budget = budget;
  est.converged = win.converged;
  est.strategy = std::move(win.strategy);
  return est;
}

}  // namespace mzlab::estimate
