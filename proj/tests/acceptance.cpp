// Acceptance gate: end-to-end checks of the numerical laboratory, one
// line of output per criterion. Each check states a mathematical
// property of the extension-constant machinery (classification,
// stable moments, witness growth, tensor structure, positivity,
// duality, weak norms) and verifies it at fixed tolerances with
// deterministic seeds. The process exit code is the number of failed
// criteria, so CTest and CI treat any regression as a hard failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mzlab/classify.hpp"
#include "mzlab/estimate.hpp"
#include "mzlab/op/multilinear.hpp"
#include "mzlab/rng/philox.hpp"
#include "mzlab/solver/norm_solver.hpp"
#include "mzlab/space/norms.hpp"
#include "mzlab/stable/stable_law.hpp"
#include "mzlab/witnesses.hpp"
#include "support/compare.hpp"

namespace {

using mzlab::space::DiscreteMeasure;
using mzlab::space::Exponent;
using mzlab::space::FunctionFamily;

Exponent E(double v) { return test_support::to_exponent(v); }

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return std::string(buf);
}

// --- 1. two independent codings of the linear case analysis ----------

bool classifier_grid_agreement(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> qs = test_support::exponent_grid();
  const std::vector<double> rs = test_support::r_grid();

  std::size_t triples = 0, mismatches = 0, m1_mismatches = 0;
  for (double q : qs) {
    const Exponent eq = E(q);
    for (double p : qs) {
      const Exponent ep = E(p);
      for (double r : rs) {
        const Exponent er = E(r);
        const auto fa = mzlab::classify::linear_k_form(eq, ep, er);
        const auto fb = engine_b::linear(q, p, r);
        ++triples;
        if (test_support::a_status(fa) != test_support::b_status(fb) ||
            test_support::a_shape(fa) != test_support::b_shape(fb))
          ++mismatches;
        const std::array<Exponent, 1> one{eq};
        const auto fm = mzlab::classify::multilinear_k_form(one, ep, er);
        if (fm.status != fa.status || fm.form != fa.form) ++m1_mismatches;
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  detail = std::to_string(triples) + " triples, " +
           std::to_string(mismatches) + " engine mismatches, " +
           std::to_string(m1_mismatches) + " m=1 mismatches, " +
           fmt("%.1fs", secs);
  return triples >= 100000 && mismatches == 0 && m1_mismatches == 0 &&
         secs < 10.0;
}

// --- 2. stable moment constants against closed forms and Monte Carlo -

bool stable_moment_oracles(std::string& detail) {
  using namespace mzlab::stable;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;

  const double g = stable_moment(StableLaw(2.0), 2.0).value;
  const double gauss_err = std::fabs(g - std::sqrt(2.0));
  ok = ok && gauss_err <= 1e-6;

  const double c = stable_moment(StableLaw(1.0), 0.5).value;
  const double cauchy_err = std::fabs(c - 2.0);
  ok = ok && cauchy_err <= 1e-6;

  double worst_gap = 0.0;
  const std::array<std::array<double, 2>, 2> pairs = {{{1.5, 1.0},
                                                       {1.8, 1.2}}};
  for (const auto& rs : pairs) {
    const MomentValue quad = stable_moment(StableLaw(rs[0]), rs[1]);
    const MomentValue mc =
        stable_moment(StableLaw(rs[0]), rs[1], MomentMethod::monte_carlo,
                      1e-7, 1, 1'000'000);
    const double gap = std::fabs(quad.value - mc.value);
    const double band = quad.error_estimate + mc.error_estimate;
    worst_gap = std::max(worst_gap, gap - band);
    ok = ok && gap <= band;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  detail = fmt("sqrt2 gap %.1e, cauchy gap %.1e, ", gauss_err, cauchy_err) +
           fmt("worst mc band slack %.1e, %.1fs", worst_gap, secs);
  return ok && secs < 60.0;
}

// --- 3. stable linearization identity and the embedding inequality ---

bool stable_identity_and_embedding(std::string& detail) {
  using namespace mzlab::stable;
  const std::array<double, 3> coeffs = {1.0, 2.0, 3.0};
  const double rel =
      check_stable_identity(StableLaw(1.5), 1.0, coeffs, 1'000'000, 21);
  bool ok = rel <= 0.02;

  // Twenty random bilinear instances cycling through every regime of
  // the lower-bound constant: p < r < 2, p < r = 2, r = 2 < p, and
  // r < 2 <= p.
  mzlab::rng::Stream gen(99, 7);
  double worst = 0.0;
  for (std::size_t t = 0; t < 20; ++t) {
    double r = 1.5, p = 1.0;
    switch (t % 4) {
      case 0: r = 1.5; p = 1.0; break;
      case 1: r = 2.0; p = 1.3; break;
      case 2: r = 2.0; p = 2.6; break;
      case 3: r = 1.5; p = 1.8; break;
    }
    const std::array<std::size_t, 2> dims = {2 + t % 2, 2 + (t / 2) % 2};
    std::vector<double> a(dims[0] * dims[1]);
    for (double& x : a) x = gen.next_symmetric();
    const EmbeddingCheck chk = check_embedding_inequality(
        StableLaw(r), p, dims, a, 40'000, 1000 + t);
    const double slack = chk.margin + 3.0 * chk.std_error;
    worst = std::min(worst, slack);
    ok = ok && chk.margin >= -3.0 * chk.std_error;
  }
  detail = fmt("identity rel err %.4f, worst margin slack %.2e", rel, worst);
  return ok;
}

// --- 4. sign-form ratio: exact value at n=2 and r=1 divergence -------

bool sign_form_ratio_growth(std::string& detail) {
  using namespace mzlab::witnesses;
  const auto t0 = std::chrono::steady_clock::now();
  const std::array<Exponent, 2> q = {Exponent::infinity(),
                                     Exponent::infinity()};
  const std::array<std::uint64_t, 1> seeds = {1};

  const std::array<std::size_t, 1> n2 = {2};
  const GrowthReport base = divergence_probe(2, n2, q, E(4.0 / 3.0), seeds);
  const double gap = std::fabs(base.rows[0].ratio - std::sqrt(2.0));
  bool ok = gap <= 1e-9;

  const std::array<std::size_t, 4> ns = {2, 4, 8, 16};
  const GrowthReport grow = divergence_probe(2, ns, q, E(1.0), seeds);
  for (std::size_t i = 0; i + 1 < grow.rows.size(); ++i)
    ok = ok && grow.rows[i + 1].ratio >= grow.rows[i].ratio - 1e-9;
  const double last = grow.rows.back().ratio;
  ok = ok && std::fabs(last - 4.0) <= 1e-9;

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  detail = fmt("n=2 ratio gap %.1e, n=16 ratio %.10f, ", gap, last) +
           fmt("%.1fs", secs);
  return ok && secs < 30.0;
}

// --- 5. random sign tensors force growth at (2,2), p=inf, r=1 --------

bool random_sign_tensor_growth(std::string& detail) {
  using namespace mzlab::witnesses;
  const auto t0 = std::chrono::steady_clock::now();
  const std::array<Exponent, 2> q = {E(2.0), E(2.0)};
  const std::array<std::size_t, 3> ns = {8, 16, 32};
  const std::array<std::uint64_t, 3> seeds = {10, 2, 30};
  const GrowthReport rep = divergence_probe(2, ns, q, E(1.0), seeds);
  const double factor = rep.rows[2].ratio / rep.rows[0].ratio;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  detail = fmt("ratio growth factor %.4f (need >= 1.8), %.1fs", factor, secs);
  return factor >= 1.8 && secs < 60.0;
}

// --- 6. tensor products: norms and extension aggregates factorize ----

bool tensor_product_factorization(std::string& detail) {
  using mzlab::op::MultilinearOperator;
  namespace solver = mzlab::solver;
  mzlab::rng::Stream gen(606, 0);

  const auto rand_measure = [&](std::size_t d) {
    std::vector<double> w(d);
    for (double& x : w) x = 0.5 + gen.next_unit();
    return DiscreteMeasure(w);
  };
  struct Factor {
    MultilinearOperator T;
    Exponent q;
  };
  const auto rand_factor = [&]() {
    const std::size_t d = 2 + gen.next_u64() % 4;
    const std::size_t o = 1 + gen.next_u64() % 4;
    DiscreteMeasure in = rand_measure(d);
    DiscreteMeasure out = rand_measure(o);
    std::vector<double> c(o * d);
    for (double& x : c) x = gen.next_symmetric();
    Exponent q = (gen.next_u64() & 1u) ? Exponent::infinity() : Exponent(1.0);
    return Factor{MultilinearOperator({in}, out, std::move(c)), q};
  };
  const auto rand_family = [&](const DiscreteMeasure& mu) {
    std::vector<double> v(2 * mu.atom_count());
    for (double& x : v) x = gen.next_symmetric();
    return FunctionFamily(v, 2, mu);
  };

  const std::array<Exponent, 3> ps = {E(1.0), E(2.5), Exponent::infinity()};
  const std::array<Exponent, 3> rx = {E(1.3), E(2.0), Exponent::infinity()};
  double worst_norm = 0.0, worst_lhs = 0.0;
  bool ok = true;
  for (std::size_t t = 0; t < 100; ++t) {
    const Factor f1 = rand_factor();
    const Factor f2 = rand_factor();
    const Exponent p = ps[t % 3];
    const Exponent r = rx[(t / 3) % 3];

    const std::array<Exponent, 1> q1{f1.q}, q2{f2.q};
    const auto b1 =
        solver::operator_norm(f1.T, q1, p, solver::NormMode::exact);
    const auto b2 =
        solver::operator_norm(f2.T, q2, p, solver::NormMode::exact);
    const std::array<MultilinearOperator, 2> facs = {f1.T, f2.T};
    const MultilinearOperator TP = mzlab::op::tensor_product(facs);
    const std::array<Exponent, 2> qq = {f1.q, f2.q};
    const auto bp = solver::operator_norm(TP, qq, p, solver::NormMode::exact);

    const double prod = b1.upper * b2.upper;
    const double nerr =
        std::fabs(bp.upper - prod) / std::max(1.0, std::fabs(prod));
    worst_norm = std::max(worst_norm, nerr);
    ok = ok && bp.exact && nerr <= 1e-8;

    const FunctionFamily F1 = rand_family(f1.T.input_measure(0));
    const FunctionFamily F2 = rand_family(f2.T.input_measure(0));
    const std::array<FunctionFamily, 2> fams = {F1, F2};
    const std::array<FunctionFamily, 1> fam1 = {F1}, fam2 = {F2};
    const double joint = mzlab::op::extension_lhs(TP, fams, r, p);
    const double split = mzlab::op::extension_lhs(f1.T, fam1, r, p) *
                         mzlab::op::extension_lhs(f2.T, fam2, r, p);
    const double lerr =
        std::fabs(joint - split) / std::max(1.0, std::fabs(split));
    worst_lhs = std::max(worst_lhs, lerr);
    ok = ok && lerr <= 1e-10;
  }
  detail = fmt("worst norm err %.1e, worst lhs err %.1e", worst_norm,
               worst_lhs);
  return ok;
}

// --- 7. estimates at triples where the constant equals 1 -------------

bool equality_case_estimates(std::string& detail) {
  using mzlab::estimate::estimate_kn;
  const std::array<Exponent, 2> q22 = {E(2.0), E(2.0)};
  const std::array<Exponent, 2> q11 = {E(1.0), E(1.0)};
  const std::array<std::size_t, 2> dims = {4, 4};

  const auto run = [&](std::span<const Exponent> q, double p, double r,
                       std::size_t budget) {
    return estimate_kn(q, E(p), E(r), 4, dims, budget, 1);
  };
  const auto full_a = run(q22, 2.0, 2.0, 200);
  const auto full_b = run(q11, 1.5, 2.0, 200);
  const auto id_a = run(q22, 2.0, 2.0, 0);
  const auto id_b = run(q11, 1.5, 2.0, 0);

  const auto in_band = [](const mzlab::estimate::KEstimate& e) {
    return e.lower >= 0.9 && e.lower <= 1.0 + 1e-6;
  };
  const bool ok = in_band(full_a) && in_band(full_b) &&
                  id_a.lower >= 0.999 && id_b.lower >= 0.999 &&
                  in_band(id_a) && in_band(id_b);
  detail = fmt("searched %.6f / %.6f, ", full_a.lower, full_b.lower) +
           fmt("identity witness %.6f / %.6f", id_a.lower, id_b.lower);
  return ok;
}

// --- 8. positive operators satisfy the extension bound with C = 1 ----

bool positive_operator_unit_constant(std::string& detail) {
  using namespace mzlab::witnesses;
  const mzlab::op::MultilinearOperator T = convolution_operator(16);
  const std::array<Exponent, 2> q = {E(1.0), E(1.0)};
  const Exponent p1 = E(1.0);
  const auto bracket =
      mzlab::solver::operator_norm(T, q, p1, mzlab::solver::NormMode::exact);
  bool ok = bracket.exact && std::fabs(bracket.upper - 1.0) <= 1e-12;

  const std::array<Exponent, 4> r_list = {E(1.0), E(1.7), E(3.0),
                                          Exponent::infinity()};
  mzlab::rng::Stream gen(8, 1);
  const DiscreteMeasure atoms = DiscreteMeasure::counting(16);
  double min_margin = 0.0, worst_excess = 0.0;
  for (std::size_t trial = 0; trial < 1000; ++trial) {
    std::array<FunctionFamily, 2> fams = {FunctionFamily::basis(atoms),
                                          FunctionFamily::basis(atoms)};
    for (auto& fam : fams) {
      std::vector<double> v(2 * 16);
      for (double& x : v) x = 0.01 + 0.99 * gen.next_unit();
      fam = FunctionFamily(v, 2, atoms);
    }
    for (const Exponent& r : r_list) {
      const double margin = check_positive_domination(T, fams, r);
      min_margin = std::min(min_margin, margin);
      ok = ok && margin >= -1e-12;

      const double lhs = mzlab::op::extension_lhs(T, fams, r, p1);
      const double rhs = mzlab::space::mixed_norm(fams[0], r, p1) *
                         mzlab::space::mixed_norm(fams[1], r, p1);
      const double excess = (lhs - rhs) / std::max(1.0, rhs);
      worst_excess = std::max(worst_excess, excess);
      ok = ok && excess <= 1e-12;
    }
  }
  detail = fmt("min domination margin %.1e, worst C=1 excess %.1e",
               min_margin, worst_excess);
  return ok;
}

// --- 9. closed forms: monotone in p, log-convex in 1/r, self-dual ----

bool closed_form_structure(std::string& detail) {
  namespace classify = mzlab::classify;
  bool ok = true;

  // k_{1.5,p}(1.8) nonincreasing as p grows toward q = 1.5.
  double prev = 0.0, prev_err = 0.0;
  bool have_prev = false;
  double worst_mono = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double p = 1.0 + 0.05 * i;
    const auto c = classify::linear_k(E(1.5), E(p), E(1.8));
    ok = ok && c.status == classify::KStatus::finite && c.has_value;
    if (!c.has_value) continue;
    if (have_prev) {
      const double slack = prev - c.value + prev_err + c.error + 1e-9;
      worst_mono = std::min(worst_mono, slack);
      ok = ok && slack >= 0.0;
    }
    prev = c.value;
    prev_err = c.error;
    have_prev = true;
  }

  // log k_{1.5,1}(r) convex in 1/r over r in (1.5, 2].
  std::vector<double> xs, fs;
  for (int i = 0; i <= 9; ++i) {
    const double r = 1.55 + 0.05 * i;
    const auto c = classify::linear_k(E(1.5), E(1.0), E(r));
    ok = ok && c.has_value;
    if (!c.has_value) continue;
    xs.push_back(1.0 / r);
    fs.push_back(std::log(c.value));
  }
  double worst_chord = 0.0;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double lam = (xs[i - 1] - xs[i]) / (xs[i - 1] - xs[i + 1]);
    const double chord = (1.0 - lam) * fs[i - 1] + lam * fs[i + 1];
    const double slack = chord - fs[i] + 1e-6;
    worst_chord = std::min(worst_chord, slack);
    ok = ok && slack >= 0.0;
  }

  // Duality: status matches everywhere on the comparison grid.
  const std::vector<double> grid = test_support::exponent_grid();
  const std::vector<double> rgrid = test_support::r_grid();
  std::size_t status_mismatch = 0;
  for (double q : grid) {
    const Exponent eq = E(q);
    for (double p : grid) {
      const Exponent ep = E(p);
      for (double r : rgrid) {
        const Exponent er = E(r);
        const auto a = classify::linear_k_form(eq, ep, er);
        const auto b =
            classify::linear_k_form(ep.dual(), eq.dual(), er.dual());
        if (a.status != b.status) ++status_mismatch;
      }
    }
  }
  ok = ok && status_mismatch == 0;

  // Duality: values agree where both sides have closed forms.
  const std::array<double, 6> vg = {1.0, 1.25, 1.5, 2.0, 3.0,
                                    std::numeric_limits<double>::infinity()};
  const std::array<double, 8> vr = {1.0, 4.0 / 3.0, 1.5, 1.8, 2.0, 2.25, 3.0,
                                    std::numeric_limits<double>::infinity()};
  double worst_dual = 0.0;
  std::size_t value_pairs = 0;
  for (double q : vg) {
    const Exponent eq = E(q);
    for (double p : vg) {
      const Exponent ep = E(p);
      for (double r : vr) {
        const Exponent er = E(r);
        const auto a = classify::linear_k(eq, ep, er);
        const auto b = classify::linear_k(ep.dual(), eq.dual(), er.dual());
        ok = ok && a.status == b.status;
        if (a.has_value && b.has_value) {
          ++value_pairs;
          const double gap = std::fabs(a.value - b.value);
          worst_dual = std::max(worst_dual, gap);
          ok = ok && gap <= 1e-8;
        }
      }
    }
  }
  detail = fmt("mono slack %.1e, chord slack %.1e, ", worst_mono,
               worst_chord) +
           std::to_string(status_mismatch) + " dual status mismatches, " +
           std::to_string(value_pairs) + fmt(" value pairs within %.1e",
                                             worst_dual);
  return ok;
}

// --- 10. two-sided level-set bound on the weak L^p quasinorm ---------

bool weak_norm_sandwich(std::string& detail) {
  mzlab::rng::Stream gen(10, 5);
  bool ok = true;
  double worst = 1.0;
  for (std::size_t trial = 0; trial < 1000; ++trial) {
    std::vector<double> w(32), v(32);
    for (double& x : w) x = 0.25 + gen.next_unit();
    for (double& x : v) x = 3.0 * gen.next_unit();
    const DiscreteMeasure mu(w);
    const double p = 0.6 + 2.4 * gen.next_unit();
    const std::array<Exponent, 3> s_grid = {E(p / 4.0), E(p / 2.0),
                                            E(3.0 * p / 4.0)};
    const auto rep = mzlab::witnesses::weak_sandwich_check(v, mu, E(p),
                                                           s_grid);
    ok = ok && rep.all_pass();
    for (const auto& row : rep.rows) worst = std::min(worst, row.margin);
  }
  detail = fmt("1000 trials, min row margin %.2e", worst);
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*fn)(std::string&);
  };
  const std::array<Criterion, 10> criteria = {{
      {"classifier grid agreement", classifier_grid_agreement},
      {"stable moment oracles", stable_moment_oracles},
      {"stable identity and embedding", stable_identity_and_embedding},
      {"sign-form ratio and r=1 growth", sign_form_ratio_growth},
      {"random sign tensor growth", random_sign_tensor_growth},
      {"tensor product factorization", tensor_product_factorization},
      {"equality-case estimates", equality_case_estimates},
      {"positive operator unit constant", positive_operator_unit_constant},
      {"closed-form structure", closed_form_structure},
      {"weak norm sandwich", weak_norm_sandwich},
  }};

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool pass = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      pass = criteria[i].fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] %2zu %s (%s) [%.1fs]\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures;
}
