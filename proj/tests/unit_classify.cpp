#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mzlab/classify.hpp"
#include "mzlab/stable/stable_law.hpp"
#include "support/compare.hpp"

using mzlab::classify::KStatus;
using mzlab::classify::ValueForm;
using mzlab::space::Exponent;

namespace {

mzlab::classify::KClassification multi(std::vector<Exponent> q, double p,
                                       double r) {
  return mzlab::classify::multilinear_k(q, test_support::to_exponent(p),
                                        test_support::to_exponent(r));
}

mzlab::classify::KClassification lin(double q, double p, double r) {
  return mzlab::classify::linear_k(test_support::to_exponent(q),
                                   test_support::to_exponent(p),
                                   test_support::to_exponent(r));
}

}  // namespace

TEST_SUITE("classify") {

TEST_CASE("headline examples") {
  // All-ones input exponents: constant 1 whatever p and r.
  {
    const auto c = multi({Exponent(1.0), Exponent(1.0)}, 3.0, 5.0);
    CHECK(c.status == KStatus::finite);
    CHECK(c.has_value);
    CHECK(c.value == 1.0);
  }
  // Below the sign-tensor divergence threshold at p = inf.
  {
    const auto c = multi({Exponent(2.0), Exponent(2.0)}, HUGE_VAL, 1.0);
    CHECK(c.status == KStatus::infinite);
  }
  // Reversed linear case with a stable-moment closed form.
  {
    const auto c = lin(1.5, 1.2, 1.8);
    CHECK(c.status == KStatus::finite);
    REQUIRE(c.has_value);
    CHECK(std::fabs(c.value - 1.22135579590862797) <= c.error + 1e-7);
    CHECK(c.error < 1e-5);
  }
}

TEST_CASE("frozen closed-form values") {
  // k(1.5 -> 1 at r=1.8) = c(1.8,1.5)/c(1.8,1); frozen from the
  // independent moment oracles.
  const auto a = lin(1.5, 1.0, 1.8);
  REQUIRE(a.has_value);
  CHECK(std::fabs(a.value - 1.34159386552927405) <= a.error + 1e-7);

  // Gaussian bridge at q=2, r=2: c(2,2)/c(2,p) with p=1:
  // sqrt(2) / (2/sqrt(pi)).
  const auto b = lin(2.0, 1.0, 2.0);
  REQUIRE(b.has_value);
  CHECK(b.value ==
        doctest::Approx(std::sqrt(2.0) / (2.0 / std::sqrt(M_PI)))
            .epsilon(1e-7));

  // Window cases are exactly 1 with zero error.
  const auto w = lin(1.5, 2.0, 2.0);
  REQUIRE(w.has_value);
  CHECK(w.value == 1.0);
  CHECK(w.error == 0.0);
}

TEST_CASE("the two independent engines agree on a coarse grid") {
  const auto exps = test_support::exponent_grid();
  const auto rs = test_support::r_grid();
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t iq = 0; iq < exps.size(); iq += 2)
    for (std::size_t ip = 0; ip < exps.size(); ip += 2)
      for (std::size_t ir = 0; ir < rs.size(); ir += 5) {
        const double q = exps[iq], p = exps[ip], r = rs[ir];
        const auto fa = mzlab::classify::linear_k_form(
            test_support::to_exponent(q), test_support::to_exponent(p),
            test_support::to_exponent(r));
        const auto fb = engine_b::linear(q, p, r);
        ++checked;
        if (test_support::a_status(fa) != test_support::b_status(fb) ||
            test_support::a_shape(fa) != test_support::b_shape(fb)) {
          ++mismatches;
          CAPTURE(q);
          CAPTURE(p);
          CAPTURE(r);
          CHECK(test_support::a_status(fa) == test_support::b_status(fb));
          CHECK(test_support::a_shape(fa) == test_support::b_shape(fb));
        }
      }
  CHECK(checked > 5000);
  CHECK(mismatches == 0);
}

TEST_CASE("multilinear with one slot delegates to the linear analysis") {
  for (double q : {1.0, 1.5, 2.0, 3.0, HUGE_VAL})
    for (double p : {1.0, 1.8, 2.0, 4.0, HUGE_VAL})
      for (double r : {1.0, 1.5, 2.0, 2.5, HUGE_VAL}) {
        const std::vector<Exponent> qs{test_support::to_exponent(q)};
        const auto a = mzlab::classify::multilinear_k_form(
            qs, test_support::to_exponent(p), test_support::to_exponent(r));
        const auto b = mzlab::classify::linear_k_form(
            qs[0], test_support::to_exponent(p), test_support::to_exponent(r));
        CHECK(a.status == b.status);
        CHECK(a.form == b.form);
      }
}

TEST_CASE("multilinear ordered window and product regimes") {
  // max q_i <= p: the window analysis with bq = max q.
  {
    const auto c = multi({Exponent(2.0), Exponent(2.0)}, 2.0, 2.0);
    CHECK(c.status == KStatus::finite);
    REQUIRE(c.has_value);
    CHECK(c.value == 1.0);
  }
  {
    // r outside [min(bq,2), max(p,2)] diverges.
    const auto c = multi({Exponent(1.5), Exponent(2.0)}, 3.0, 10.0);
    CHECK(c.status == KStatus::infinite);
  }
  // p < every q_i <= 2 with bq < r <= 2: product of slot ratios.
  {
    const auto c = multi({Exponent(1.5), Exponent(1.5)}, 1.0, 1.8);
    CHECK(c.status == KStatus::finite);
    REQUIRE(c.has_value);
    const auto one = lin(1.5, 1.0, 1.8);
    CHECK(c.value == doctest::Approx(one.value * one.value).epsilon(1e-9));
    CHECK(c.form == ValueForm::product);
  }
  // Mixed: slots below p contribute factor 1.
  {
    const auto c = multi({Exponent(1.2), Exponent(1.5)}, 1.3, 1.8);
    CHECK(c.status == KStatus::finite);
    REQUIRE(c.has_value);
    const auto f = lin(1.5, 1.3, 1.8);
    CHECK(c.value == doctest::Approx(f.value).epsilon(1e-9));
  }
}

TEST_CASE("multilinear r=2 and undetermined regions") {
  // p <= 2 < some q, r = 2: finite (value known only on the bridge).
  {
    const auto c = multi({Exponent(3.0), Exponent(1.5)}, 1.5, 2.0);
    CHECK(c.status == KStatus::finite);
  }
  // 2 < r < p with p < bq: the open strip stays undetermined.
  {
    const auto c = multi({Exponent(5.0), Exponent(1.5)}, 4.0, 3.0);
    CHECK(c.status == KStatus::undetermined);
  }
}

TEST_CASE("p = inf multilinear divergence threshold") {
  // (inf, inf): threshold 4/3; below it diverges, at bq <= r it is 1.
  CHECK(multi({Exponent::infinity(), Exponent::infinity()}, HUGE_VAL, 1.3)
            .status == KStatus::infinite);
  {
    const auto c =
        multi({Exponent::infinity(), Exponent::infinity()}, HUGE_VAL, HUGE_VAL);
    CHECK(c.status == KStatus::finite);
    REQUIRE(c.has_value);
    CHECK(c.value == 1.0);
  }
  // (2, 2): same threshold value 4/3 by the formula.
  CHECK(multi({Exponent(2.0), Exponent(2.0)}, HUGE_VAL, 1.2).status ==
        KStatus::infinite);
  // Above max q the constant collapses to 1.
  {
    const auto c = multi({Exponent(2.0), Exponent(2.0)}, HUGE_VAL, 2.0);
    CHECK(c.status == KStatus::finite);
    REQUIRE(c.has_value);
    CHECK(c.value == 1.0);
  }
}

TEST_CASE("product lower bound is consistent with the full classifier") {
  const std::vector<Exponent> qs{Exponent(1.5), Exponent(1.5)};
  const auto full = multi({Exponent(1.5), Exponent(1.5)}, 1.0, 1.8);
  const auto prod = mzlab::classify::product_lower_bound(qs, Exponent(1.0),
                                                         Exponent(1.8));
  REQUIRE(full.has_value);
  REQUIRE(prod.has_value);
  // In this regime the product is exactly the multilinear value.
  CHECK(prod.value == doctest::Approx(full.value).epsilon(1e-10));
  // A diverging slot makes the product diverge.
  const std::vector<Exponent> qd{Exponent(3.0), Exponent(1.5)};
  CHECK(mzlab::classify::product_lower_bound(qd, Exponent(2.0), Exponent(10.0))
            .status == KStatus::infinite);
}

TEST_CASE("value provenance text names the deciding case") {
  CHECK(lin(1.5, 1.2, 1.8).provenance.find("p<q") != std::string::npos);
  CHECK_FALSE(multi({Exponent(2.0), Exponent(2.0)}, HUGE_VAL, 1.0)
                  .provenance.empty());
}

TEST_CASE("out-of-range exponents are rejected") {
  CHECK_THROWS_AS(lin(0.9, 2.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(lin(2.0, 0.5, 2.0), std::domain_error);
  CHECK_THROWS_AS(lin(2.0, 2.0, 0.99), std::domain_error);
  CHECK_THROWS_AS(
      mzlab::classify::multilinear_k({}, Exponent(2.0), Exponent(2.0)),
      std::invalid_argument);
}

}  // TEST_SUITE
