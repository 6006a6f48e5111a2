#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mzlab/verify.hpp"

using mzlab::CheckReport;
using mzlab::space::Exponent;

namespace {

const Exponent inf_e = Exponent::infinity();

bool has_row(const CheckReport& rep, const char* name) {
  return std::any_of(rep.rows.begin(), rep.rows.end(),
                     [&](const auto& row) { return row.name == name; });
}

const mzlab::CheckRow& row(const CheckReport& rep, const char* name) {
  for (const auto& r : rep.rows)
    if (r.name == name) return r;
  throw std::logic_error(std::string("missing row ") + name);
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("monotonicity in p on a reversed linear family") {
  const std::vector<Exponent> q{Exponent(1.5)};
  const std::vector<Exponent> grid{Exponent(1.0), Exponent(1.1),
                                   Exponent(1.2), Exponent(1.35),
                                   Exponent(1.5)};
  const auto rep =
      mzlab::verify::verify_monotonicity_p(q, Exponent(1.8), grid, 4, 100, 1);
  CHECK(rep.suite == "monotonicity_p");
  CHECK(rep.all_pass());
  for (const char* name :
       {"status_order_consistent", "closed_form_nonincreasing",
        "estimator_vs_smaller_p", "shared_witness_nonincreasing"}) {
    CAPTURE(name);
    REQUIRE(has_row(rep, name));
    CHECK(row(rep, name).pass);
  }
  // The estimator at the largest p stays clearly below the value at
  // the smallest p (1.34 against roughly 1).
  CHECK(row(rep, "estimator_vs_smaller_p").margin > 0.1);
}

TEST_CASE("monotonicity rows appear only when computable") {
  // Statuses run Infinite, Infinite, Finite: consistent with a
  // nonincreasing constant, and no closed-form pair to compare before
  // the last point.
  const std::vector<Exponent> q{Exponent(1.5)};
  const std::vector<Exponent> grid{Exponent(1.0), Exponent(2.0),
                                   Exponent(3.0)};
  const auto rep =
      mzlab::verify::verify_monotonicity_p(q, Exponent(3.0), grid, 4, 50, 1);
  CHECK(rep.all_pass());
  CHECK(has_row(rep, "status_order_consistent"));
  CHECK(has_row(rep, "shared_witness_nonincreasing"));
  CHECK_FALSE(has_row(rep, "closed_form_nonincreasing"));
  CHECK_FALSE(has_row(rep, "estimator_vs_smaller_p"));
}

TEST_CASE("monotonicity grid validation") {
  const std::vector<Exponent> q{Exponent(1.5)};
  const std::vector<Exponent> single{Exponent(1.0)};
  const std::vector<Exponent> unordered{Exponent(2.0), Exponent(1.0)};
  CHECK_THROWS_AS(
      mzlab::verify::verify_monotonicity_p(q, Exponent(1.8), single),
      std::invalid_argument);
  CHECK_THROWS_AS(
      mzlab::verify::verify_monotonicity_p(q, Exponent(1.8), unordered),
      std::invalid_argument);
}

TEST_CASE("interpolation convexity on a closed-form segment") {
  const std::vector<Exponent> q{Exponent(1.5)};
  const std::vector<double> thetas{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto rep = mzlab::verify::verify_interpolation_r(
      q, Exponent(1.0), Exponent(1.6), Exponent(2.0), thetas, 4, 100, 1);
  CHECK(rep.suite == "interpolation_r");
  CHECK(rep.all_pass());
  REQUIRE(has_row(rep, "closed_form_two_endpoint"));
  REQUIRE(has_row(rep, "grid_log_convexity"));
  CHECK(row(rep, "closed_form_two_endpoint").pass);
  CHECK(row(rep, "grid_log_convexity").pass);
  REQUIRE(has_row(rep, "estimator_two_endpoint_reported"));
  CHECK(row(rep, "estimator_two_endpoint_reported").advisory);
  CHECK_FALSE(has_row(rep, "fixed_witness_two_endpoint"));
}

TEST_CASE("interpolation fixed witness on the sup-normed pair") {
  const std::vector<Exponent> q{inf_e, inf_e};
  const std::vector<double> thetas{0.0, 0.5, 1.0};
  const auto rep = mzlab::verify::verify_interpolation_r(
      q, inf_e, Exponent(4.0 / 3.0), Exponent(2.0), thetas, 4, 50, 1);
  CHECK(rep.all_pass());
  REQUIRE(has_row(rep, "fixed_witness_two_endpoint"));
  CHECK(row(rep, "fixed_witness_two_endpoint").pass);
  // The witness ratio is exactly log-linear in 1/r, so only the 1e-9
  // slack separates the bound from equality.
  CHECK(row(rep, "fixed_witness_two_endpoint").margin <= 1e-6);
}

TEST_CASE("interpolation theta validation") {
  const std::vector<Exponent> q{Exponent(1.5)};
  const std::vector<double> bad{0.0, 1.5};
  CHECK_THROWS_AS(
      mzlab::verify::verify_interpolation_r(q, Exponent(1.0), Exponent(1.6),
                                            Exponent(2.0), bad),
      std::invalid_argument);
}

TEST_CASE("duality symmetry across representative triples") {
  struct Triple {
    double q, p, r;
    bool both_known;
  };
  const Triple triples[] = {
      {2.0, 1.5, 2.0, true},   // r=2 bridge, value on both sides
      {3.0, 2.0, 2.5, false},  // infinite on both sides
      {1.5, 1.0, 1.8, true},   // moment ratio vs dual moment ratio
      {1.5, 2.0, 2.0, true},   // ordered window, both exactly 1
  };
  for (const auto& t : triples) {
    CAPTURE(t.q);
    CAPTURE(t.p);
    CAPTURE(t.r);
    const auto rep =
        mzlab::verify::verify_duality(Exponent(t.q), Exponent(t.p),
                                      Exponent(t.r));
    CHECK(rep.suite == "duality");
    CHECK(rep.all_pass());
    REQUIRE(has_row(rep, "status_agree"));
    if (t.both_known) {
      REQUIRE(has_row(rep, "value_agree"));
      CHECK(row(rep, "value_agree").pass);
    }
  }
  // Infinite exponents dualize to 1 and back.
  const auto rep = mzlab::verify::verify_duality(inf_e, Exponent(2.0),
                                                 Exponent(3.0));
  CHECK(rep.all_pass());
  CHECK_THROWS_AS(
      mzlab::verify::verify_duality(Exponent(0.5), Exponent(2.0),
                                    Exponent(2.0)),
      std::domain_error);
}

}  // TEST_SUITE
