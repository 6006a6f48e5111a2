#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mzlab/op/multilinear.hpp"
#include "mzlab/space/norms.hpp"

using mzlab::op::MultilinearOperator;
using mzlab::space::DiscreteMeasure;
using mzlab::space::Exponent;
using mzlab::space::FunctionFamily;

namespace {

MultilinearOperator hand_bilinear() {
  // 2x2 -> 2 with coefficients c(out, i, j) = out*8 + i*2 + j + 1;
  // checks the row-major (last index fastest) layout promise.
  std::vector<double> c(8);
  for (std::size_t k = 0; k < 8; ++k) c[k] = static_cast<double>(k + 1);
  return MultilinearOperator(
      {DiscreteMeasure::counting(2), DiscreteMeasure::counting(2)},
      DiscreteMeasure::counting(2), std::move(c));
}

}  // namespace

TEST_SUITE("op") {

TEST_CASE("coefficient layout and flat_index agree") {
  const auto T = hand_bilinear();
  const std::size_t idx[] = {1, 0};
  CHECK(T.flat_index(1, idx) == 6);  // out=1, i=1, j=0 -> 1*4 + 1*2 + 0
  CHECK(T.coeffs()[T.flat_index(1, idx)] == 7.0);
  const std::size_t idx2[] = {0, 1};
  CHECK(T.flat_index(0, idx2) == 1);
}

TEST_CASE("apply matches the definition on a hand case") {
  const auto T = hand_bilinear();
  const std::vector<double> f{1.0, 2.0}, g{3.0, -1.0};
  // out0: c=(1,2,3,4): 1*1*3 + 2*1*(-1) + 3*2*3 + 4*2*(-1) = 3-2+18-8=11
  // out1: c=(5,6,7,8): 5*3 - 6 + 7*6 - 8*2 = 15-6+42-16=35
  const auto out = T.apply(f, g);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == doctest::Approx(11.0));
  CHECK(out[1] == doctest::Approx(35.0));

  // The span-of-spans entry point is the same computation.
  const std::span<const double> slots[] = {f, g};
  CHECK(T.apply(slots) == out);
}

TEST_CASE("identity operator reproduces its input") {
  const DiscreteMeasure w(std::vector<double>{0.5, 1.0, 2.5});
  const auto id = MultilinearOperator::identity(w);
  const std::vector<double> f{3.0, -1.0, 7.0};
  CHECK(id.apply(f) == f);
  CHECK(id.arity() == 1);
  CHECK(id.output_dim() == 3);
}

TEST_CASE("constructor validates the coefficient count") {
  CHECK_THROWS_AS(
      MultilinearOperator({DiscreteMeasure::counting(2)},
                          DiscreteMeasure::counting(2),
                          std::vector<double>{1.0, 2.0, 3.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(MultilinearOperator({}, DiscreteMeasure::counting(2),
                                      std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("extension aggregate and lhs match a direct evaluation") {
  const auto T = hand_bilinear();
  const auto mu = DiscreteMeasure::counting(2);
  // Families: two functions per slot.
  const FunctionFamily F({1.0, 0.0, 0.0, 2.0}, 2, mu);
  const FunctionFamily G({0.0, 1.0, 3.0, 0.0}, 2, mu);
  const std::vector<FunctionFamily> fams{F, G};

  // Direct: values T(F_k1, G_k2) for the four index pairs, per output
  // atom, then the l^r / L^p norms.
  std::vector<std::vector<double>> vals;
  for (std::size_t k1 = 0; k1 < 2; ++k1)
    for (std::size_t k2 = 0; k2 < 2; ++k2)
      vals.push_back(T.apply(F.function(k1), G.function(k2)));
  for (double r : {1.0, 2.0, 3.5}) {
    std::vector<double> agg(2, 0.0);
    for (const auto& v : vals)
      for (int t = 0; t < 2; ++t) agg[t] += std::pow(std::fabs(v[t]), r);
    for (auto& a : agg) a = std::pow(a, 1.0 / r);
    const auto got = mzlab::op::extension_aggregate(T, fams, Exponent(r));
    REQUIRE(got.size() == 2);
    CHECK(got[0] == doctest::Approx(agg[0]).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(agg[1]).epsilon(1e-12));
    for (double p : {1.0, 2.0}) {
      CHECK(mzlab::op::extension_lhs(T, fams, Exponent(r), Exponent(p)) ==
            doctest::Approx(mzlab::space::lp_norm(agg, Exponent(p), mu))
                .epsilon(1e-12));
    }
  }
  // r = inf: pointwise max across tuples.
  const auto got = mzlab::op::extension_aggregate(T, fams,
                                                  Exponent::infinity());
  std::vector<double> want(2, 0.0);
  for (const auto& v : vals)
    for (int t = 0; t < 2; ++t) want[t] = std::max(want[t], std::fabs(v[t]));
  CHECK(got[0] == doctest::Approx(want[0]));
  CHECK(got[1] == doctest::Approx(want[1]));
}

TEST_CASE("weak extension lhs is the weak norm of the aggregate") {
  const auto T = hand_bilinear();
  const auto mu = DiscreteMeasure::counting(2);
  const FunctionFamily F({1.0, -1.0}, 1, mu), G({2.0, 0.5}, 1, mu);
  const std::vector<FunctionFamily> fams{F, G};
  const auto agg = mzlab::op::extension_aggregate(T, fams, Exponent(2.0));
  CHECK(mzlab::op::extension_lhs_weak(T, fams, Exponent(2.0), Exponent(1.5)) ==
        doctest::Approx(
            mzlab::space::weak_lp_quasinorm(agg, Exponent(1.5), mu)));
}

TEST_CASE("tensor product applies factor-wise") {
  // T1 = diag(1,2) and T2 = [[0,1],[1,0]] as linear maps on counting_2.
  const auto mu = DiscreteMeasure::counting(2);
  const MultilinearOperator T1({mu}, mu, {1.0, 0.0, 0.0, 2.0});
  const MultilinearOperator T2({mu}, mu, {0.0, 1.0, 1.0, 0.0});
  const MultilinearOperator factors[] = {T1, T2};
  const auto T = mzlab::op::tensor_product(factors);
  CHECK(T.arity() == 2);
  CHECK(T.output_dim() == 4);

  const std::vector<double> f{1.0, 3.0}, g{2.0, -1.0};
  const auto got = T.apply(f, g);
  const auto a = T1.apply(f), b = T2.apply(g);
  // Output atoms are row-major over (out1, out2).
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(got[i * 2 + j] == doctest::Approx(a[i] * b[j]).epsilon(1e-14));
}

TEST_CASE("tensor product carries the product measure") {
  const DiscreteMeasure w1(std::vector<double>{0.5, 2.0});
  const DiscreteMeasure w2(std::vector<double>{3.0, 1.0});
  const MultilinearOperator T1({w1}, w1, {1.0, 0.0, 0.0, 1.0});
  const MultilinearOperator T2({w2}, w2, {1.0, 0.0, 0.0, 1.0});
  const MultilinearOperator factors[] = {T1, T2};
  const auto T = mzlab::op::tensor_product(factors);
  const auto& nu = T.output_measure();
  REQUIRE(nu.atom_count() == 4);
  CHECK(nu.weight(0) == doctest::Approx(1.5));   // 0.5*3
  CHECK(nu.weight(1) == doctest::Approx(0.5));   // 0.5*1
  CHECK(nu.weight(2) == doctest::Approx(6.0));   // 2*3
  CHECK(nu.weight(3) == doctest::Approx(2.0));
}

}  // TEST_SUITE
