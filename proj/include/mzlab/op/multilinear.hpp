#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mzlab/space/exponent.hpp"
#include "mzlab/space/family.hpp"
#include "mzlab/space/measure.hpp"

namespace mzlab::op {

// (q_1, ..., q_m; p; r) bundle for an m-linear inequality.
struct ExponentTriple {
  std::vector<space::Exponent> q;
  space::Exponent p;
  space::Exponent r;
};

// Dense m-linear operator between finite weighted spaces. Coefficients
// are row-major over (output atom, i_1, ..., i_m), last input index
// fastest. Arity 1..3, dimensions <= 64 per axis.
class MultilinearOperator {
 public:
  MultilinearOperator(std::vector<space::DiscreteMeasure> input_measures,
                      space::DiscreteMeasure output_measure,
                      std::vector<double> coeffs);

  static MultilinearOperator identity(const space::DiscreteMeasure& mu);

  std::size_t arity() const { return input_measures_.size(); }
  std::size_t input_dim(std::size_t slot) const {
    return input_measures_[slot].atom_count();
  }
  std::size_t output_dim() const { return output_measure_.atom_count(); }
  const space::DiscreteMeasure& input_measure(std::size_t slot) const {
    return input_measures_[slot];
  }
  const space::DiscreteMeasure& output_measure() const {
    return output_measure_;
  }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }

  // Flat coefficient index for (out, inputs...).
  std::size_t flat_index(std::size_t out,
                         std::span<const std::size_t> inputs) const;

  // Contiguous slice c(out, i_1, ..., i_{m-1}, .) over the last slot.
  std::span<const double> last_axis(std::size_t offset) const {
    return {coeffs_.data() + offset, input_dim(arity() - 1)};
  }

  // T(f^1, ..., f^m) as output atom values.
  std::vector<double> apply(
      std::span<const std::span<const double>> inputs) const;
  std::vector<double> apply(std::span<const double> f) const;
  std::vector<double> apply(std::span<const double> f,
                            std::span<const double> g) const;

 private:
  std::vector<space::DiscreteMeasure> input_measures_;
  space::DiscreteMeasure output_measure_;
  std::vector<double> coeffs_;
};

// || (sum_{k_1..k_m} |T(f^1_{k_1},...,f^m_{k_m})|^r)^(1/r) ||_{L^p(nu)}.
// r = inf takes the pointwise max over index tuples.
double extension_lhs(const MultilinearOperator& T,
                     std::span<const space::FunctionFamily> families,
                     const space::Exponent& r, const space::Exponent& p);

// Same aggregate measured in weak L^(p,inf); requires finite p (the
// quasi-range 0 < p < 1 is allowed).
double extension_lhs_weak(const MultilinearOperator& T,
                          std::span<const space::FunctionFamily> families,
                          const space::Exponent& r, const space::Exponent& p);

// Pointwise l^r aggregate of T over all index tuples (the inner part of
// extension_lhs), one value per output atom.
std::vector<double> extension_aggregate(
    const MultilinearOperator& T,
    std::span<const space::FunctionFamily> families, const space::Exponent& r);

// Tensor product of linear operators: (T_1 x ... x T_m) acting slotwise,
// output on the product measure, atoms row-major.
MultilinearOperator tensor_product(
    std::span<const MultilinearOperator> linear_factors);

}  // namespace mzlab::op
