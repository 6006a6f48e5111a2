#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mzlab/space/measure.hpp"

namespace mzlab::space {

// Finite family (f_1, ..., f_K) of functions on one measure's atoms.
// Stored row-major: row k is function k.
class FunctionFamily {
 public:
  FunctionFamily(std::vector<double> values, std::size_t function_count,
                 DiscreteMeasure measure)
      : values_(std::move(values)),
        count_(function_count),
        measure_(std::move(measure)) {
    if (count_ == 0) throw std::invalid_argument("FunctionFamily: empty");
    if (values_.size() != count_ * measure_.atom_count())
      throw std::invalid_argument("FunctionFamily: value shape mismatch");
  }

  static FunctionFamily basis(const DiscreteMeasure& measure) {
    const std::size_t n = measure.atom_count();
    std::vector<double> vals(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) vals[k * n + k] = 1.0;
    return FunctionFamily(std::move(vals), n, measure);
  }

  std::size_t function_count() const { return count_; }
  std::size_t atom_count() const { return measure_.atom_count(); }
  const DiscreteMeasure& measure() const { return measure_; }

  std::span<const double> function(std::size_t k) const {
    return {values_.data() + k * atom_count(), atom_count()};
  }
  std::span<double> function(std::size_t k) {
    return {values_.data() + k * atom_count(), atom_count()};
  }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  std::vector<double> values_;
  std::size_t count_;
  DiscreteMeasure measure_;
};

}  // namespace mzlab::space
