#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mzlab::space {

// Finite measure on finitely many atoms; weights strictly positive.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<double> weights)
      : weights_(std::move(weights)) {
    if (weights_.empty())
      throw std::invalid_argument("DiscreteMeasure: no atoms");
    bool unit = true;
    double tot = 0.0;
    for (double w : weights_) {
      if (!(w > 0.0) || !(w < 1e300))
        throw std::invalid_argument(
            "DiscreteMeasure: weights must be positive and finite");
      unit = unit && w == 1.0;
      tot += w;
    }
    counting_ = unit;
    total_ = tot;
  }

  static DiscreteMeasure counting(std::size_t n) {
    return DiscreteMeasure(std::vector<double>(n, 1.0));
  }

  std::size_t atom_count() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  bool is_counting() const { return counting_; }
  double total() const { return total_; }

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.weights_ == b.weights_;
  }

 private:
  std::vector<double> weights_;
  bool counting_ = false;
  double total_ = 0.0;
};

// Product measure, atoms flattened row-major (last factor fastest).
DiscreteMeasure product_measure(const std::vector<DiscreteMeasure>& factors);

}  // namespace mzlab::space
