#pragma once

#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace mzlab::space {

// Lebesgue exponent in (0, inf]. Infinity is a tag, never a large
// float, so branches on it are exact. The (0,1) range is admitted for
// the quasi-norm paths (weak-type checks); the classifier and the norm
// solver require [1, inf] and validate at their own entry points.
class Exponent {
 public:
  explicit Exponent(double v) : value_(v) {
    if (!(v > 0.0) || v == std::numeric_limits<double>::infinity() ||
        v != v) {
      throw std::invalid_argument("Exponent: need a finite value > 0, got " +
                                  std::to_string(v));
    }
  }

  static Exponent infinity() {
    Exponent e;
    e.inf_ = true;
    return e;
  }

  bool is_inf() const { return inf_; }
  bool is_quasi() const { return !inf_ && value_ < 1.0; }

  double value() const {
    if (inf_) throw std::domain_error("Exponent: infinite, no finite value");
    return value_;
  }

  // +inf as a double; safe for monotone comparisons only.
  double value_or_inf() const {
    return inf_ ? std::numeric_limits<double>::infinity() : value_;
  }

  // Conjugate exponent, exact at the endpoints 1 <-> inf.
  Exponent dual() const {
    if (inf_) return Exponent(1.0);
    if (value_ < 1.0)
      throw std::domain_error("Exponent::dual: defined for p >= 1");
    if (value_ == 1.0) return infinity();
    return Exponent(value_ / (value_ - 1.0));
  }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
    return a.value_ == b.value_;
  }
  friend auto operator<=>(const Exponent& a, const Exponent& b) {
    return a.value_or_inf() <=> b.value_or_inf();
  }
  friend bool operator==(const Exponent& a, double b) {
    return !a.inf_ && a.value_ == b;
  }
  friend auto operator<=>(const Exponent& a, double b) {
    return a.value_or_inf() <=> b;
  }

  std::string str() const {
    return inf_ ? std::string("inf") : std::to_string(value_);
  }

 private:
  Exponent() = default;
  double value_ = 0.0;
  bool inf_ = false;
};

inline Exponent min(const Exponent& a, const Exponent& b) {
  return a <= b ? a : b;
}
inline Exponent max(const Exponent& a, const Exponent& b) {
  return a >= b ? a : b;
}

}  // namespace mzlab::space
