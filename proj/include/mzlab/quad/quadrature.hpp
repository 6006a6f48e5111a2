#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzlab::quad {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;       // conservative absolute error bound
  std::size_t evaluations = 0;
  bool converged = false;
};

// Raised when an integral cannot reach the requested tolerance within
// its evaluation budget; carries the achieved error for reporting.
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_error(achieved) {}
  double achieved_error;
};

// Single Gauss-Kronrod 7-15 panel; error is |K15 - G7|.
QuadResult gk15(const std::function<double(double)>& f, double a, double b);

// Worst-interval-first adaptive bisection. `splits` seeds the interval
// list with interior breakpoints (used to pre-partition oscillatory
// integrands at their period scale).
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol,
                              std::size_t max_evaluations = 2'000'000,
                              const std::vector<double>& splits = {});

}  // namespace mzlab::quad
