#pragma once

#include <cstddef>
#include <functional>

namespace qvdp {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15 point) integration of f over [a, b].
/// Bisects the interval with the largest error estimate until the summed estimate
/// falls below max(abs_tol, rel_tol * |value|) or max_intervals is reached.
[[nodiscard]] QuadResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                        double abs_tol = 1e-14, double rel_tol = 1e-12,
                                        std::size_t max_intervals = 2000);

}  // namespace qvdp
