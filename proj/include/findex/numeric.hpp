#pragma once

#include <functional>

namespace findex {

/// Bisection root of a continuous scalar function with f(a)*f(b) <= 0.
/// Returns the midpoint of the final bracket of width <= tol.
double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-10);

/// Golden-section minimizer of a unimodal-ish scalar function on [a, b];
/// shrinks the bracket to width <= tol and returns its midpoint.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-10);

}  // namespace findex
