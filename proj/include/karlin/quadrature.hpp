#pragma once

#include <functional>

#include "karlin/special.hpp"

namespace karlin {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

// Adaptive Gauss-Kronrod (7,15) bisection on [a, b]. Throws numerical_error with
// interval diagnostics if abs_tol cannot be reached within max_intervals.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_intervals = 4000);

// Euler-transformed sum of an eventually-alternating series; term(j) carries its
// sign. Throws numerical_error if max_terms is exhausted before abs_tol.
double alternating_sum(const std::function<double(int)>& term, double abs_tol,
                       int max_terms = 400);

}  // namespace karlin
