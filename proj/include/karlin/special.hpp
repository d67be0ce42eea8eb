#pragma once

#include <stdexcept>
#include <string>

namespace karlin {

class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Regularized incomplete gamma functions P(a,x), Q(a,x) = 1 - P(a,x).
double gammp(double a, double x);
double gammq(double a, double x);

double normal_cdf(double x);

// Kolmogorov asymptotic survival function Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
double kolmogorov_q(double lambda);

}  // namespace karlin
