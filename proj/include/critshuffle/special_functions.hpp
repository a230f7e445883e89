#pragma once

#include <cstdint>

namespace critshuffle {

// Modified Bessel function of the first kind, integer order, by its
// ascending series. Validated for 0 <= x <= 50.
double bessel_i(int order, double x);

// Standard normal distribution function.
double std_normal_cdf(double x);

// Scalar pmfs evaluated with the saddle-point deviance form, which keeps
// relative accuracy near machine precision even for large counts.
double binomial_pmf(std::int64_t k, std::int64_t m, double p);
double poisson_pmf(std::int64_t k, double lambda);

namespace detail {
// log(k!) - [(k + 1/2) log k - k + log sqrt(2 pi)]
double stirling_error(double k);
// Deviance term x log(x / np) + np - x, computed without cancellation.
double deviance(double x, double np);
}  // namespace detail

}  // namespace critshuffle
