#include "critshuffle/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace critshuffle {

double bessel_i(int order, double x) {
  if (order < 0) order = -order;  // I_{-n} = I_n for integer n
  if (!(x >= 0.0)) throw std::invalid_argument("bessel_i: x must be >= 0");
  if (x > 50.0) throw std::invalid_argument("bessel_i: x > 50 is outside the validated range");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;

  const double half = 0.5 * x;
  const double quarter_sq = half * half;
  double term = std::exp(order * std::log(half) - std::lgamma(order + 1.0));
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= quarter_sq / (static_cast<double>(k) * (k + order));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace detail {

double stirling_error(double k) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (k <= 15.0) {
    // long double keeps the cancellation below 1e-17 in this range
    long double kl = k;
    long double v = std::lgammal(kl + 1.0L) - (kl + 0.5L) * std::log(kl) + kl -
                    0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
    if (k == 0.0) return 0.0;
    return static_cast<double>(v);
  }
  const double kk = k * k;
  if (k > 500.0) return (s0 - s1 / kk) / k;
  if (k > 80.0) return (s0 - (s1 - s2 / kk) / kk) / k;
  if (k > 35.0) return (s0 - (s1 - (s2 - s3 / kk) / kk) / kk) / k;
  return (s0 - (s1 - (s2 - (s3 - s4 / kk) / kk) / kk) / kk) / k;
}

double deviance(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace detail

double binomial_pmf(std::int64_t k, std::int64_t m, double p) {
  if (k < 0 || k > m) return 0.0;
  const double q = 1.0 - p;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (q == 0.0) return k == m ? 1.0 : 0.0;
  const double n = static_cast<double>(m);
  if (k == 0) {
    if (m == 0) return 1.0;
    const double lc = p < 0.1 ? -detail::deviance(n, n * q) - n * p : n * std::log(q);
    return std::exp(lc);
  }
  if (k == m) {
    const double lc = q < 0.1 ? -detail::deviance(n, n * p) - n * q : n * std::log(p);
    return std::exp(lc);
  }
  const double x = static_cast<double>(k);
  const double lc = detail::stirling_error(n) - detail::stirling_error(x) -
                    detail::stirling_error(n - x) - detail::deviance(x, n * p) -
                    detail::deviance(n - x, n * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(x) + std::log1p(-x / n);
  return std::exp(lc - 0.5 * lf);
}

double poisson_pmf(std::int64_t k, double lambda) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  if (k == 0) return std::exp(-lambda);
  const double x = static_cast<double>(k);
  return std::exp(-detail::stirling_error(x) - detail::deviance(x, lambda)) /
         std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace critshuffle
