#include "critshuffle/int_dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "critshuffle/special_functions.hpp"

namespace critshuffle {

namespace {

constexpr double kNormTol = 1e-12;

void check_rate(double lambda, const char* what) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument(std::string(what) + ": rate must be finite and >= 0");
}

void check_tail_eps(double tail_eps) {
  if (!(tail_eps > 0.0) || tail_eps > 1e-6)
    throw std::invalid_argument("tail_eps must lie in (0, 1e-6]");
}

// pmf values of Poi(lambda) from 0 until the remaining tail is negligible
// next to tail_eps
std::vector<double> poisson_terms(double lambda, double tail_eps) {
  std::vector<double> terms;
  const double floor_eps = tail_eps * 1e-6;
  for (std::int64_t j = 0;; ++j) {
    terms.push_back(poisson_pmf(j, lambda));
    const double x = static_cast<double>(j);
    if (x > lambda + 1.0) {
      // geometric bound on everything beyond j
      const double rest = terms.back() * lambda / (x + 1.0) / (1.0 - lambda / (x + 2.0));
      if (rest < floor_eps || terms.back() == 0.0) break;
    }
  }
  return terms;
}

}  // namespace

IntDist::IntDist() : offset_(0), mass_{1.0}, tail_mass_(0.0) {}

IntDist::IntDist(std::int64_t offset, std::vector<double> mass, double tail_mass)
    : offset_(offset), mass_(std::move(mass)), tail_mass_(tail_mass) {
  if (mass_.empty()) throw std::invalid_argument("IntDist: empty mass vector");
  if (!(tail_mass_ >= 0.0) || tail_mass_ > 1.0) throw std::invalid_argument("IntDist: tail_mass outside [0,1]");
  double sum = 0.0;
  for (double v : mass_) {
    if (!(v >= 0.0) || v > 1.0 + kNormTol) throw std::invalid_argument("IntDist: mass entry outside [0,1]");
    sum += v;
  }
  if (std::abs(sum + tail_mass_ - 1.0) > kNormTol)
    throw std::invalid_argument("IntDist: mass + tail_mass differs from 1 by " +
                                std::to_string(sum + tail_mass_ - 1.0));
  auto first = std::find_if(mass_.begin(), mass_.end(), [](double v) { return v != 0.0; });
  if (first == mass_.end()) {
    mass_.assign(1, 0.0);
    return;
  }
  auto last = std::find_if(mass_.rbegin(), mass_.rend(), [](double v) { return v != 0.0; }).base();
  offset_ += first - mass_.begin();
  mass_ = std::vector<double>(first, last);
}

IntDist IntDist::point_mass(std::int64_t at) { return IntDist(at, {1.0}, 0.0); }

double IntDist::pmf(std::int64_t k) const {
  if (k < offset_ || k > max_support()) return 0.0;
  return mass_[static_cast<std::size_t>(k - offset_)];
}

double IntDist::total() const { return std::accumulate(mass_.begin(), mass_.end(), 0.0); }

double IntDist::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) s += mass_[i] * static_cast<double>(offset_ + static_cast<std::int64_t>(i));
  return s / total();
}

double IntDist::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    const double d = static_cast<double>(offset_ + static_cast<std::int64_t>(i)) - mu;
    s += mass_[i] * d * d;
  }
  return s / total();
}

IntDist make_binomial(std::int64_t m, double p) {
  if (m < 0) throw std::invalid_argument("make_binomial: m must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("make_binomial: p outside [0,1]");
  std::vector<double> mass(static_cast<std::size_t>(m) + 1);
  for (std::int64_t k = 0; k <= m; ++k) mass[static_cast<std::size_t>(k)] = binomial_pmf(k, m, p);
  // the deviance form should never drift this far; fail loudly if it does
  const double sum = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (std::abs(sum - 1.0) > kNormTol)
    throw std::runtime_error("make_binomial: pmf does not normalize");
  return IntDist(0, std::move(mass), 0.0);
}

IntDist make_bernoulli(double p) { return make_binomial(1, p); }

PoissonCut poisson_cut(double lambda, double tail_eps) {
  check_rate(lambda, "poisson_cut");
  check_tail_eps(tail_eps);
  if (lambda == 0.0) return {0, 0.0};
  const auto terms = poisson_terms(lambda, tail_eps);
  // suffix sums from the far end keep small tails accurate
  double suffix = 0.0;
  std::int64_t last = static_cast<std::int64_t>(terms.size()) - 1;
  for (std::int64_t j = last; j >= 0; --j) {
    const double with_j = suffix + terms[static_cast<std::size_t>(j)];
    if (with_j > tail_eps) return {j, suffix};
    suffix = with_j;
  }
  return {0, 0.0};
}

IntDist make_poisson(double lambda, double tail_eps) {
  check_rate(lambda, "make_poisson");
  check_tail_eps(tail_eps);
  if (lambda == 0.0) return IntDist::point_mass(0);
  const auto cut = poisson_cut(lambda, tail_eps);
  std::vector<double> mass(static_cast<std::size_t>(cut.last) + 1);
  for (std::int64_t j = 0; j <= cut.last; ++j) mass[static_cast<std::size_t>(j)] = poisson_pmf(j, lambda);
  return IntDist(0, std::move(mass), cut.tail);
}

IntDist make_skellam(double lambda0, double lambda1, double tail_eps, SkellamMethod method) {
  check_rate(lambda0, "make_skellam");
  check_rate(lambda1, "make_skellam");
  check_tail_eps(tail_eps);
  if (method == SkellamMethod::convolution || lambda0 == 0.0 || lambda1 == 0.0) {
    const IntDist x = make_poisson(lambda0, 0.5 * tail_eps);
    const IntDist y = make_poisson(lambda1, 0.5 * tail_eps);
    return convolve(x, affine_map(y, -1, 0));
  }
  const auto cut0 = poisson_cut(lambda0, 0.5 * tail_eps);
  const auto cut1 = poisson_cut(lambda1, 0.5 * tail_eps);
  const double arg = 2.0 * std::sqrt(lambda0 * lambda1);
  const double log_ratio = std::log(lambda0) - std::log(lambda1);
  std::vector<double> mass;
  mass.reserve(static_cast<std::size_t>(cut0.last + cut1.last + 1));
  double sum = 0.0;
  for (std::int64_t d = -cut1.last; d <= cut0.last; ++d) {
    const double i_nu = bessel_i(static_cast<int>(d < 0 ? -d : d), arg);
    const double v = i_nu == 0.0 ? 0.0
                                 : std::exp(-(lambda0 + lambda1) + 0.5 * static_cast<double>(d) * log_ratio +
                                            std::log(i_nu));
    mass.push_back(v);
    sum += v;
  }
  return IntDist(-cut1.last, std::move(mass), std::max(0.0, 1.0 - sum));
}

IntDist convolve(const IntDist& a, const IntDist& b) {
  const auto ma = a.mass();
  const auto mb = b.mass();
  std::vector<double> out(ma.size() + mb.size() - 1, 0.0);
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const double ai = ma[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < mb.size(); ++j) out[i + j] += ai * mb[j];
  }
  return IntDist(a.offset() + b.offset(), std::move(out), a.tail_mass() + b.tail_mass());
}

IntDist affine_map(const IntDist& a, int scale, std::int64_t shift) {
  if (scale == 1) {
    std::vector<double> mass(a.mass().begin(), a.mass().end());
    return IntDist(a.offset() + shift, std::move(mass), a.tail_mass());
  }
  if (scale == -1) {
    std::vector<double> mass(a.mass().rbegin(), a.mass().rend());
    return IntDist(shift - a.max_support(), std::move(mass), a.tail_mass());
  }
  throw std::invalid_argument("affine_map: scale must be +1 or -1");
}

TVInterval tv_distance(const IntDist& a, const IntDist& b) {
  const std::int64_t lo = std::min(a.min_support(), b.min_support());
  const std::int64_t hi = std::max(a.max_support(), b.max_support());
  double s = 0.0;
  for (std::int64_t k = lo; k <= hi; ++k) s += std::abs(a.pmf(k) - b.pmf(k));
  const double lower = std::min(1.0, 0.5 * s);
  return {lower, std::min(1.0, lower + a.tail_mass() + b.tail_mass())};
}

}  // namespace critshuffle
