#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace critshuffle {

inline constexpr double kDefaultTailEps = 1e-14;

// Probability mass function on the contiguous range [offset, offset + size).
// Mass cut off by truncation is carried in tail_mass. Leading and trailing
// exact zeros are trimmed on construction.
class IntDist {
 public:
  IntDist();  // point mass at 0
  IntDist(std::int64_t offset, std::vector<double> mass, double tail_mass = 0.0);

  static IntDist point_mass(std::int64_t at);

  std::int64_t offset() const { return offset_; }
  std::int64_t min_support() const { return offset_; }
  std::int64_t max_support() const { return offset_ + static_cast<std::int64_t>(mass_.size()) - 1; }
  std::size_t size() const { return mass_.size(); }
  std::span<const double> mass() const { return mass_; }
  double tail_mass() const { return tail_mass_; }

  // pmf at k; zero outside the stored range
  double pmf(std::int64_t k) const;
  double total() const;
  double mean() const;
  double variance() const;

 private:
  std::int64_t offset_ = 0;
  std::vector<double> mass_;
  double tail_mass_ = 0.0;
};

struct TVInterval {
  double lower = 0.0;
  double upper = 0.0;
};

enum class SkellamMethod { convolution, bessel };

IntDist make_binomial(std::int64_t m, double p);
IntDist make_bernoulli(double p);
IntDist make_poisson(double lambda, double tail_eps = kDefaultTailEps);
IntDist make_skellam(double lambda0, double lambda1, double tail_eps = kDefaultTailEps,
                     SkellamMethod method = SkellamMethod::convolution);

IntDist convolve(const IntDist& a, const IntDist& b);
// law of scale * X + shift, scale in {+1, -1}
IntDist affine_map(const IntDist& a, int scale, std::int64_t shift);

TVInterval tv_distance(const IntDist& a, const IntDist& b);

// Smallest T with P(Poi(lambda) > T) <= tail_eps, and that tail mass.
struct PoissonCut {
  std::int64_t last = 0;
  double tail = 0.0;
};
PoissonCut poisson_cut(double lambda, double tail_eps);

}  // namespace critshuffle
