#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "critshuffle/experiment.hpp"
#include "critshuffle/privacy_curve.hpp"

namespace critshuffle {

struct LimitParams {
  double c = 1.0;
  double lambda = 1.0;  // c^{-2}
  double pi = 0.0;
  double lambda0 = 1.0;  // (1 - pi) / c^2
  double lambda1 = 0.0;  // pi / c^2
};

LimitParams make_limit_params(double c, double pi);

// Rare-error intensities of a sparse multi-output channel. Intensities are
// indexed by alphabet position; alpha0[y0] and alpha1[y1] are ignored.
struct IntensitySpec {
  std::vector<std::string> alphabet;
  std::size_t y0 = 0;
  std::size_t y1 = 1;
  std::vector<double> alpha0;
  std::vector<double> alpha1;
  double pi = 0.0;

  void validate() const;
};

inline constexpr std::size_t kMaxLimitAlphabet = 8;

IntExperiment poisson_shift_pair(double lambda, double tail_eps = kDefaultTailEps);
IntExperiment skellam_shift_pair(const LimitParams& params, double tail_eps = kDefaultTailEps);

double poisson_shift_delta_closed(double lambda, double eps);
// P(J >= m) for J ~ Poi(lambda), summed upward so small tails stay accurate.
double poisson_upper_tail(double lambda, std::int64_t m);

// m_max = 0 picks the truncation point where the tail drops below 1e-12.
TradeoffCurve poisson_shift_tradeoff(double lambda, std::int64_t m_max = 0);

LatticeExperiment compound_poisson_limit(const IntensitySpec& spec, double tail_eps = kDefaultTailEps);
IntExperiment boundary_factorization(const IntensitySpec& spec, double tail_eps = kDefaultTailEps);

}  // namespace critshuffle
