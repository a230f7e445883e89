#pragma once

#include <vector>

#include "critshuffle/int_dist.hpp"
#include "critshuffle/lattice_dist.hpp"

namespace critshuffle {

// forward: delta_{Q||P}; reverse: delta_{P||Q}; two_sided: the larger of both
enum class Direction { forward, reverse, two_sided };

struct DeltaResult {
  double value = 0.0;
  double slack = 0.0;
};

DeltaResult delta_np(const IntDist& p, const IntDist& q, double eps, Direction direction);
DeltaResult delta_np(const LatticeDist& p, const LatticeDist& q, double eps, Direction direction);

struct TradeoffKnot {
  double alpha;
  double beta;
};

// Piecewise-linear trade-off function through its knots.
class TradeoffCurve {
 public:
  TradeoffCurve() = default;
  explicit TradeoffCurve(std::vector<TradeoffKnot> knots);

  const std::vector<TradeoffKnot>& knots() const { return knots_; }
  double operator()(double alpha) const;

 private:
  std::vector<TradeoffKnot> knots_;
};

TradeoffCurve tradeoff_generic(const IntDist& p, const IntDist& q);
TradeoffCurve tradeoff_generic(const LatticeDist& p, const LatticeDist& q);
double delta_from_tradeoff(const TradeoffCurve& curve, double eps);

double curve_stability_bound(TVInterval tv_p, TVInterval tv_q, double eps);

double floor_lower_bound(const IntDist& p, const IntDist& q);
double floor_lower_bound(const LatticeDist& p, const LatticeDist& q);

// Gaussian-DP curve delta(eps) for G_mu = (N(0,1), N(mu,1)).
double gdp_delta(double mu, double eps);

}  // namespace critshuffle
