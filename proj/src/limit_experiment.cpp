#include "critshuffle/limit_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "critshuffle/special_functions.hpp"

namespace critshuffle {

LimitParams make_limit_params(double c, double pi) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("make_limit_params: c must be > 0");
  if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("make_limit_params: pi outside [0,1]");
  LimitParams lp;
  lp.c = c;
  lp.pi = pi;
  lp.lambda = 1.0 / (c * c);
  lp.lambda0 = (1.0 - pi) / (c * c);
  lp.lambda1 = pi / (c * c);
  return lp;
}

void IntensitySpec::validate() const {
  const std::size_t d = alphabet.size();
  if (d < 2) throw std::invalid_argument("IntensitySpec: alphabet needs at least two symbols");
  if (y0 >= d || y1 >= d) throw std::invalid_argument("IntensitySpec: dominant output outside alphabet");
  if (y0 == y1) throw std::invalid_argument("IntensitySpec: y0 and y1 must differ");
  if (alpha0.size() != d || alpha1.size() != d)
    throw std::invalid_argument("IntensitySpec: intensity vectors must match the alphabet size");
  for (std::size_t y = 0; y < d; ++y) {
    if (!(alpha0[y] >= 0.0) || !std::isfinite(alpha0[y]) || !(alpha1[y] >= 0.0) || !std::isfinite(alpha1[y]))
      throw std::invalid_argument("IntensitySpec: intensities must be finite and >= 0");
  }
  if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("IntensitySpec: pi outside [0,1]");
}

IntExperiment poisson_shift_pair(double lambda, double tail_eps) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_shift_pair: lambda must be > 0");
  IntDist p = make_poisson(lambda, tail_eps);
  IntDist q = affine_map(p, 1, 1);
  return {std::move(p), std::move(q)};
}

IntExperiment skellam_shift_pair(const LimitParams& params, double tail_eps) {
  IntDist p = make_skellam(params.lambda0, params.lambda1, tail_eps);
  IntDist q = affine_map(p, 1, 1);
  return {std::move(p), std::move(q)};
}

double poisson_upper_tail(double lambda, std::int64_t m) {
  if (m <= 0) return 1.0;
  if (lambda == 0.0) return 0.0;
  const auto mode = static_cast<std::int64_t>(std::floor(lambda));
  if (m <= mode) {
    // left of the mode the complement is the short sum
    double lower = 0.0;
    for (std::int64_t j = 0; j < m; ++j) lower += poisson_pmf(j, lambda);
    if (lower < 0.5) return 1.0 - lower;
  }
  double s = 0.0;
  for (std::int64_t j = m;; ++j) {
    const double t = poisson_pmf(j, lambda);
    s += t;
    if (static_cast<double>(j) > lambda && (t <= 1e-18 * s || t == 0.0)) break;
  }
  return s;
}

double poisson_shift_delta_closed(double lambda, double eps) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_shift_delta_closed: lambda must be > 0");
  if (!(eps >= 0.0)) throw std::invalid_argument("poisson_shift_delta_closed: eps must be >= 0");
  const double w = std::exp(eps);
  const auto m = static_cast<std::int64_t>(std::floor(lambda * w)) + 1;
  // P(J >= m-1) - w P(J >= m) = p(m-1) + (1 - w) P(J >= m)
  const double v = poisson_pmf(m - 1, lambda) + (1.0 - w) * poisson_upper_tail(lambda, m);
  return std::clamp(v, 0.0, 1.0);
}

TradeoffCurve poisson_shift_tradeoff(double lambda, std::int64_t m_max) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_shift_tradeoff: lambda must be > 0");
  if (m_max <= 0) m_max = poisson_cut(lambda, 1e-12).last + 1;
  if (poisson_upper_tail(lambda, m_max) > 1e-12)
    throw std::invalid_argument("poisson_shift_tradeoff: m_max leaves more than 1e-12 of tail");
  std::vector<TradeoffKnot> knots;
  knots.push_back({0.0, 1.0});
  for (std::int64_t m = m_max; m >= 1; --m) {
    const double alpha = poisson_upper_tail(lambda, m);
    const double beta = 1.0 - poisson_upper_tail(lambda, m - 1);
    if (alpha <= knots.back().alpha) continue;
    knots.push_back({alpha, std::max(0.0, beta)});
  }
  if (knots.back().alpha < 1.0) knots.push_back({1.0, 0.0});
  return TradeoffCurve(std::move(knots));
}

LatticeExperiment compound_poisson_limit(const IntensitySpec& spec, double tail_eps) {
  spec.validate();
  const std::size_t d = spec.alphabet.size();
  if (d > kMaxLimitAlphabet) throw std::invalid_argument("compound_poisson_limit: alphabet larger than the enumeration guard");

  struct Coord {
    std::size_t target;
    std::size_t base;
    double rate;
  };
  std::vector<Coord> coords;
  for (std::size_t y = 0; y < d; ++y) {
    if (y != spec.y0 && spec.alpha0[y] * (1.0 - spec.pi) > 0.0) coords.push_back({y, spec.y0, (1.0 - spec.pi) * spec.alpha0[y]});
    if (y != spec.y1 && spec.alpha1[y] * spec.pi > 0.0) coords.push_back({y, spec.y1, spec.pi * spec.alpha1[y]});
  }

  LatticeDist::Map cur;
  cur.emplace(LatticePoint(d, Rational(0)), 1.0);
  double tail = 0.0;
  const double per_coord = coords.empty() ? tail_eps : tail_eps / static_cast<double>(coords.size());
  for (const auto& co : coords) {
    const IntDist pois = make_poisson(co.rate, per_coord);
    tail += pois.tail_mass();
    LatticeDist::Map next;
    for (const auto& [pt, pr] : cur) {
      for (std::int64_t j = pois.min_support(); j <= pois.max_support(); ++j) {
        const double w = pr * pois.pmf(j);
        if (w == 0.0) continue;
        LatticePoint q = pt;
        q[co.target] += Rational(j);
        q[co.base] -= Rational(j);
        next[std::move(q)] += w;
      }
    }
    cur = std::move(next);
  }
  LatticeDist p(d, std::move(cur), std::min(1.0, tail));
  LatticePoint shift(d, Rational(0));
  shift[spec.y1] += Rational(1);
  shift[spec.y0] -= Rational(1);
  LatticeDist q = translate(p, shift);
  return {std::move(p), std::move(q)};
}

IntExperiment boundary_factorization(const IntensitySpec& spec, double tail_eps) {
  spec.validate();
  if (spec.pi == 0.0) {
    const double a = spec.alpha0[spec.y1];
    if (!(a > 0.0)) throw std::invalid_argument("boundary_factorization: alpha0(y1) must be > 0");
    return poisson_shift_pair(a, tail_eps);
  }
  if (spec.pi == 1.0) {
    // on coordinate y0 the null is Poi(a) and the alternative removes one count
    const double a = spec.alpha1[spec.y0];
    if (!(a > 0.0)) throw std::invalid_argument("boundary_factorization: alpha1(y0) must be > 0");
    IntDist p = make_poisson(a, tail_eps);
    IntDist q = affine_map(p, 1, -1);
    return {std::move(p), std::move(q)};
  }
  throw std::invalid_argument("boundary_factorization: pi must be 0 or 1");
}

}  // namespace critshuffle
