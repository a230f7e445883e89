#include "critshuffle/privacy_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "critshuffle/special_functions.hpp"

namespace critshuffle {

namespace {

using MassPairs = std::vector<std::pair<double, double>>;

MassPairs aligned(const IntDist& p, const IntDist& q) {
  const std::int64_t lo = std::min(p.min_support(), q.min_support());
  const std::int64_t hi = std::max(p.max_support(), q.max_support());
  MassPairs out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t k = lo; k <= hi; ++k) out.emplace_back(p.pmf(k), q.pmf(k));
  return out;
}

MassPairs aligned(const LatticeDist& p, const LatticeDist& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("privacy curve: dimension mismatch");
  MassPairs out;
  auto ia = p.points().begin();
  auto ib = q.points().begin();
  const auto ea = p.points().end();
  const auto eb = q.points().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      out.emplace_back(ia->second, 0.0);
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      out.emplace_back(0.0, ib->second);
      ++ib;
    } else {
      out.emplace_back(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return out;
}

double hockey_stick(const MassPairs& m, double eps, bool swap) {
  const double w = std::exp(eps);
  double s = 0.0;
  for (const auto& [p, q] : m) {
    const double v = swap ? p - w * q : q - w * p;
    if (v > 0.0) s += v;
  }
  return std::clamp(s, 0.0, 1.0);
}

DeltaResult delta_impl(const MassPairs& m, double p_tail, double q_tail, double eps, Direction direction) {
  if (!(eps >= 0.0)) throw std::invalid_argument("delta_np: eps must be >= 0");
  const double w = std::exp(eps);
  const double fwd_slack = q_tail + w * p_tail;
  const double rev_slack = p_tail + w * q_tail;
  switch (direction) {
    case Direction::forward:
      return {hockey_stick(m, eps, false), fwd_slack};
    case Direction::reverse:
      return {hockey_stick(m, eps, true), rev_slack};
    case Direction::two_sided:
      return {std::max(hockey_stick(m, eps, false), hockey_stick(m, eps, true)), std::max(fwd_slack, rev_slack)};
  }
  return {};
}

TradeoffCurve tradeoff_impl(MassPairs m, double tail) {
  if (tail > 1e-12) throw std::invalid_argument("tradeoff_generic: combined tail mass exceeds 1e-12");
  double q_only = 0.0;
  MassPairs rest;
  rest.reserve(m.size());
  for (const auto& [p, q] : m) {
    if (p == 0.0 && q == 0.0) continue;
    if (p == 0.0)
      q_only += q;
    else
      rest.emplace_back(p, q);
  }
  // descending likelihood ratio q/p, compared without division
  std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) { return a.second * b.first > b.second * a.first; });

  std::vector<TradeoffKnot> pts;
  double alpha = 0.0;
  double power = q_only;
  pts.push_back({0.0, std::max(0.0, 1.0 - power)});
  for (std::size_t i = 0; i < rest.size();) {
    // group likelihood-ratio ties into one segment
    std::size_t j = i;
    const double ratio = rest[i].second / rest[i].first;
    while (j < rest.size() && std::abs(rest[j].second / rest[j].first - ratio) <= 1e-12 * std::max(ratio, 1e-300)) {
      alpha += rest[j].first;
      power += rest[j].second;
      ++j;
    }
    pts.push_back({std::min(alpha, 1.0), std::clamp(1.0 - power, 0.0, 1.0)});
    i = j;
  }
  if (pts.back().alpha < 1.0) pts.push_back({1.0, pts.back().beta});

  // lower convex envelope (monotone chain)
  std::vector<TradeoffKnot> hull;
  for (const auto& k : pts) {
    if (!hull.empty() && k.alpha <= hull.back().alpha) {
      hull.back().beta = std::min(hull.back().beta, k.beta);
      continue;
    }
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.alpha - a.alpha) * (k.beta - a.beta) - (b.beta - a.beta) * (k.alpha - a.alpha);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
  return TradeoffCurve(std::move(hull));
}

double floor_impl(const MassPairs& m) {
  double s = 0.0;
  for (const auto& [p, q] : m)
    if (q == 0.0) s += p;
  return s;
}

}  // namespace

DeltaResult delta_np(const IntDist& p, const IntDist& q, double eps, Direction direction) {
  return delta_impl(aligned(p, q), p.tail_mass(), q.tail_mass(), eps, direction);
}

DeltaResult delta_np(const LatticeDist& p, const LatticeDist& q, double eps, Direction direction) {
  return delta_impl(aligned(p, q), p.tail_mass(), q.tail_mass(), eps, direction);
}

TradeoffCurve::TradeoffCurve(std::vector<TradeoffKnot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw std::invalid_argument("TradeoffCurve: no knots");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i].alpha > knots_[i - 1].alpha))
      throw std::invalid_argument("TradeoffCurve: alpha must be strictly increasing");
}

double TradeoffCurve::operator()(double alpha) const {
  if (alpha <= knots_.front().alpha) return knots_.front().beta;
  if (alpha >= knots_.back().alpha) return knots_.back().beta;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), alpha,
                             [](double a, const TradeoffKnot& k) { return a < k.alpha; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
  return lo.beta + t * (hi.beta - lo.beta);
}

TradeoffCurve tradeoff_generic(const IntDist& p, const IntDist& q) {
  return tradeoff_impl(aligned(p, q), p.tail_mass() + q.tail_mass());
}

TradeoffCurve tradeoff_generic(const LatticeDist& p, const LatticeDist& q) {
  return tradeoff_impl(aligned(p, q), p.tail_mass() + q.tail_mass());
}

double delta_from_tradeoff(const TradeoffCurve& curve, double eps) {
  const double w = std::exp(eps);
  double best = 0.0;
  for (const auto& k : curve.knots()) best = std::max(best, 1.0 - k.beta - w * k.alpha);
  return std::min(best, 1.0);
}

double curve_stability_bound(TVInterval tv_p, TVInterval tv_q, double eps) {
  return tv_q.upper + std::exp(eps) * tv_p.upper;
}

double floor_lower_bound(const IntDist& p, const IntDist& q) { return floor_impl(aligned(p, q)); }

double floor_lower_bound(const LatticeDist& p, const LatticeDist& q) { return floor_impl(aligned(p, q)); }

double gdp_delta(double mu, double eps) {
  if (!(mu > 0.0)) throw std::invalid_argument("gdp_delta: mu must be > 0");
  const double v = std_normal_cdf(-eps / mu + 0.5 * mu) - std::exp(eps) * std_normal_cdf(-eps / mu - 0.5 * mu);
  return std::max(0.0, v);
}

}  // namespace critshuffle
