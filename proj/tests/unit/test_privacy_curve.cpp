#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "critshuffle/lattice_dist.hpp"
#include "critshuffle/privacy_curve.hpp"
#include "oracles.hpp"

using namespace critshuffle;

namespace {

std::vector<double> dense(const IntDist& d, std::int64_t lo, std::int64_t hi) {
  std::vector<double> v;
  for (auto k = lo; k <= hi; ++k) v.push_back(d.pmf(k));
  return v;
}

}  // namespace

TEST_CASE("delta_np equals brute-force hockey stick over all subsets") {
  const IntDist p(0, {0.1, 0.2, 0.3, 0.25, 0.15});
  const IntDist q(1, {0.05, 0.15, 0.3, 0.3, 0.2});
  const auto pv = dense(p, 0, 5), qv = dense(q, 0, 5);
  for (double eps : {0.0, 0.3, 1.0, 2.5}) {
    CHECK(delta_np(p, q, eps, Direction::forward).value == doctest::Approx(oracle::hockey_stick_bruteforce(pv, qv, eps)).epsilon(1e-14));
    CHECK(delta_np(p, q, eps, Direction::reverse).value == doctest::Approx(oracle::hockey_stick_bruteforce(qv, pv, eps)).epsilon(1e-14));
    CHECK(delta_np(p, q, eps, Direction::two_sided).value ==
          doctest::Approx(std::max(oracle::hockey_stick_bruteforce(pv, qv, eps), oracle::hockey_stick_bruteforce(qv, pv, eps))));
  }
  CHECK(delta_np(p, q, 0.0, Direction::forward).value == doctest::Approx(tv_distance(p, q).lower));
  CHECK_THROWS_AS(delta_np(p, q, -1.0, Direction::forward), std::invalid_argument);
}

TEST_CASE("lattice delta_np matches the IntDist path") {
  const IntDist p(0, {0.5, 0.3, 0.2});
  const IntDist q(0, {0.2, 0.3, 0.5});
  for (double eps : {0.0, 0.5, 1.0})
    CHECK(delta_np(from_int_dist(p), from_int_dist(q), eps, Direction::two_sided).value ==
          doctest::Approx(delta_np(p, q, eps, Direction::two_sided).value));
}

TEST_CASE("trade-off function and its eps-delta dual") {
  const IntDist p(0, {0.1, 0.2, 0.3, 0.25, 0.15});
  const IntDist q(1, {0.05, 0.15, 0.3, 0.3, 0.2});
  const auto curve = tradeoff_generic(p, q);
  const auto& ks = curve.knots();
  CHECK(ks.front().alpha == 0.0);
  CHECK(ks.back().alpha == 1.0);
  CHECK(ks.back().beta == doctest::Approx(0.0).scale(1e-15));
  for (std::size_t i = 1; i < ks.size(); ++i) CHECK(ks[i].beta <= ks[i - 1].beta + 1e-15);
  for (std::size_t i = 2; i < ks.size(); ++i) {
    const double s0 = (ks[i - 1].beta - ks[i - 2].beta) / (ks[i - 1].alpha - ks[i - 2].alpha);
    const double s1 = (ks[i].beta - ks[i - 1].beta) / (ks[i].alpha - ks[i - 1].alpha);
    CHECK(s1 >= s0 - 1e-12);
  }
  // q has mass 0.2 at 5 where p has none: rejecting there is free
  CHECK(ks.front().beta == doctest::Approx(0.8));
  CHECK(curve(0.0) == doctest::Approx(0.8));
  CHECK(curve(0.1) < 1.0);
  for (double eps : {0.0, 0.2, 1.0, 3.0})
    CHECK(delta_from_tradeoff(curve, eps) == doctest::Approx(delta_np(p, q, eps, Direction::forward).value).epsilon(1e-12));
  CHECK_THROWS_AS(tradeoff_generic(make_poisson(1.0, 1e-6), make_poisson(2.0, 1e-6)), std::invalid_argument);
}

TEST_CASE("curve stability and floor bounds") {
  CHECK(curve_stability_bound({0.01, 0.02}, {0.03, 0.03}, 1.0) == doctest::Approx(0.03 + std::exp(1.0) * 0.02));
  const IntDist p(0, {0.4, 0.6});
  const IntDist q(1, {0.6, 0.4});
  CHECK(floor_lower_bound(p, q) == doctest::Approx(0.4));  // q-mass outside supp p
  for (double eps : {0.0, 5.0, 50.0}) CHECK(delta_np(p, q, eps, Direction::forward).value >= 0.4 - 1e-15);
}

TEST_CASE("GDP conversion") {
  // mu = 1, eps = 0: 2 Phi(1/2) - 1
  CHECK(gdp_delta(1.0, 0.0) == doctest::Approx(0.38292492254802624).epsilon(1e-14));
  CHECK(gdp_delta(0.01, 1.0) < 1e-12);
  CHECK(gdp_delta(2.0, 1.0) > gdp_delta(1.0, 1.0));
}
