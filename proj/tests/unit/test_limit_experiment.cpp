#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "critshuffle/limit_experiment.hpp"
#include "oracles.hpp"

using namespace critshuffle;

namespace {

// sum_j (Q(j) - w P(j))_+ with Q(j) = P(j - 1), P = Poi(lambda)
double shift_delta_oracle(double lambda, double eps) {
  const double w = std::exp(eps);
  double s = 0.0;
  for (int j = 0; j < 400; ++j) s += std::max(0.0, oracle::poisson(j - 1, lambda) - w * oracle::poisson(j, lambda));
  return s;
}

}  // namespace

TEST_CASE("limit parameters") {
  const auto p = make_limit_params(2.0, 0.25);
  CHECK(p.lambda == doctest::Approx(0.25));
  CHECK(p.lambda0 == doctest::Approx(0.1875));
  CHECK(p.lambda1 == doctest::Approx(0.0625));
  CHECK_THROWS_AS(make_limit_params(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_limit_params(1.0, 1.5), std::invalid_argument);
}

TEST_CASE("Poisson-shift curve: closed form against an NP-sum oracle") {
  for (double lambda : {0.1, 1.0, 3.0, 12.0})
    for (double eps : {0.0, 0.7, 2.0, 6.0})
      CHECK(poisson_shift_delta_closed(lambda, eps) == doctest::Approx(shift_delta_oracle(lambda, eps)).epsilon(1e-11).scale(1e-14));
  CHECK(poisson_shift_delta_closed(1.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("Poisson-shift curve has the e^{-lambda} floor and decreases in lambda") {
  const auto pair = poisson_shift_pair(1.0);
  for (double eps : {0.0, 1.0, 3.0, 10.0, 40.0})
    CHECK(delta_np(pair.p, pair.q, eps, Direction::two_sided).value >= std::exp(-1.0) - 1e-14);
  for (double eps : {0.0, 1.0, 2.0}) {
    double prev = 2.0;
    for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double d = poisson_shift_delta_closed(lambda, eps);
      CHECK(d <= prev);
      prev = d;
    }
  }
}

TEST_CASE("Poisson-shift trade-off: f(0) = 1 and dual to the curve") {
  const auto curve = poisson_shift_tradeoff(1.0);
  CHECK(curve(0.0) == doctest::Approx(1.0));
  CHECK(curve(1.0) == doctest::Approx(0.0).scale(1e-12));
  // Neyman-Pearson at alpha = e^{-1}: reject {k >= 2} plus a fraction of the atom at 1
  CHECK(curve(std::exp(-1.0)) == doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(curve(1.0 - 2.0 * std::exp(-1.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  for (double eps : {0.0, 0.5, 3.0})
    CHECK(delta_from_tradeoff(curve, eps) == doctest::Approx(poisson_shift_delta_closed(1.0, eps)).epsilon(1e-10));
}

TEST_CASE("binary compound-Poisson limit is the Skellam shift") {
  IntensitySpec s;
  s.alphabet = {"0", "1"};
  s.alpha0 = {0.0, 1.5};
  s.alpha1 = {0.8, 0.0};
  s.pi = 0.4;
  const auto lim = compound_poisson_limit(s);
  const auto p = coordinate_marginal(lim.p, 1);
  const auto sk = make_skellam(0.6 * 1.5, 0.4 * 0.8);
  CHECK(tv_distance(p, sk).lower < 1e-12);
  // alternative = null shifted by e_{y1} - e_{y0}
  CHECK(tv_distance(translate(lim.p, {Rational(-1), Rational(1)}), lim.q).lower < 1e-15);
}

TEST_CASE("boundary factorization") {
  IntensitySpec s;
  s.alphabet = {"a", "b", "z"};
  s.alpha0 = {0.0, 0.9, 0.4};
  s.alpha1 = {1.1, 0.0, 0.2};
  s.pi = 0.0;
  const auto b0 = boundary_factorization(s);
  CHECK(tv_distance(b0.p, make_poisson(0.9)).lower < 1e-15);
  s.pi = 1.0;
  const auto b1 = boundary_factorization(s);
  const auto shift = poisson_shift_pair(1.1);
  // mirror pair: its forward curve is the reverse curve of the shift pair
  for (double eps : {0.0, 1.0, 4.0})
    CHECK(delta_np(b1.p, b1.q, eps, Direction::forward).value ==
          doctest::Approx(delta_np(shift.p, shift.q, eps, Direction::reverse).value).epsilon(1e-13));
  s.pi = 0.5;
  CHECK_THROWS_AS(boundary_factorization(s), std::invalid_argument);
}

TEST_CASE("intensity spec validation") {
  IntensitySpec s;
  s.alphabet = {"a", "b"};
  s.alpha0 = {0.0, -1.0};
  s.alpha1 = {0.0, 0.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.alpha0 = {0.0, 1.0};
  s.y1 = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
