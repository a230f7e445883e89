#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "critshuffle/int_dist.hpp"
#include "oracles.hpp"

using namespace critshuffle;

TEST_CASE("IntDist construction and trimming") {
  IntDist d(-2, {0.0, 0.25, 0.5, 0.25, 0.0});
  CHECK(d.min_support() == -1);
  CHECK(d.max_support() == 1);
  CHECK(d.pmf(0) == 0.5);
  CHECK(d.pmf(5) == 0.0);
  CHECK(d.mean() == doctest::Approx(0.0));
  CHECK(d.variance() == doctest::Approx(0.5));
  CHECK_THROWS_AS(IntDist(0, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(IntDist(0, {-0.1, 1.1}), std::invalid_argument);
  CHECK(IntDist::point_mass(7).pmf(7) == 1.0);
}

TEST_CASE("binomial moments and oracle") {
  const auto b = make_binomial(30, 0.2);
  CHECK(b.total() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.mean() == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(b.variance() == doctest::Approx(4.8).epsilon(1e-12));
  for (int k = 0; k <= 30; ++k) CHECK(b.pmf(k) == doctest::Approx(oracle::binom(k, 30, 0.2)).epsilon(1e-11));
  CHECK(make_binomial(5, 0.0).pmf(0) == 1.0);
  CHECK_THROWS_AS(make_binomial(-1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_binomial(3, 1.5), std::invalid_argument);
}

TEST_CASE("convolution of Bernoullis is binomial") {
  IntDist acc = IntDist::point_mass(0);
  for (int i = 0; i < 12; ++i) acc = convolve(acc, make_bernoulli(0.35));
  const auto b = make_binomial(12, 0.35);
  const auto tv = tv_distance(acc, b);
  CHECK(tv.lower < 1e-15);
}

TEST_CASE("poisson truncation tracks the tail") {
  const auto p = make_poisson(3.0, 1e-12);
  CHECK(p.tail_mass() <= 1e-12);
  CHECK(p.total() + p.tail_mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.mean() == doctest::Approx(3.0).epsilon(1e-10));
  const auto cut = poisson_cut(3.0, 1e-12);
  CHECK(cut.last == p.max_support());
  double tail = 0.0;
  for (long long k = cut.last + 1; k < 200; ++k) tail += oracle::poisson(k, 3.0);
  CHECK(cut.tail == doctest::Approx(tail).epsilon(1e-6));
  CHECK_THROWS_AS(make_poisson(-1.0), std::invalid_argument);
  CHECK(make_poisson(0.0).pmf(0) == 1.0);
}

TEST_CASE("skellam: bessel form agrees with convolution") {
  for (auto [l0, l1] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {4.0, 0.1}, {25.0, 25.0}}) {
    const auto a = make_skellam(l0, l1, 1e-14, SkellamMethod::convolution);
    const auto b = make_skellam(l0, l1, 1e-14, SkellamMethod::bessel);
    // the convolution truncates each Poisson factor, so only absolute agreement holds in the far tails
    for (auto k = a.min_support(); k <= a.max_support(); ++k) {
      CHECK(std::abs(a.pmf(k) - b.pmf(k)) <= 1e-13);
      if (b.pmf(k) > 1e-8) CHECK(a.pmf(k) == doctest::Approx(b.pmf(k)).epsilon(1e-9));
    }
    CHECK(a.mean() == doctest::Approx(l0 - l1).epsilon(1e-10));
    CHECK(a.variance() == doctest::Approx(l0 + l1).epsilon(1e-9));
  }
  // direct Bessel oracle: e^{-(l0+l1)} (l0/l1)^{d/2} I_d(2 sqrt(l0 l1))
  const auto s = make_skellam(1.0, 1.0);
  CHECK(s.pmf(0) == doctest::Approx(std::exp(-2.0) * 2.2795853023360673).epsilon(1e-12));
}

TEST_CASE("affine_map and tv_distance") {
  const auto b = make_binomial(4, 0.5);
  const auto r = affine_map(b, -1, 4);
  for (int k = 0; k <= 4; ++k) CHECK(r.pmf(k) == doctest::Approx(b.pmf(k)));
  const auto s = affine_map(b, 1, 10);
  CHECK(s.pmf(12) == b.pmf(2));
  const auto tv = tv_distance(make_bernoulli(0.2), make_bernoulli(0.5));
  CHECK(tv.lower == doctest::Approx(0.3));
  CHECK(tv.upper == doctest::Approx(0.3));
  const auto pt = tv_distance(make_poisson(2.0, 1e-10), make_poisson(2.0, 1e-10));
  CHECK(pt.lower == 0.0);
  CHECK(pt.upper <= 2e-10);
  CHECK(pt.upper >= pt.lower);
}
