#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "critshuffle/coupling.hpp"

using namespace critshuffle;

TEST_CASE("SeededStream reproduces the published SplitMix64 sequence") {
  SeededStream s(0);
  CHECK(s.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(s.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(s.next_u64() == 0x06c45d188009454fULL);
  SeededStream a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(split_seed(7, 0) != split_seed(7, 1));
  CHECK(split_seed(7, 3) == split_seed(7, 3));
}

TEST_CASE("inversion sampler reproduces its law") {
  const auto law = make_binomial(10, 0.3);
  InversionSampler s(law);
  SeededStream rng(11);
  std::vector<std::int64_t> xs;
  for (int i = 0; i < 200000; ++i) xs.push_back(s(rng));
  CHECK(discrete_ks(xs, law) < 0.005);
}

TEST_CASE("binom_poisson_q makes the indicator Bernoulli(p)") {
  for (double p : {1e-6, 0.01, 0.05, 0.2, 0.7}) {
    const double q = binom_poisson_q(p);
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
    CHECK(-std::expm1(-p) + std::exp(-p) * q == doctest::Approx(p).epsilon(1e-14));
  }
}

TEST_CASE("joint laws have the advertised marginals") {
  const auto j = binom_poisson_joint_law(5, 0.1);
  CHECK(tv_distance(coordinate_marginal(j, 0), make_binomial(5, 0.1)).lower < 1e-13);
  CHECK(tv_distance(coordinate_marginal(j, 1), make_poisson(0.5, 1e-18)).lower < 1e-13);
  double mismatch = 0.0;
  for (const auto& [pt, pr] : j.points())
    if (pt[0] != pt[1]) mismatch += pr;
  CHECK(mismatch <= 5 * 0.1 * -std::expm1(-0.1) + 1e-15);

  const auto pp = poisson_poisson_joint_law(1.0, 1.4);
  CHECK(tv_distance(coordinate_marginal(pp, 0), make_poisson(1.0, 1e-18)).lower < 1e-13);
  CHECK(tv_distance(coordinate_marginal(pp, 1), make_poisson(1.4, 1e-18)).lower < 1e-13);

  const auto mp = multinomial_poisson_joint_law(4, {0.8, 0.15, 0.05}, {1, 2});
  CHECK(tv_distance(coordinate_marginal(mp, 1), make_binomial(4, 0.05)).lower < 1e-13);
  CHECK(tv_distance(coordinate_marginal(mp, 3), make_poisson(0.2, 1e-18)).lower < 1e-13);
}

TEST_CASE("couplers are seeded and respect their bounds") {
  const auto a = couple_binom_poisson(50, 0.02, 7, 200000);
  const auto b = couple_binom_poisson(50, 0.02, 7, 200000);
  CHECK(a.mismatch_freq == b.mismatch_freq);
  CHECK(a.bound == doctest::Approx(50 * 0.02 * -std::expm1(-0.02)));
  CHECK(a.mismatch_freq <= a.bound + a.three_sigma);
  CHECK(a.ks_first < 0.01);
  const auto c = couple_binom_poisson(50, 0.02, 8, 200000);
  CHECK(c.mismatch_freq != a.mismatch_freq);

  const auto pp = couple_poisson_poisson(2.0, 2.3, 3, 100000);
  CHECK(pp.mismatch_freq <= pp.bound + pp.three_sigma);
  const auto mp = couple_multinomial_poisson(40, {0.95, 0.03, 0.02}, {1, 2}, 5, 100000);
  CHECK(mp.mismatch_freq <= mp.bound + mp.three_sigma);
  CHECK_THROWS_AS(couple_multinomial_poisson(40, {0.9, 0.03}, {1}, 5, 10), std::invalid_argument);
}

TEST_CASE("binomial-Poisson trace: disagreement implies a multi-arrival or spurious one") {
  for (const auto& t : trace_binom_poisson(30, 0.1, 9, 20000))
    if (t.s != t.n) CHECK((t.multi_arrival || t.spurious_one));
}
