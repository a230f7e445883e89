#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "critshuffle/rr_experiment.hpp"
#include "critshuffle/special_functions.hpp"
#include "oracles.hpp"

using namespace critshuffle;

TEST_CASE("rr_config calibrations") {
  const auto cfg = rr_config(100, CanonicalC{1.0});
  CHECK(cfg.exp_eps0 == doctest::Approx(100.0));
  CHECK(cfg.delta_n == doctest::Approx(1.0 / 101.0).epsilon(1e-15));
  CHECK(cfg.a_n == doctest::Approx(1.0));
  const auto ex = rr_config(10, ExplicitEps0{std::log(9.0)}, 3);
  CHECK(ex.delta_n == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(ex.pi_n == doctest::Approx(0.3));
  CHECK_THROWS_AS(rr_config(4, CanonicalC{0.5}), std::invalid_argument);
  CHECK_THROWS_AS(rr_config(10, ExplicitEps0{1.0}, 10), std::invalid_argument);
  CHECK_THROWS_AS(rr_config(0, ExplicitEps0{1.0}), std::invalid_argument);
}

TEST_CASE("canonical pair equals brute-force enumeration of flip patterns") {
  const int n = 10;
  const auto cfg = rr_config(n, ExplicitEps0{1.3});
  const auto pair = canonical_pair(cfg);
  const auto p_ref = oracle::rr_count_bruteforce(n, 0, cfg.delta_n);
  const auto q_ref = oracle::rr_count_bruteforce(n, 1, cfg.delta_n);
  for (int m = 0; m <= n; ++m) {
    CHECK(pair.p.pmf(m) == doctest::Approx(p_ref[static_cast<std::size_t>(m)]).epsilon(1e-12));
    CHECK(pair.q.pmf(m) == doctest::Approx(q_ref[static_cast<std::size_t>(m)]).epsilon(1e-12));
  }
}

TEST_CASE("composition pair is the centred count for k and k + 1 ones") {
  const int n = 9, k = 4;
  const auto cfg = rr_config(n, ExplicitEps0{0.8}, k);
  const auto pair = composition_pair(cfg);
  const auto p_ref = oracle::rr_count_bruteforce(n, k, cfg.delta_n);
  const auto q_ref = oracle::rr_count_bruteforce(n, k + 1, cfg.delta_n);
  for (int m = 0; m <= n; ++m) {
    CHECK(pair.p.pmf(m - k) == doctest::Approx(p_ref[static_cast<std::size_t>(m)]).epsilon(1e-12));
    CHECK(pair.q.pmf(m - k) == doctest::Approx(q_ref[static_cast<std::size_t>(m)]).epsilon(1e-12));
  }
}

TEST_CASE("likelihood ratio of the canonical pair") {
  const auto cfg = rr_config(50, CanonicalC{1.2});
  const auto pair = canonical_pair(cfg);
  for (int m : {0, 1, 3, 20, 50}) CHECK(likelihood_ratio_canonical(cfg, m) == doctest::Approx(pair.q.pmf(m) / pair.p.pmf(m)).epsilon(1e-11));
  CHECK(likelihood_ratio_canonical(cfg, 0) == doctest::Approx(1.0 / cfg.exp_eps0).epsilon(1e-14));
  CHECK_THROWS_AS(likelihood_ratio_canonical(cfg, 51), std::invalid_argument);
}

TEST_CASE("log-likelihood-ratio law") {
  const auto cfg = rr_config(200, ExplicitEps0{std::log(14.0)});
  const auto null_law = loglr_law(cfg, Hypothesis::null);
  const auto alt_law = loglr_law(cfg, Hypothesis::alt);
  double tot = 0.0, mean_lr = 0.0;
  for (const auto& a : null_law.atoms) {
    tot += a.prob;
    mean_lr += a.prob * std::exp(a.value);
  }
  CHECK(tot == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean_lr == doctest::Approx(1.0).epsilon(1e-10));  // E_P[q/p] = 1
  for (std::size_t i = 1; i < null_law.atoms.size(); ++i) CHECK(null_law.atoms[i].value > null_law.atoms[i - 1].value);
  double alt_tot = 0.0;
  for (const auto& a : alt_law.atoms) alt_tot += a.prob;
  CHECK(alt_tot == doctest::Approx(1.0).epsilon(1e-12));
  const double d = cfg.delta_n;
  CHECK(null_law.context.h_n == doctest::Approx((1 - 2 * d) / std::sqrt(200 * d * (1 - d))));
}

TEST_CASE("ks_to_normal of a fine lattice approximates the normal") {
  ScoredLaw law;
  for (int i = -400; i <= 400; ++i) {
    const double x = i / 100.0;
    law.atoms.push_back({x, std_normal_cdf(x + 0.005) - std_normal_cdf(x - 0.005)});
  }
  CHECK(ks_to_normal(law, 0.0, 1.0) < 0.003);
  CHECK(ks_to_normal(law, 3.0, 1.0) > 0.4);
}
