#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>

#include "critshuffle/bounds.hpp"

using namespace critshuffle;

TEST_CASE("Poisson bounds at canonical calibration") {
  const auto cfg = rr_config(100, CanonicalC{1.0});
  const auto b = poisson_bounds(cfg, 1.0);
  CHECK(b.canonical_composite == doctest::Approx(0.04).epsilon(1e-14));
  CHECK(b.canonical_p == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(b.lambda_n_gap == doctest::Approx(1.0 / 101.0).epsilon(1e-13));  // |-1/(c^2 (1 + c^2 n))|
  CHECK(b.n_delta_sq == doctest::Approx(100.0 / (101.0 * 101.0)).epsilon(1e-13));
  CHECK(b.p_bound_sharp <= b.p_bound);
  CHECK(b.q_bound_sharp <= b.q_bound);
  const auto big = poisson_bounds(rr_config(1000000, CanonicalC{1.0}), 1.0);
  CHECK(big.p_bound < 1e-5);
  CHECK(big.q_bound < 1e-5);
}

TEST_CASE("sharp Poisson rate record") {
  for (double c : {0.5, 1.0, 2.0})
    for (std::int64_t n : {2, 10, 1000, 100000}) {
      if (c * c * n <= 1.0) continue;
      const auto r = poisson_sharp_lower(c, n);
      const long double ref = std::exp(-n * std::log1p(1.0L / (c * c * n))) - std::exp(-1.0L / (c * c));
      CHECK(r.exact_atom_gap >= 0.0);
      CHECK(r.exact_atom_gap == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
      CHECK(r.lower == doctest::Approx(r.predicted_atom_gap / 2.0));
    }
  const auto r = poisson_sharp_lower(1.0, 10000);
  CHECK(std::abs(10000.0 * r.exact_atom_gap - std::exp(-1.0) / 2.0) <= 0.004);
  CHECK(10000.0 * r.predicted_atom_gap == doctest::Approx(0.18393972058572117).epsilon(1e-14));
}

TEST_CASE("Skellam bounds and the characteristic-function route") {
  const auto params = make_limit_params(1.0, 0.5);
  const auto cfg = rr_config(100, CanonicalC{1.0}, 50);
  const auto b = skellam_bounds(cfg, params);
  CHECK(b.canonical_composite == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(std::abs(b.g_inf_p) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  // G_n(i) by a direct sum over the exact pmf
  const auto pair = composition_pair(cfg);
  std::complex<double> g = 0.0;
  const std::complex<double> I(0.0, 1.0);
  for (auto d = pair.p.min_support(); d <= pair.p.max_support(); ++d) g += pair.p.pmf(d) * std::pow(I, static_cast<int>(d));
  CHECK(std::abs(g - b.g_n_p) < 1e-14);
  CHECK(b.cf_lower_p == doctest::Approx(0.5 * std::abs(g - b.g_inf_p)));
  CHECK(b.alpha_n == doctest::Approx(0.0));
  CHECK(b.predicted_n_cf_gap == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("cint_constant") {
  const double v = cint_constant(0.5, 0.5, 0.5, 0.5, 0.5);
  CHECK(v == doctest::Approx(208.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(cint_constant(0.2, 0.7, 0.3, 1.0, 0.4) == doctest::Approx(cint_constant(0.7, 0.2, 0.3, 0.4, 1.0)));
  CHECK(cint_constant(0.2, 0.7, 0.3, 1.0, 0.5) > cint_constant(0.2, 0.7, 0.3, 1.0, 0.4));
  CHECK_THROWS_AS(cint_constant(0.5, 0.5, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("multivariate bounds") {
  IntensitySpec s;
  s.alphabet = {"a", "b", "c"};
  s.alpha0 = {0.0, 1.0, 0.5};
  s.alpha1 = {1.0, 0.0, 0.5};
  s.pi = 0.5;
  const auto ch = channel_from_intensities(s, 100);
  const auto b = multivariate_bounds(ch, 50, s);
  CHECK(b.mismatch_p == doctest::Approx(0.0).scale(1e-15));
  CHECK(b.p0n == doctest::Approx(0.015));
  CHECK(b.poisson_terms_p == doctest::Approx(50 * 0.015 * -std::expm1(-0.015) * 2));
  const auto b2 = multivariate_bounds(channel_from_intensities(s, 1000), 500, s);
  CHECK(b2.p_bound < b.p_bound / 5.0);

  // binary RR channel: the intensity-mismatch sums are the Skellam rate gaps
  const double c = 1.0;
  const auto cfg = rr_config(200, CanonicalC{c}, 60);
  IntensitySpec bin;
  bin.alphabet = {"0", "1"};
  bin.alpha0 = {0.0, 1.0 / (c * c)};
  bin.alpha1 = {1.0 / (c * c), 0.0};
  bin.pi = 0.3;
  SparseChannel rr{to_channel_spec(bin), 200, {1.0 - cfg.delta_n, cfg.delta_n}, {cfg.delta_n, 1.0 - cfg.delta_n}};
  const auto mb = multivariate_bounds(rr, 60, bin);
  const auto sb = skellam_bounds(cfg, make_limit_params(c, 0.3));
  CHECK(mb.mismatch_p == doctest::Approx(sb.lambda0_gap + sb.lambda1_gap).epsilon(1e-12));
  CHECK(mb.mismatch_q == doctest::Approx(sb.lambda0_gap_alt + sb.lambda1_gap_alt).epsilon(1e-12));
  CHECK(mb.poisson_terms_p <= sb.n_delta_sq);
}
