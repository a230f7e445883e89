#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>

#include "critshuffle/multivariate.hpp"
#include "critshuffle/privacy_curve.hpp"
#include "critshuffle/rr_experiment.hpp"

using namespace critshuffle;

namespace {

// Law of N - centre by listing every output tuple of n users: the first
// n - ones users use row w0, the rest row w1.
LatticeDist bruteforce_histogram(const std::vector<double>& w0, const std::vector<double>& w1, int n, int ones,
                                 const std::vector<std::int64_t>& centre) {
  const std::size_t d = w0.size();
  LatticeDist::Map law;
  std::vector<std::size_t> out(static_cast<std::size_t>(n), 0);
  while (true) {
    double pr = 1.0;
    std::vector<std::int64_t> h(d, 0);
    for (int i = 0; i < n; ++i) {
      const auto& w = i < n - ones ? w0 : w1;
      pr *= w[out[static_cast<std::size_t>(i)]];
      ++h[out[static_cast<std::size_t>(i)]];
    }
    for (std::size_t y = 0; y < d; ++y) h[y] -= centre[y];
    if (pr > 0.0) law[integer_point(h)] += pr;
    std::size_t i = 0;
    while (i < out.size() && ++out[i] == d) out[i++] = 0;
    if (i == out.size()) break;
  }
  return LatticeDist(d, std::move(law));
}

IntensitySpec three_letter() {
  IntensitySpec s;
  s.alphabet = {"a", "b", "c"};
  s.alpha0 = {0.0, 1.0, 0.5};
  s.alpha1 = {0.7, 0.0, 0.4};
  s.pi = 0.5;
  return s;
}

ChannelSpec four_letter(double pi) {
  ChannelSpec s;
  s.alphabet = {"a", "b", "c", "d"};
  s.mode = ChannelMode::two_dominant;
  s.pair0 = {0, 1};
  s.pair1 = {2, 3};
  s.split0 = 0.3;
  s.split1 = 0.6;
  s.alpha0 = {0.0, 0.0, 0.5, 0.3};
  s.alpha1 = {0.4, 0.2, 0.0, 0.0};
  s.pi = pi;
  return s;
}

}  // namespace

TEST_CASE("channel instantiation") {
  const auto ch = channel_from_intensities(three_letter(), 10);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t y = 0; y < 3; ++y) {
    s0 += ch.w0[y];
    s1 += ch.w1[y];
  }
  CHECK(s0 == doctest::Approx(1.0));
  CHECK(s1 == doctest::Approx(1.0));
  CHECK(ch.w0[1] == doctest::Approx(0.1));
  CHECK(ch.w0[0] == doctest::Approx(0.85));
  CHECK_THROWS_AS(channel_from_intensities(three_letter(), 1), std::invalid_argument);

  auto two = four_letter(0.5);
  const auto c2 = channel_from_intensities(two, 8);
  CHECK(c2.w0[0] == doctest::Approx(0.3 * (1.0 - 0.8 / 8)));
  CHECK(c2.w0[2] == doctest::Approx(0.5 / 8));
  two.split0 = 1.0;
  const auto c3 = channel_from_intensities(two, 8);
  CHECK(c3.w0[1] == 0.0);  // degenerate split collapses to a single dominant output
}

TEST_CASE("single-dominant histogram pair matches brute-force enumeration") {
  const int n = 5, k = 2;
  const auto ch = channel_from_intensities(three_letter(), n);
  const auto pair = exact_histogram_pair(ch, k, 12);
  const std::vector<std::int64_t> centre{n - k, k, 0};
  const auto p_ref = bruteforce_histogram(ch.w0, ch.w1, n, k, centre);
  const auto q_ref = bruteforce_histogram(ch.w0, ch.w1, n, k + 1, centre);
  CHECK(tv_distance(pair.p, p_ref).upper < 1e-14);
  CHECK(tv_distance(pair.q, q_ref).upper < 1e-14);
  for (const auto& [pt, pr] : pair.p.points()) {
    Rational s = 0;
    for (const auto& x : pt) s += x;
    CHECK(s == Rational(0));
  }
}

TEST_CASE("two-dominant histogram pair matches brute-force enumeration") {
  const int n = 4, k = 2;
  const auto ch = channel_from_intensities(four_letter(0.5), n);
  const auto pair = exact_histogram_pair(ch, k, 12);
  const std::vector<std::int64_t> centre{n - k, 0, k, 0};
  CHECK(tv_distance(pair.p, bruteforce_histogram(ch.w0, ch.w1, n, k, centre)).upper < 1e-14);
  CHECK(tv_distance(pair.q, bruteforce_histogram(ch.w0, ch.w1, n, k + 1, centre)).upper < 1e-14);
}

TEST_CASE("histogram marginals are convolutions of two binomials") {
  const int n = 20, k = 7;
  const auto ch = channel_from_intensities(three_letter(), n);
  const auto pair = exact_histogram_pair(ch, k, 20);
  const auto m = coordinate_marginal(pair.p, 2);
  const auto ref = convolve(make_binomial(n - k, ch.w0[2]), make_binomial(k, ch.w1[2]));
  CHECK(tv_distance(m, ref).lower < 1e-13);
}

TEST_CASE("deterministic and binary channels") {
  IntensitySpec s;
  s.alphabet = {"0", "1", "2"};
  s.alpha0 = {0.0, 0.0, 0.0};
  s.alpha1 = {0.0, 0.0, 0.0};
  s.pi = 0.5;
  const auto pair = exact_histogram_pair(channel_from_intensities(s, 10), 5);
  CHECK(pair.p.pmf(integer_point(std::vector<std::int64_t>{0, 0, 0})) == doctest::Approx(1.0));
  CHECK(pair.q.pmf(integer_point(std::vector<std::int64_t>{-1, 1, 0})) == doctest::Approx(1.0));

  // binary RR channel: coordinate y1 carries the composition-pair laws
  const auto cfg = rr_config(30, CanonicalC{1.0}, 12);
  IntensitySpec b;
  b.alphabet = {"0", "1"};
  b.alpha0 = {0.0, 1.0};
  b.alpha1 = {1.0, 0.0};
  b.pi = 0.4;
  SparseChannel rr{to_channel_spec(b), 30, {1.0 - cfg.delta_n, cfg.delta_n}, {cfg.delta_n, 1.0 - cfg.delta_n}};
  const auto hp = exact_histogram_pair(rr, 12, 30);
  const auto cp = composition_pair(cfg);
  CHECK(tv_distance(coordinate_marginal(hp.p, 1), cp.p).lower < 1e-13);
  CHECK(tv_distance(coordinate_marginal(hp.q, 1), cp.q).lower < 1e-13);
}

TEST_CASE("enumeration guards") {
  const auto ch = channel_from_intensities(four_letter(0.5), 200);
  CHECK_THROWS_AS(exact_histogram_pair(ch, 100), std::invalid_argument);
  const auto c3 = channel_from_intensities(three_letter(), 10);
  CHECK_THROWS_AS(exact_histogram_pair(c3, 10), std::invalid_argument);
  IntensitySpec heavy = three_letter();
  heavy.alpha0 = {0.0, 30.0, 30.0};
  CHECK_THROWS_AS(exact_histogram_pair(channel_from_intensities(heavy, 500), 250, 12), std::runtime_error);
}

TEST_CASE("hybrid model projections are exact") {
  const auto m = hybrid_setup(four_letter(0.5));
  const std::size_t d = m.dim;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Rational gg = 0, jj = 0, gj = 0;
      for (std::size_t l = 0; l < d; ++l) {
        gg += m.Pi_G[i][l] * m.Pi_G[l][j];
        jj += m.Pi_J[i][l] * m.Pi_J[l][j];
        gj += m.Pi_G[i][l] * m.Pi_J[l][j];
      }
      CHECK(gg == m.Pi_G[i][j]);
      CHECK(jj == m.Pi_J[i][j]);
      CHECK(gj == Rational(0));
      CHECK(m.Pi_G[i][j] + m.Pi_J[i][j] == Rational(i == j ? 1 : 0));
    }
  for (const auto& x : apply(m.Pi_J, m.g0)) CHECK(x == Rational(0));
  for (const auto& x : apply(m.Pi_J, m.g1)) CHECK(x == Rational(0));
  for (const auto& x : m.Delta) CHECK(2 % x.den() == 0);
  CHECK(m.Sigma[0][0] == doctest::Approx(0.5 * 0.3 * 0.7));
  CHECK(m.Sigma[1][1] == doctest::Approx(0.5 * 0.6 * 0.4));
  CHECK(m.Sigma[0][1] == 0.0);
  auto overlap = four_letter(0.5);
  overlap.pair1 = {1, 2};
  CHECK_THROWS_AS(hybrid_setup(overlap), std::invalid_argument);
}

TEST_CASE("projection cannot increase the privacy curve") {
  const auto spec = four_letter(0.5);
  const auto m = hybrid_setup(spec);
  const auto full = exact_histogram_pair(channel_from_intensities(spec, 16), 8);
  const auto proj = project_jump_pair(full, m);
  for (double eps : {0.0, 0.5, 1.0, 2.0})
    CHECK(delta_np(proj.p, proj.q, eps, Direction::forward).value <=
          delta_np(full.p, full.q, eps, Direction::forward).value + 1e-14);
}

TEST_CASE("hybrid characteristic functions") {
  const auto spec = four_letter(0.5);
  const auto m = hybrid_setup(spec);
  std::vector<CfPoint> grid{{std::vector<double>(4, 0.0), std::vector<double>(4, 0.0)},
                            {{0.4, -0.4, 0.0, 0.0}, std::vector<double>(4, 0.0)}};
  const auto t = hybrid_cf(m, channel_from_intensities(spec, 1000), 500, grid);
  CHECK(std::abs(t.finite_null[0] - 1.0) < 1e-12);
  CHECK(std::abs(t.limit_null[0] - 1.0) < 1e-15);
  CHECK(std::abs(t.limit_alt[0] - 1.0) < 1e-15);
  CHECK(std::abs(t.limit_null[1].imag()) < 1e-15);
  CHECK(t.limit_null[1].real() > 0.0);
  CHECK(t.limit_null[1].real() < 1.0);
  const auto pts = default_cf_grid(m);
  CHECK(pts.size() == 25);
  const auto t100 = hybrid_cf(m, channel_from_intensities(spec, 100), 50, pts);
  const auto t1000 = hybrid_cf(m, channel_from_intensities(spec, 1000), 500, pts);
  CHECK(t1000.sup_null < t100.sup_null);
}

TEST_CASE("hybrid Monte Carlo") {
  auto spec = four_letter(0.5);
  const auto ch = channel_from_intensities(spec, 2000);
  const auto a = hybrid_mc_sample(ch, 1000, 99, 20000);
  const auto b = hybrid_mc_sample(ch, 1000, 99, 20000);
  CHECK(a.front().gauss == b.front().gauss);
  CHECK(a.back().jump == b.back().jump);
  double m0 = 0.0, v0 = 0.0, v1 = 0.0;
  for (const auto& s : a) {
    m0 += s.gauss[0];
    v0 += s.gauss[0] * s.gauss[0];
    v1 += s.gauss[1] * s.gauss[1];
  }
  m0 /= 20000.0;
  v0 /= 20000.0;
  v1 /= 20000.0;
  const auto model = hybrid_setup(spec);
  CHECK(std::abs(m0) < 0.02);
  CHECK(v0 == doctest::Approx(model.Sigma[0][0]).epsilon(0.05));
  CHECK(v1 == doctest::Approx(model.Sigma[1][1]).epsilon(0.05));

  spec.split0 = 1.0;
  spec.split1 = 0.0;
  spec.alpha0 = {0, 0, 0, 0};
  spec.alpha1 = {0, 0, 0, 0};
  for (const auto& s : hybrid_mc_sample(channel_from_intensities(spec, 100), 50, 1, 200)) {
    CHECK(s.gauss[0] == doctest::Approx(0.0).scale(1e-12));
    CHECK(s.gauss[1] == doctest::Approx(0.0).scale(1e-12));
  }
}

TEST_CASE("hybrid delta gap") {
  const auto rows = hybrid_delta_gap(four_letter(0.5), 1.0, {8, 16});
  for (const auto& r : rows) {
    CHECK(r.gap <= r.bound);
    CHECK(r.delta_full >= r.delta_projected - 1e-14);
    CHECK(r.common_factor_gap < 1e-12);
  }
  auto det = four_letter(0.5);
  det.alpha0 = {0, 0, 0, 0};
  det.alpha1 = {0, 0, 0, 0};
  for (const auto& r : hybrid_delta_gap(det, 1.0, {8, 16})) CHECK(r.gap == doctest::Approx(0.0).scale(1e-14));
}
