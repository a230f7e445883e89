#include "critshuffle/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace critshuffle {

PoissonBounds poisson_bounds(const RRConfig& cfg, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_bounds: lambda must be > 0");
  const double n = static_cast<double>(cfg.n);
  const double d = cfg.delta_n;
  const double one_minus_e = -std::expm1(-d);
  PoissonBounds b;
  b.delta_n = d;
  b.n_delta_sq = n * d * d;
  b.lambda_n_gap = std::abs(n * d - lambda);
  b.lambda_nm1_gap = std::abs((n - 1.0) * d - lambda);
  b.p_bound_sharp = n * d * one_minus_e + b.lambda_n_gap;
  b.p_bound = b.n_delta_sq + b.lambda_n_gap;
  b.q_bound_sharp = d + (n - 1.0) * d * one_minus_e + b.lambda_nm1_gap;
  b.q_bound = d + (n - 1.0) * d * d + b.lambda_nm1_gap;
  // c^2 = 1/lambda
  b.canonical_composite = 2.0 * lambda / n + 2.0 * lambda * lambda / n;
  b.canonical_p = 2.0 * lambda * lambda / n;
  return b;
}

SharpPoissonRate poisson_sharp_lower(double c, std::int64_t n) {
  if (!(c > 0.0)) throw std::invalid_argument("poisson_sharp_lower: c must be > 0");
  if (n < 1) throw std::invalid_argument("poisson_sharp_lower: n must be >= 1");
  const double nd = static_cast<double>(n);
  const double c2 = c * c;
  const double c4 = c2 * c2;
  const double e = std::exp(-1.0 / c2);
  SharpPoissonRate r;
  r.lower = e / (4.0 * c4 * nd);
  r.predicted_atom_gap = e / (2.0 * c4 * nd);
  r.upper = 2.0 / (c4 * nd);
  // 1/c^2 - n log(1 + u) with u = 1/(c^2 n), by its alternating series when u is small
  const double u = 1.0 / (c2 * nd);
  double excess;
  if (u < 0.1) {
    double term = u;
    double s = 0.0;
    for (int j = 2; j < 200; ++j) {
      term *= -u;
      const double add = -term / j;  // (-1)^j u^j / j
      s += add;
      if (std::abs(add) < 1e-18 * std::abs(s)) break;
    }
    excess = nd * s;
  } else {
    excess = 1.0 / c2 - nd * std::log1p(u);
  }
  r.exact_atom_gap = e * std::expm1(excess);
  return r;
}

std::complex<double> pgf_at_i(const IntDist& d) {
  // i^k cycles through 1, i, -1, -i
  double re = 0.0, im = 0.0;
  for (std::int64_t k = d.min_support(); k <= d.max_support(); ++k) {
    const double p = d.pmf(k);
    switch (((k % 4) + 4) % 4) {
      case 0: re += p; break;
      case 1: im += p; break;
      case 2: re -= p; break;
      default: im -= p; break;
    }
  }
  return {re, im};
}

SkellamBounds skellam_bounds(const RRConfig& cfg, const LimitParams& params) {
  const double n = static_cast<double>(cfg.n);
  const double k = static_cast<double>(cfg.k);
  const double d = cfg.delta_n;
  SkellamBounds b;
  b.n_delta_sq = n * d * d;
  b.lambda0_gap = std::abs((n - k) * d - params.lambda0);
  b.lambda1_gap = std::abs(k * d - params.lambda1);
  b.lambda0_gap_alt = std::abs((n - k - 1.0) * d - params.lambda0);
  b.lambda1_gap_alt = std::abs((k + 1.0) * d - params.lambda1);
  b.p_bound = b.n_delta_sq + b.lambda0_gap + b.lambda1_gap;
  b.q_bound = b.n_delta_sq + b.lambda0_gap_alt + b.lambda1_gap_alt;
  const double c2 = params.c * params.c;
  const double c4 = c2 * c2;
  b.canonical_composite = (2.0 * c2 + 3.0) / (c4 * n);

  const auto fin = composition_pair(cfg);
  const std::complex<double> i(0.0, 1.0);
  b.g_n_p = pgf_at_i(fin.p);
  b.g_n_q = pgf_at_i(fin.q);
  b.g_inf_p = std::exp(params.lambda0 * (i - 1.0) + params.lambda1 * (-i - 1.0));
  b.g_inf_q = i * b.g_inf_p;
  b.cf_lower_p = 0.5 * std::abs(b.g_n_p - b.g_inf_p);
  b.cf_lower_q = 0.5 * std::abs(b.g_n_q - b.g_inf_q);
  b.alpha_n = k - params.pi * n;
  b.predicted_n_cf_gap = std::exp(-1.0 / c2) * std::sqrt(1.0 / (c4 * c4) + 4.0 * b.alpha_n * b.alpha_n / c4);
  return b;
}

MultivariateBounds multivariate_bounds(const SparseChannel& channel, std::int64_t k, const IntensitySpec& spec) {
  spec.validate();
  const auto& cs = channel.spec;
  if (cs.mode != ChannelMode::single_dominant) throw std::invalid_argument("multivariate_bounds: needs a single-dominant channel");
  if (cs.y0 != spec.y0 || cs.y1 != spec.y1 || cs.alphabet.size() != spec.alphabet.size())
    throw std::invalid_argument("multivariate_bounds: channel and intensity spec disagree");
  const double n = static_cast<double>(channel.n);
  const double kk = static_cast<double>(k);
  MultivariateBounds b;
  b.p0n = 1.0 - channel.w0[cs.y0];
  b.p1n = 1.0 - channel.w1[cs.y1];
  auto poisson_part = [&](double m0, double m1) {
    return m0 * b.p0n * -std::expm1(-b.p0n) + m1 * b.p1n * -std::expm1(-b.p1n);
  };
  auto mismatch = [&](double m0, double m1) {
    double s = 0.0;
    for (std::size_t y = 0; y < spec.alphabet.size(); ++y) {
      if (y != spec.y0) s += std::abs(m0 * channel.w0[y] - (1.0 - spec.pi) * spec.alpha0[y]);
      if (y != spec.y1) s += std::abs(m1 * channel.w1[y] - spec.pi * spec.alpha1[y]);
    }
    return s;
  };
  b.poisson_terms_p = poisson_part(n - kk, kk);
  b.mismatch_p = mismatch(n - kk, kk);
  b.p_bound = b.poisson_terms_p + b.mismatch_p;
  b.poisson_terms_q = poisson_part(n - kk - 1.0, kk + 1.0);
  b.mismatch_q = mismatch(n - kk - 1.0, kk + 1.0);
  b.q_bound = b.poisson_terms_q + b.mismatch_q;
  return b;
}

double cint_constant(double p0, double p1, double pi, double Lambda0, double Lambda1) {
  if (!(p0 > 0.0 && p0 < 1.0) || !(p1 > 0.0 && p1 < 1.0)) throw std::invalid_argument("cint_constant: splits must lie in (0,1)");
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("cint_constant: pi must lie in (0,1)");
  if (!(Lambda0 >= 0.0) || !(Lambda1 >= 0.0)) throw std::invalid_argument("cint_constant: intensities must be >= 0");
  const double kappa = 0.25 * std::min(pi, 1.0 - pi);
  const double lam = Lambda0 + Lambda1;
  const double cb = std::sqrt(2.0 / (p0 * (1.0 - p0))) + std::sqrt(2.0 / (p1 * (1.0 - p1)));
  return cb * (2.0 * lam / std::sqrt(2.0 * kappa) + (2.0 * lam + 4.0 * lam * lam) / kappa);
}

}  // namespace critshuffle
