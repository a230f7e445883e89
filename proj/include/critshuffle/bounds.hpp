#pragma once

#include <complex>
#include <cstdint>

#include "critshuffle/limit_experiment.hpp"
#include "critshuffle/multivariate.hpp"
#include "critshuffle/rr_experiment.hpp"

namespace critshuffle {

struct PoissonBounds {
  double n_delta_sq = 0.0;      // n delta_n^2
  double lambda_n_gap = 0.0;    // |n delta_n - lambda|
  double lambda_nm1_gap = 0.0;  // |(n-1) delta_n - lambda|
  double delta_n = 0.0;
  double p_bound_sharp = 0.0;   // n delta (1 - e^{-delta}) + |lambda_n - lambda|
  double p_bound = 0.0;         // n delta^2 + |lambda_n - lambda|
  double q_bound_sharp = 0.0;   // delta + (n-1) delta (1 - e^{-delta}) + |lambda_{n-1} - lambda|
  double q_bound = 0.0;         // delta + (n-1) delta^2 + |lambda_{n-1} - lambda|
  double canonical_composite = 0.0;  // 2/(c^2 n) + 2/(c^4 n) with c^2 = 1/lambda
  double canonical_p = 0.0;          // 2/(c^4 n)
};

PoissonBounds poisson_bounds(const RRConfig& cfg, double lambda);

struct SharpPoissonRate {
  double lower = 0.0;              // e^{-1/c^2} / (4 c^4 n)
  double predicted_atom_gap = 0.0; // e^{-1/c^2} / (2 c^4 n)
  double exact_atom_gap = 0.0;     // (1 + 1/(c^2 n))^{-n} - e^{-1/c^2}
  double upper = 0.0;              // 2 / (c^4 n)
};

SharpPoissonRate poisson_sharp_lower(double c, std::int64_t n);

struct SkellamBounds {
  double n_delta_sq = 0.0;
  double lambda0_gap = 0.0;  // |(n-k) delta - lambda0|
  double lambda1_gap = 0.0;  // |k delta - lambda1|
  double lambda0_gap_alt = 0.0;  // |(n-k-1) delta - lambda0|
  double lambda1_gap_alt = 0.0;  // |(k+1) delta - lambda1|
  double p_bound = 0.0;
  double q_bound = 0.0;
  double canonical_composite = 0.0;  // (2c^2 + 3)/(c^4 n)
  std::complex<double> g_n_p;    // sum_d P_n(d) i^d
  std::complex<double> g_inf_p;  // closed form exp(lambda0 (i-1) + lambda1 (-i-1))
  std::complex<double> g_n_q;
  std::complex<double> g_inf_q;
  double cf_lower_p = 0.0;  // |G_n(i) - G_inf(i)| / 2 for the null laws
  double cf_lower_q = 0.0;
  double predicted_n_cf_gap = 0.0;  // |G_inf(i)| sqrt(1/c^8 + 4 alpha_n^2 / c^4)
  double alpha_n = 0.0;             // k - pi n
};

SkellamBounds skellam_bounds(const RRConfig& cfg, const LimitParams& params);

struct MultivariateBounds {
  double p0n = 0.0;
  double p1n = 0.0;
  double poisson_terms_p = 0.0;
  double mismatch_p = 0.0;
  double p_bound = 0.0;
  double poisson_terms_q = 0.0;
  double mismatch_q = 0.0;
  double q_bound = 0.0;
};

MultivariateBounds multivariate_bounds(const SparseChannel& channel, std::int64_t k, const IntensitySpec& spec);

double cint_constant(double p0, double p1, double pi, double Lambda0, double Lambda1);

// probability generating function of an IntDist at z = i
std::complex<double> pgf_at_i(const IntDist& d);

}  // namespace critshuffle
