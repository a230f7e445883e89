#include "critshuffle/rr_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "critshuffle/special_functions.hpp"

namespace critshuffle {

RRConfig rr_config(std::int64_t n, Calibration calibration, std::int64_t k) {
  if (n < 1) throw std::invalid_argument("rr_config: n must be >= 1");
  if (k < 0 || k >= n) throw std::invalid_argument("rr_config: k must lie in {0, ..., n-1}");
  RRConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.pi_n = static_cast<double>(k) / static_cast<double>(n);
  const double nd = static_cast<double>(n);
  if (const auto* e = std::get_if<ExplicitEps0>(&calibration)) {
    if (!(e->eps0 > 0.0) || !std::isfinite(e->eps0)) throw std::invalid_argument("rr_config: eps0 must be > 0");
    cfg.eps0 = e->eps0;
    cfg.exp_eps0 = std::exp(e->eps0);
    const double em = std::exp(-e->eps0);
    cfg.delta_n = em / (1.0 + em);
  } else {
    const double c = std::get<CanonicalC>(calibration).c;
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("rr_config: c must be > 0");
    const double c2n = c * c * nd;
    if (!(c2n > 1.0)) throw std::invalid_argument("rr_config: canonical calibration needs c^2 n > 1 so that eps0 > 0");
    cfg.exp_eps0 = c2n;
    cfg.eps0 = std::log(c2n);
    cfg.delta_n = 1.0 / (1.0 + c2n);
  }
  cfg.a_n = cfg.exp_eps0 / nd;
  return cfg;
}

IntExperiment canonical_pair(const RRConfig& cfg) {
  if (cfg.k != 0) throw std::invalid_argument("canonical_pair: requires k = 0");
  const double d = cfg.delta_n;
  IntDist p = make_binomial(cfg.n, d);
  IntDist q = convolve(make_binomial(cfg.n - 1, d), make_bernoulli(1.0 - d));
  return {std::move(p), std::move(q)};
}

IntExperiment composition_pair(const RRConfig& cfg) {
  const double d = cfg.delta_n;
  const std::int64_t n = cfg.n;
  const std::int64_t k = cfg.k;
  IntDist p = convolve(make_binomial(n - k, d), affine_map(make_binomial(k, d), -1, 0));
  IntDist q = affine_map(convolve(make_binomial(n - k - 1, d), affine_map(make_binomial(k + 1, d), -1, 0)), 1, 1);
  return {std::move(p), std::move(q)};
}

double likelihood_ratio_canonical(const RRConfig& cfg, std::int64_t m) {
  if (cfg.k != 0) throw std::invalid_argument("likelihood_ratio_canonical: requires k = 0");
  if (m < 0 || m > cfg.n) throw std::invalid_argument("likelihood_ratio_canonical: m outside {0, ..., n}");
  const double inv = 1.0 / cfg.exp_eps0;
  return inv + (cfg.exp_eps0 - inv) * static_cast<double>(m) / static_cast<double>(cfg.n);
}

ScoredLaw loglr_law(const IntExperiment& pair, Hypothesis hypothesis) {
  const IntDist& p = pair.p;
  const IntDist& q = pair.q;
  const std::int64_t lo = std::min(p.min_support(), q.min_support());
  const std::int64_t hi = std::max(p.max_support(), q.max_support());
  ScoredLaw law;
  std::vector<ScoredAtom> raw;
  for (std::int64_t m = lo; m <= hi; ++m) {
    const double pm = p.pmf(m);
    const double qm = q.pmf(m);
    const double w = hypothesis == Hypothesis::null ? pm : qm;
    if (pm < kUnderflowThreshold || qm < kUnderflowThreshold) {
      law.defect += w;
      continue;
    }
    raw.push_back({std::log(qm) - std::log(pm), w});
  }
  std::sort(raw.begin(), raw.end(), [](const ScoredAtom& a, const ScoredAtom& b) { return a.value < b.value; });
  for (const auto& a : raw) {
    if (!law.atoms.empty()) {
      auto& last = law.atoms.back();
      const double scale = std::max(std::abs(last.value), std::abs(a.value));
      if (a.value - last.value <= 1e-12 * scale) {
        // keep the probability-weighted value so merging is order independent
        const double tot = last.prob + a.prob;
        if (tot > 0.0) last.value = (last.value * last.prob + a.value * a.prob) / tot;
        last.prob = tot;
        continue;
      }
    }
    law.atoms.push_back(a);
  }
  return law;
}

ScoredLaw loglr_law(const RRConfig& cfg, Hypothesis hypothesis) {
  ScoredLaw law = loglr_law(composition_pair(cfg), hypothesis);
  const double d = cfg.delta_n;
  law.context.v_n = static_cast<double>(cfg.n) * d * (1.0 - d);
  law.context.Delta_n = 1.0 - 2.0 * d;
  law.context.h_n = law.context.Delta_n / std::sqrt(law.context.v_n);
  return law;
}

double ks_to_normal(const ScoredLaw& law, double center, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("ks_to_normal: scale must be > 0");
  double cum = 0.0;
  double ks = 0.0;
  for (const auto& a : law.atoms) {
    const double phi = std_normal_cdf((a.value - center) / scale);
    ks = std::max(ks, std::abs(cum - phi));
    cum += a.prob;
    ks = std::max(ks, std::abs(cum - phi));
  }
  return ks;
}

}  // namespace critshuffle
