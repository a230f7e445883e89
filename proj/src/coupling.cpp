#include "critshuffle/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "critshuffle/special_functions.hpp"

namespace critshuffle {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kSamplerTail = 1e-18;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double three_sigma(double bound, std::int64_t n) {
  return 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(n));
}

void check_samples(std::int64_t n_samples) {
  if (n_samples < 1) throw std::invalid_argument("coupling: n_samples must be >= 1");
}

// all allocations of s items to the categories of cond, with their
// multinomial probabilities
void for_each_allocation(std::int64_t s, const std::vector<double>& cond,
                         const std::function<void(const std::vector<std::int64_t>&, double)>& f) {
  std::vector<std::int64_t> x(cond.size(), 0);
  const double log_sfact = std::lgamma(static_cast<double>(s) + 1.0);
  std::function<void(std::size_t, std::int64_t, double)> rec = [&](std::size_t i, std::int64_t left, double logw) {
    if (i + 1 == cond.size()) {
      x[i] = left;
      const double lw = logw - std::lgamma(static_cast<double>(left) + 1.0) +
                        (left > 0 ? static_cast<double>(left) * std::log(cond[i]) : 0.0);
      f(x, std::exp(log_sfact + lw));
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      x[i] = v;
      if (v > 0 && cond[i] == 0.0) break;
      rec(i + 1, left - v, logw - std::lgamma(static_cast<double>(v) + 1.0) +
                               (v > 0 ? static_cast<double>(v) * std::log(cond[i]) : 0.0));
    }
  };
  rec(0, s, 0.0);
}

std::int64_t pick(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return it - cdf.begin();
}

}  // namespace

std::uint64_t SeededStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double SeededStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64((index + 1) * kGolden));
}

InversionSampler::InversionSampler(const IntDist& dist) : offset_(dist.offset()) {
  double c = 0.0;
  cdf_.reserve(dist.size());
  for (double v : dist.mass()) {
    c += v;
    cdf_.push_back(c);
  }
}

std::int64_t InversionSampler::operator()(SeededStream& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;  // u beyond the enumerated mass; the tail is below 2^-53
  return offset_ + static_cast<std::int64_t>(it - cdf_.begin());
}

double binom_poisson_q(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("binom_poisson_q: p must lie in (0,1)");
  if (p < 0.1) {
    // 1 - (1-p)e^p = sum_{k>=2} (k-1) p^k / k!
    double term = p;  // p^k / k! at k = 1
    double s = 0.0;
    for (int k = 2; k < 40; ++k) {
      term *= p / k;
      s += (k - 1) * term;
      if ((k - 1) * term < 1e-18 * s) break;
    }
    return s;
  }
  return 1.0 - (1.0 - p) * std::exp(p);
}

namespace {

struct BinomPoissonRun {
  std::vector<std::int64_t> s;
  std::vector<std::int64_t> n;
  std::vector<BinomPoissonTrace> trace;
};

BinomPoissonRun run_binom_poisson(std::int64_t m, double p, std::uint64_t seed, std::int64_t n_samples, bool keep_trace) {
  if (m < 1) throw std::invalid_argument("couple_binom_poisson: m must be >= 1");
  const double q = binom_poisson_q(p);
  check_samples(n_samples);
  const InversionSampler pois(make_poisson(p, kSamplerTail));
  SeededStream rng(seed);
  BinomPoissonRun run;
  run.s.reserve(static_cast<std::size_t>(n_samples));
  run.n.reserve(static_cast<std::size_t>(n_samples));
  for (std::int64_t t = 0; t < n_samples; ++t) {
    std::int64_t s = 0;
    std::int64_t n = 0;
    bool multi = false;
    bool spurious = false;
    for (std::int64_t i = 0; i < m; ++i) {
      const std::int64_t ni = pois(rng);
      const double u = rng.uniform();  // drawn even when unused
      const bool xi = ni >= 1 || u < q;
      s += xi ? 1 : 0;
      n += ni;
      multi = multi || ni >= 2;
      spurious = spurious || (ni == 0 && xi);
    }
    run.s.push_back(s);
    run.n.push_back(n);
    if (keep_trace) run.trace.push_back({s, n, multi, spurious});
  }
  return run;
}

}  // namespace

CouplingReport couple_binom_poisson(std::int64_t m, double p, std::uint64_t seed, std::int64_t n_samples) {
  const auto run = run_binom_poisson(m, p, seed, n_samples, false);
  CouplingReport r;
  r.n_samples = n_samples;
  std::int64_t miss = 0;
  for (std::size_t i = 0; i < run.s.size(); ++i) miss += run.s[i] != run.n[i] ? 1 : 0;
  r.mismatch_freq = static_cast<double>(miss) / static_cast<double>(n_samples);
  r.bound = static_cast<double>(m) * p * -std::expm1(-p);
  r.three_sigma = three_sigma(std::min(r.bound, 1.0), n_samples);
  r.ks_first = discrete_ks(run.s, make_binomial(m, p));
  r.ks_second = discrete_ks(run.n, make_poisson(static_cast<double>(m) * p, kSamplerTail));
  return r;
}

std::vector<BinomPoissonTrace> trace_binom_poisson(std::int64_t m, double p, std::uint64_t seed, std::int64_t n_samples) {
  return run_binom_poisson(m, p, seed, n_samples, true).trace;
}

CouplingReport couple_poisson_poisson(double lambda, double lambda_prime, std::uint64_t seed, std::int64_t n_samples) {
  if (!(lambda >= 0.0) || !(lambda_prime >= 0.0)) throw std::invalid_argument("couple_poisson_poisson: rates must be >= 0");
  check_samples(n_samples);
  const double lo = std::min(lambda, lambda_prime);
  const double gap = std::abs(lambda_prime - lambda);
  const InversionSampler base(make_poisson(lo, kSamplerTail));
  const InversionSampler extra(make_poisson(gap, kSamplerTail));
  SeededStream rng(seed);
  std::vector<std::int64_t> first;
  std::vector<std::int64_t> second;
  first.reserve(static_cast<std::size_t>(n_samples));
  second.reserve(static_cast<std::size_t>(n_samples));
  std::int64_t miss = 0;
  for (std::int64_t t = 0; t < n_samples; ++t) {
    const std::int64_t b = base(rng);
    const std::int64_t r = extra(rng);
    miss += r != 0 ? 1 : 0;
    if (lambda_prime >= lambda) {
      first.push_back(b);
      second.push_back(b + r);
    } else {
      first.push_back(b + r);
      second.push_back(b);
    }
  }
  CouplingReport rep;
  rep.n_samples = n_samples;
  rep.mismatch_freq = static_cast<double>(miss) / static_cast<double>(n_samples);
  rep.bound = -std::expm1(-gap);
  rep.three_sigma = three_sigma(rep.bound, n_samples);
  rep.ks_first = discrete_ks(first, make_poisson(lambda, kSamplerTail));
  rep.ks_second = discrete_ks(second, make_poisson(lambda_prime, kSamplerTail));
  return rep;
}

namespace {

struct RareSplit {
  double p_b;
  std::vector<double> cond;
  std::vector<double> cond_cdf;
};

RareSplit rare_split(const std::vector<double>& probs, const std::vector<std::size_t>& rare_set) {
  if (rare_set.empty()) throw std::invalid_argument("couple_multinomial_poisson: rare set must be nonempty");
  double total = 0.0;
  for (double v : probs) {
    if (!(v >= 0.0)) throw std::invalid_argument("couple_multinomial_poisson: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("couple_multinomial_poisson: probs must sum to 1");
  RareSplit rs{0.0, {}, {}};
  std::vector<bool> seen(probs.size(), false);
  for (auto b : rare_set) {
    if (b >= probs.size()) throw std::invalid_argument("couple_multinomial_poisson: rare index out of range");
    if (seen[b]) throw std::invalid_argument("couple_multinomial_poisson: repeated rare index");
    seen[b] = true;
    rs.p_b += probs[b];
  }
  if (!(rs.p_b > 0.0 && rs.p_b < 1.0)) throw std::invalid_argument("couple_multinomial_poisson: p_B must lie in (0,1)");
  double c = 0.0;
  for (auto b : rare_set) {
    rs.cond.push_back(probs[b] / rs.p_b);
    c += rs.cond.back();
    rs.cond_cdf.push_back(c);
  }
  rs.cond_cdf.back() = 1.0;
  return rs;
}

}  // namespace

CouplingReport couple_multinomial_poisson(std::int64_t m, const std::vector<double>& probs,
                                          const std::vector<std::size_t>& rare_set, std::uint64_t seed,
                                          std::int64_t n_samples) {
  const RareSplit rs = rare_split(probs, rare_set);
  const auto totals = run_binom_poisson(m, rs.p_b, seed, n_samples, false);
  SeededStream alloc_rng(split_seed(seed, 1));
  const std::size_t nb = rare_set.size();
  std::vector<std::vector<std::int64_t>> xs(nb), us(nb);
  std::vector<std::int64_t> x(nb), u(nb);
  std::int64_t miss = 0;
  for (std::size_t t = 0; t < totals.s.size(); ++t) {
    const std::int64_t s = totals.s[t];
    const std::int64_t n = totals.n[t];
    std::fill(x.begin(), x.end(), 0);
    std::fill(u.begin(), u.end(), 0);
    if (nb == 1) {
      x[0] = s;
      u[0] = n;
    } else if (s == n) {
      for (std::int64_t i = 0; i < s; ++i) ++x[static_cast<std::size_t>(pick(rs.cond_cdf, alloc_rng.uniform()))];
      u = x;
    } else {
      for (std::int64_t i = 0; i < s; ++i) ++x[static_cast<std::size_t>(pick(rs.cond_cdf, alloc_rng.uniform()))];
      for (std::int64_t i = 0; i < n; ++i) ++u[static_cast<std::size_t>(pick(rs.cond_cdf, alloc_rng.uniform()))];
    }
    miss += x != u ? 1 : 0;
    for (std::size_t b = 0; b < nb; ++b) {
      xs[b].push_back(x[b]);
      us[b].push_back(u[b]);
    }
  }
  CouplingReport r;
  r.n_samples = n_samples;
  r.mismatch_freq = static_cast<double>(miss) / static_cast<double>(n_samples);
  r.bound = static_cast<double>(m) * rs.p_b * -std::expm1(-rs.p_b);
  r.three_sigma = three_sigma(std::min(r.bound, 1.0), n_samples);
  for (std::size_t b = 0; b < nb; ++b) {
    const double pb = probs[rare_set[b]];
    r.ks_first = std::max(r.ks_first, discrete_ks(xs[b], make_binomial(m, pb)));
    r.ks_second = std::max(r.ks_second, discrete_ks(us[b], make_poisson(static_cast<double>(m) * pb, kSamplerTail)));
  }
  return r;
}

LatticeDist binom_poisson_joint_law(std::int64_t m, double p) {
  if (m < 1) throw std::invalid_argument("binom_poisson_joint_law: m must be >= 1");
  const double q = binom_poisson_q(p);
  const IntDist pois = make_poisson(p, kSamplerTail);
  LatticeDist::Map one;
  for (std::int64_t j = 1; j <= pois.max_support(); ++j) one[{Rational(1), Rational(j)}] += pois.pmf(j);
  one[{Rational(1), Rational(0)}] += pois.pmf(0) * q;
  one[{Rational(0), Rational(0)}] += pois.pmf(0) * (1.0 - q);
  const LatticeDist step(2, std::move(one), pois.tail_mass());
  LatticeDist law = step;
  for (std::int64_t i = 1; i < m; ++i) law = convolve(law, step);
  return law;
}

LatticeDist poisson_poisson_joint_law(double lambda, double lambda_prime) {
  if (!(lambda >= 0.0) || !(lambda_prime >= 0.0)) throw std::invalid_argument("poisson_poisson_joint_law: rates must be >= 0");
  const IntDist base = make_poisson(std::min(lambda, lambda_prime), kSamplerTail);
  const IntDist extra = make_poisson(std::abs(lambda_prime - lambda), kSamplerTail);
  LatticeDist::Map out;
  for (std::int64_t j = base.min_support(); j <= base.max_support(); ++j) {
    for (std::int64_t r = extra.min_support(); r <= extra.max_support(); ++r) {
      const double w = base.pmf(j) * extra.pmf(r);
      if (w == 0.0) continue;
      if (lambda_prime >= lambda)
        out[{Rational(j), Rational(j + r)}] += w;
      else
        out[{Rational(j + r), Rational(j)}] += w;
    }
  }
  return LatticeDist(2, std::move(out), base.tail_mass() + extra.tail_mass());
}

LatticeDist multinomial_poisson_joint_law(std::int64_t m, const std::vector<double>& probs,
                                          const std::vector<std::size_t>& rare_set) {
  const RareSplit rs = rare_split(probs, rare_set);
  const LatticeDist totals = binom_poisson_joint_law(m, rs.p_b);
  const std::size_t nb = rare_set.size();
  LatticeDist::Map out;
  auto emit = [&](const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& u, double w) {
    LatticePoint pt;
    pt.reserve(2 * nb);
    for (auto v : x) pt.emplace_back(v);
    for (auto v : u) pt.emplace_back(v);
    out[std::move(pt)] += w;
  };
  for (const auto& [pt, w] : totals.points()) {
    const std::int64_t s = pt[0].num();
    const std::int64_t n = pt[1].num();
    if (s == n) {
      for_each_allocation(s, rs.cond, [&](const std::vector<std::int64_t>& x, double wx) { emit(x, x, w * wx); });
    } else {
      for_each_allocation(s, rs.cond, [&](const std::vector<std::int64_t>& x, double wx) {
        for_each_allocation(n, rs.cond, [&](const std::vector<std::int64_t>& u, double wu) { emit(x, u, w * wx * wu); });
      });
    }
  }
  return LatticeDist(2 * nb, std::move(out), totals.tail_mass());
}

double discrete_ks(const std::vector<std::int64_t>& samples, const IntDist& exact) {
  if (samples.empty()) throw std::invalid_argument("discrete_ks: no samples");
  std::vector<std::int64_t> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const std::int64_t lo = std::min(sorted.front(), exact.min_support());
  const std::int64_t hi = std::max(sorted.back(), exact.max_support());
  const double n = static_cast<double>(sorted.size());
  double cdf = 0.0;
  double ks = 0.0;
  std::size_t idx = 0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    cdf += exact.pmf(x);
    while (idx < sorted.size() && sorted[idx] <= x) ++idx;
    ks = std::max(ks, std::abs(static_cast<double>(idx) / n - cdf));
  }
  return ks;
}

}  // namespace critshuffle
