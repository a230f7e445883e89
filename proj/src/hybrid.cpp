#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "critshuffle/bounds.hpp"
#include "critshuffle/coupling.hpp"
#include "critshuffle/multivariate.hpp"
#include "critshuffle/privacy_curve.hpp"

namespace critshuffle {

namespace {

LatticePoint unit(std::size_t d, std::size_t y) {
  LatticePoint e(d, Rational(0));
  e[y] = Rational(1);
  return e;
}

LatticePoint column(const std::vector<LatticePoint>& m, std::size_t y) {
  LatticePoint c;
  c.reserve(m.size());
  for (const auto& row : m) c.push_back(row[y]);
  return c;
}

LatticePoint sub(const LatticePoint& a, const LatticePoint& b) {
  LatticePoint c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

std::vector<double> apply_double(const std::vector<LatticePoint>& m, const std::vector<double>& x) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) out[i] += m[i][j].to_double() * x[j];
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LatticePoint apply(const std::vector<LatticePoint>& matrix, const LatticePoint& x) {
  LatticePoint out(matrix.size(), Rational(0));
  for (std::size_t i = 0; i < matrix.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j].num() != 0 && matrix[i][j].num() != 0) out[i] += matrix[i][j] * x[j];
  return out;
}

HybridModel hybrid_setup(const ChannelSpec& spec) {
  spec.validate();
  if (spec.mode != ChannelMode::two_dominant) throw std::invalid_argument("hybrid_setup: needs a two-dominant channel");
  const std::size_t d = spec.alphabet.size();
  HybridModel m;
  m.dim = d;
  m.pi = spec.pi;
  m.mu0.assign(d, 0.0);
  m.mu1.assign(d, 0.0);
  m.mu0[spec.pair0[0]] = spec.split0;
  m.mu0[spec.pair0[1]] = 1.0 - spec.split0;
  m.mu1[spec.pair1[0]] = spec.split1;
  m.mu1[spec.pair1[1]] = 1.0 - spec.split1;
  m.g0 = sub(unit(d, spec.pair0[0]), unit(d, spec.pair0[1]));
  m.g1 = sub(unit(d, spec.pair1[0]), unit(d, spec.pair1[1]));

  // Pi_G = B (B^T B)^{-1} B^T with B = [g0 g1]
  auto idot = [](const LatticePoint& a, const LatticePoint& b) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  const Rational a = idot(m.g0, m.g0);
  const Rational b = idot(m.g0, m.g1);
  const Rational c = idot(m.g1, m.g1);
  const Rational det = a * c - b * b;
  if (det.num() == 0) throw std::invalid_argument("hybrid_setup: g0 and g1 are linearly dependent");
  const Rational i00 = c / det, i01 = -b / det, i11 = a / det;
  m.Pi_G.assign(d, LatticePoint(d, Rational(0)));
  m.Pi_J.assign(d, LatticePoint(d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const Rational v = m.g0[i] * i00 * m.g0[j] + m.g0[i] * i01 * m.g1[j] + m.g1[i] * i01 * m.g0[j] + m.g1[i] * i11 * m.g1[j];
      m.Pi_G[i][j] = v;
      m.Pi_J[i][j] = Rational(i == j ? 1 : 0) - v;
    }
  }
  m.Sigma[0][0] = (1.0 - spec.pi) * spec.split0 * (1.0 - spec.split0);
  m.Sigma[1][1] = spec.pi * spec.split1 * (1.0 - spec.split1);
  m.m0 = column(m.Pi_J, spec.pair0[0]);
  m.m1 = column(m.Pi_J, spec.pair1[0]);
  if (m.m0 == m.m1) throw std::logic_error("hybrid_setup: projected dominant means coincide");
  m.Delta = sub(m.m1, m.m0);
  for (std::size_t y = 0; y < d; ++y) {
    const double w0 = (1.0 - spec.pi) * spec.rare_intensity(0, y);
    const double w1 = spec.pi * spec.rare_intensity(1, y);
    if (w0 > 0.0) m.levy.push_back({sub(column(m.Pi_J, y), m.m0), w0});
    if (w1 > 0.0) m.levy.push_back({sub(column(m.Pi_J, y), m.m1), w1});
  }
  return m;
}

LatticeExperiment project_jump_pair(const LatticeExperiment& pair, const HybridModel& model) {
  auto f = [&](const LatticePoint& x) { return critshuffle::apply(model.Pi_J, x); };
  return {pushforward(pair.p, model.dim, f), pushforward(pair.q, model.dim, f)};
}

LatticeExperiment projected_jump_limit(const ChannelSpec& spec, const HybridModel& model, double tail_eps) {
  const std::size_t d = model.dim;
  std::vector<LatticePoint> words;
  std::vector<std::size_t> word_of(d);
  for (std::size_t y = 0; y < d; ++y) {
    const LatticePoint w = column(model.Pi_J, y);
    std::size_t idx = 0;
    while (idx < words.size() && words[idx] != w) ++idx;
    if (idx == words.size()) words.push_back(w);
    word_of[y] = idx;
  }
  IntensitySpec js;
  for (std::size_t i = 0; i < words.size(); ++i) js.alphabet.push_back("w" + std::to_string(i));
  js.y0 = word_of[spec.pair0[0]];
  js.y1 = word_of[spec.pair1[0]];
  js.alpha0.assign(words.size(), 0.0);
  js.alpha1.assign(words.size(), 0.0);
  for (std::size_t y = 0; y < d; ++y) {
    js.alpha0[word_of[y]] += spec.rare_intensity(0, y);
    js.alpha1[word_of[y]] += spec.rare_intensity(1, y);
  }
  js.alpha0[js.y0] = 0.0;
  js.alpha1[js.y1] = 0.0;
  js.pi = spec.pi;
  const auto lim = compound_poisson_limit(js, tail_eps);
  auto embed = [&](const LatticePoint& h) {
    LatticePoint out(d, Rational(0));
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].num() == 0) continue;
      for (std::size_t j = 0; j < d; ++j) out[j] += h[i] * words[i][j];
    }
    return out;
  };
  return {pushforward(lim.p, d, embed), pushforward(lim.q, d, embed)};
}

std::vector<CfPoint> default_cf_grid(const HybridModel& model) {
  const std::size_t d = model.dim;
  std::vector<double> u_dir(d), raw(d);
  for (std::size_t i = 0; i < d; ++i) {
    u_dir[i] = 1.3 * model.g0[i].to_double() - 0.7 * model.g1[i].to_double();
    raw[i] = 1.1 * static_cast<double>(i + 1);
  }
  const auto v_dir = apply_double(model.Pi_J, raw);
  const double steps[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<CfPoint> grid;
  for (double s : steps) {
    for (double t : steps) {
      CfPoint pt{std::vector<double>(d), std::vector<double>(d)};
      for (std::size_t i = 0; i < d; ++i) {
        pt.u[i] = s * u_dir[i];
        pt.v[i] = t * v_dir[i];
      }
      grid.push_back(std::move(pt));
    }
  }
  return grid;
}

CfTable hybrid_cf(const HybridModel& model, const SparseChannel& channel, std::int64_t k, const std::vector<CfPoint>& grid) {
  const std::size_t d = model.dim;
  const std::int64_t n = channel.n;
  if (k < 0 || k >= n) throw std::invalid_argument("hybrid_cf: k must lie in {0, ..., n-1}");
  const double rn = std::sqrt(static_cast<double>(n));
  std::vector<double> g0(d), g1(d), dmu(d);
  for (std::size_t i = 0; i < d; ++i) {
    g0[i] = model.g0[i].to_double();
    g1[i] = model.g1[i].to_double();
    dmu[i] = model.mu1[i] - model.mu0[i];
  }
  const double m0 = static_cast<double>(n - k);
  const double m1 = static_cast<double>(k);
  CfTable t;
  for (const auto& pt : grid) {
    const auto ug = apply_double(model.Pi_G, pt.u);
    const auto vj = apply_double(model.Pi_J, pt.v);
    auto phi = [&](const std::vector<double>& w, const std::vector<double>& mu) {
      std::complex<double> s = 0.0;
      for (std::size_t y = 0; y < d; ++y) {
        if (w[y] == 0.0) continue;
        double arg = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          const double x = (i == y ? 1.0 : 0.0) - mu[i];
          arg += ug[i] * x / rn + vj[i] * x;
        }
        s += w[y] * std::polar(1.0, arg);
      }
      return s;
    };
    const auto f0 = phi(channel.w0, model.mu0);
    const auto f1 = phi(channel.w1, model.mu1);
    const auto fin_null = std::pow(f0, m0) * std::pow(f1, m1);
    const auto shift = std::polar(1.0, dot(ug, dmu) / rn + dot(vj, dmu));
    const auto fin_alt = std::pow(f0, m0 - 1.0) * std::pow(f1, m1 + 1.0) * shift;

    const double q = model.Sigma[0][0] * dot(ug, g0) * dot(ug, g0) + model.Sigma[1][1] * dot(ug, g1) * dot(ug, g1);
    std::complex<double> expo = -0.5 * q;
    for (const auto& atom : model.levy) {
      const double arg = dot(vj, to_doubles(atom.jump));
      expo += atom.weight * (std::polar(1.0, arg) - 1.0);
    }
    const auto lim_null = std::exp(expo);
    const auto lim_alt = lim_null * std::polar(1.0, dot(vj, to_doubles(model.Delta)));

    t.finite_null.push_back(fin_null);
    t.finite_alt.push_back(fin_alt);
    t.limit_null.push_back(lim_null);
    t.limit_alt.push_back(lim_alt);
    t.sup_null = std::max(t.sup_null, std::abs(fin_null - lim_null));
    t.sup_alt = std::max(t.sup_alt, std::abs(fin_alt - lim_alt));
  }
  return t;
}

std::vector<HybridSample> hybrid_mc_sample(const SparseChannel& channel, std::int64_t k, std::uint64_t seed,
                                           std::int64_t n_samples) {
  const auto& spec = channel.spec;
  if (spec.mode != ChannelMode::two_dominant) throw std::invalid_argument("hybrid_mc_sample: needs a two-dominant channel");
  const std::int64_t n = channel.n;
  if (k < 0 || k >= n) throw std::invalid_argument("hybrid_mc_sample: k must lie in {0, ..., n-1}");
  if (n_samples < 1) throw std::invalid_argument("hybrid_mc_sample: n_samples must be >= 1");
  const HybridModel model = hybrid_setup(spec);
  const std::size_t d = spec.alphabet.size();

  struct Row {
    std::int64_t m;
    std::vector<std::size_t> rare;
    std::vector<double> rare_cdf;
    InversionSampler rare_total{IntDist::point_mass(0)};
    std::array<std::size_t, 2> pair;
    double split;
    std::map<std::int64_t, InversionSampler> dominant;
  };
  std::array<Row, 2> rows;
  for (int b = 0; b < 2; ++b) {
    Row& r = rows[static_cast<std::size_t>(b)];
    const auto& w = b == 0 ? channel.w0 : channel.w1;
    r.m = b == 0 ? n - k : k;
    r.pair = b == 0 ? spec.pair0 : spec.pair1;
    r.split = b == 0 ? spec.split0 : spec.split1;
    double p_rare = 0.0;
    for (std::size_t y = 0; y < d; ++y)
      if (!spec.is_dominant(b, y) && w[y] > 0.0) {
        r.rare.push_back(y);
        p_rare += w[y];
      }
    double c = 0.0;
    for (auto y : r.rare) {
      c += w[y] / p_rare;
      r.rare_cdf.push_back(c);
    }
    if (!r.rare_cdf.empty()) r.rare_cdf.back() = 1.0;
    r.rare_total = InversionSampler(make_binomial(r.m, std::min(1.0, p_rare)));
  }

  const std::vector<double> g0 = to_doubles(model.g0);
  const std::vector<double> g1 = to_doubles(model.g1);
  const double gram00 = dot(g0, g0), gram01 = dot(g0, g1), gram11 = dot(g1, g1);
  const double gdet = gram00 * gram11 - gram01 * gram01;
  const double rn = std::sqrt(static_cast<double>(n));
  std::vector<double> centre(d);
  for (std::size_t i = 0; i < d; ++i)
    centre[i] = static_cast<double>(n - k) * model.mu0[i] + static_cast<double>(k) * model.mu1[i];
  LatticePoint jump_centre(d, Rational(0));
  for (std::size_t i = 0; i < d; ++i) jump_centre[i] = Rational(n - k) * model.m0[i] + Rational(k) * model.m1[i];

  SeededStream rng(seed);
  std::vector<HybridSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  std::vector<std::int64_t> counts(d);
  for (std::int64_t t = 0; t < n_samples; ++t) {
    std::fill(counts.begin(), counts.end(), 0);
    for (auto& r : rows) {
      if (r.m == 0) continue;
      const std::int64_t l = r.rare_total(rng);
      for (std::int64_t i = 0; i < l; ++i) {
        const double u = rng.uniform();
        auto it = std::upper_bound(r.rare_cdf.begin(), r.rare_cdf.end(), u);
        if (it == r.rare_cdf.end()) --it;
        ++counts[r.rare[static_cast<std::size_t>(it - r.rare_cdf.begin())]];
      }
      const std::int64_t left = r.m - l;
      auto found = r.dominant.find(left);
      if (found == r.dominant.end()) found = r.dominant.emplace(left, InversionSampler(make_binomial(left, r.split))).first;
      const std::int64_t x = found->second(rng);
      counts[r.pair[0]] += x;
      counts[r.pair[1]] += left - x;
    }
    std::vector<double> h(d);
    for (std::size_t i = 0; i < d; ++i) h[i] = static_cast<double>(counts[i]) - centre[i];
    const double s0 = dot(g0, h), s1 = dot(g1, h);
    HybridSample smp;
    smp.gauss = {(gram11 * s0 - gram01 * s1) / gdet / rn, (gram00 * s1 - gram01 * s0) / gdet / rn};
    smp.jump = sub(critshuffle::apply(model.Pi_J, integer_point(counts)), jump_centre);
    out.push_back(std::move(smp));
  }
  return out;
}

std::vector<HybridGapRow> hybrid_delta_gap(const ChannelSpec& spec, double eps, const std::vector<std::int64_t>& n_grid,
                                           int rare_cap) {
  const HybridModel model = hybrid_setup(spec);
  const bool interior = spec.pi > 0.0 && spec.pi < 1.0;
  const double cint = interior ? cint_constant(spec.split0, spec.split1, spec.pi, spec.total_rare_intensity(0),
                                               spec.total_rare_intensity(1))
                               : std::numeric_limits<double>::infinity();
  const auto lim = projected_jump_limit(spec, model);
  const IntDist factor = make_binomial(16, 0.5);
  const double common_gap =
      std::abs(delta_np(product(lim.p, factor), product(lim.q, factor), eps, Direction::forward).value -
               delta_np(lim.p, lim.q, eps, Direction::forward).value);

  std::vector<HybridGapRow> rows;
  for (auto n : n_grid) {
    const auto ch = channel_from_intensities(spec, n);
    const auto k = static_cast<std::int64_t>(std::floor(spec.pi * static_cast<double>(n)));
    const auto full = exact_histogram_pair(ch, std::min(k, n - 1), rare_cap);
    const auto proj = project_jump_pair(full, model);
    HybridGapRow r;
    r.n = n;
    r.k = std::min(k, n - 1);
    r.delta_full = delta_np(full.p, full.q, eps, Direction::forward).value;
    r.delta_projected = delta_np(proj.p, proj.q, eps, Direction::forward).value;
    r.gap = std::abs(r.delta_full - r.delta_projected);
    const double rn = std::sqrt(static_cast<double>(n));
    r.bound = cint * (1.0 + std::exp(eps)) / rn;
    r.empirical_constant = r.gap * rn / (1.0 + std::exp(eps));
    r.common_factor_gap = common_gap;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace critshuffle
