#include "critshuffle/regime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "critshuffle/limit_experiment.hpp"
#include "critshuffle/privacy_curve.hpp"
#include "critshuffle/rate_sweep.hpp"
#include "critshuffle/rr_experiment.hpp"

namespace critshuffle {

namespace {

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || !std::isfinite(v))
    throw std::invalid_argument(std::string("parse_scaling: bad ") + what + " '" + s + "'");
  return v;
}

void check_grid(const std::vector<std::int64_t>& n_grid, const char* who) {
  if (n_grid.empty()) throw std::invalid_argument(std::string(who) + ": empty n grid");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw std::invalid_argument(std::string(who) + ": n must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument(std::string(who) + ": n grid must be increasing");
  }
}

RRConfig config_for(const Scaling& s, std::int64_t n, std::size_t index, std::int64_t k) {
  if (const auto* can = std::get_if<CanonicalScaling>(&s)) return rr_config(n, CanonicalC{can->c}, k);
  return rr_config(n, ExplicitEps0{eps0_at(s, n, index)}, k);
}

}  // namespace

Scaling parse_scaling(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("parse_scaling: expected kind:value, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "power") {
    const double a = parse_double(rest, "power");
    if (!(a > 0.0)) throw std::invalid_argument("parse_scaling: power must be > 0");
    return PowerScaling{a};
  }
  if (kind == "canonical") {
    const double c = parse_double(rest, "canonical c");
    if (!(c > 0.0)) throw std::invalid_argument("parse_scaling: c must be > 0");
    return CanonicalScaling{c};
  }
  if (kind == "explicit") {
    ExplicitScaling e;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const double v = parse_double(item, "explicit value");
      if (!(v > 1.0)) throw std::invalid_argument("parse_scaling: explicit e^eps0 values must be > 1");
      e.exp_eps0.push_back(v);
    }
    if (e.exp_eps0.empty()) throw std::invalid_argument("parse_scaling: empty explicit sequence");
    return e;
  }
  throw std::invalid_argument("parse_scaling: unknown kind '" + kind + "'");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
    case Regime::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

double eps0_at(const Scaling& s, std::int64_t n, std::size_t index) {
  const double nd = static_cast<double>(n);
  if (const auto* p = std::get_if<PowerScaling>(&s)) return p->alpha * std::log(nd);
  if (const auto* c = std::get_if<CanonicalScaling>(&s)) return std::log(c->c * c->c * nd);
  const auto& e = std::get<ExplicitScaling>(s);
  if (index >= e.exp_eps0.size()) throw std::invalid_argument("eps0_at: explicit sequence shorter than the n grid");
  return std::log(e.exp_eps0[index]);
}

RegimeVerdict classify_regime(const Scaling& scaling, const std::vector<std::int64_t>& n_grid) {
  check_grid(n_grid, "classify_regime");
  RegimeVerdict v;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double nd = static_cast<double>(n_grid[i]);
    v.a_n_trace.push_back(std::exp(eps0_at(scaling, n_grid[i], i) - std::log(nd)));
  }
  if (const auto* p = std::get_if<PowerScaling>(&scaling)) {
    v.regime = p->alpha < 1.0 ? Regime::subcritical : p->alpha > 1.0 ? Regime::supercritical : Regime::critical;
    if (v.regime == Regime::critical) v.c = 1.0;
    return v;
  }
  if (const auto* c = std::get_if<CanonicalScaling>(&scaling)) {
    v.regime = Regime::critical;
    v.c = c->c;
    return v;
  }
  // Explicit sequence: the trend of log a_n against log n decides; a constant
  // factor on e^{eps0} only moves the intercept.
  const auto& tr = v.a_n_trace;
  if (tr.size() < 3) return v;
  std::vector<double> xs;
  for (auto n : n_grid) xs.push_back(static_cast<double>(n));
  const double slope = loglog_slope(xs, tr);
  const bool nonincreasing = std::is_sorted(tr.rbegin(), tr.rend());
  const bool nondecreasing = std::is_sorted(tr.begin(), tr.end());
  constexpr double kFlat = 0.05;
  if (slope < -kFlat && nonincreasing) {
    v.regime = Regime::subcritical;
  } else if (slope > kFlat && nondecreasing) {
    v.regime = Regime::supercritical;
  } else if (std::abs(slope) <= kFlat) {
    const auto half = tr.begin() + static_cast<std::ptrdiff_t>(tr.size() / 2);
    const auto [lo, hi] = std::minmax_element(half, tr.end());
    if (*hi <= 1.1 * *lo) {
      v.regime = Regime::critical;
      v.c = std::sqrt(tr.back());
    }
  }
  return v;
}

std::int64_t apply_k_rule(KRule rule, std::int64_t n) { return rule == KRule::zero ? 0 : n / 2; }

SupercriticalTable supercritical_diagnostic(const Scaling& scaling, KRule rule, const std::vector<std::int64_t>& n_grid) {
  const auto verdict = classify_regime(scaling, n_grid);
  if (verdict.regime != Regime::supercritical)
    throw std::invalid_argument("supercritical_diagnostic: scaling is " + to_string(verdict.regime));
  SupercriticalTable t;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const std::int64_t n = n_grid[i];
    const auto cfg = config_for(scaling, n, i, apply_k_rule(rule, n));
    const auto pair = composition_pair(cfg);
    SupercriticalRow r;
    r.n = n;
    r.k = cfg.k;
    r.eps0 = cfg.eps0;
    r.tv = tv_distance(pair.p, pair.q);
    r.p_event = pair.p.pmf(0);
    r.q_event = pair.q.pmf(0);
    r.lr_at_event = 1.0 / cfg.exp_eps0;
    if (!t.rows.empty() && r.tv.lower < t.rows.back().tv.lower) t.monotone = false;
    t.rows.push_back(r);
  }
  return t;
}

std::vector<SubcriticalRow> subcritical_gaussian_check(double alpha, KRule rule, const std::vector<std::int64_t>& n_grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("subcritical_gaussian_check: alpha must lie in (0, 1)");
  check_grid(n_grid, "subcritical_gaussian_check");
  std::vector<SubcriticalRow> out;
  const Scaling s = PowerScaling{alpha};
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const auto cfg = config_for(s, n_grid[i], i, apply_k_rule(rule, n_grid[i]));
    const auto null_law = loglr_law(cfg, Hypothesis::null);
    const auto alt_law = loglr_law(cfg, Hypothesis::alt);
    const double h = null_law.context.h_n;
    SubcriticalRow r;
    r.n = n_grid[i];
    r.h_n = h;
    r.ks_null = ks_to_normal(null_law, -0.5 * h * h, h);
    r.ks_alt = ks_to_normal(alt_law, 0.5 * h * h, h);
    r.defect = std::max(null_law.defect, alt_law.defect);
    out.push_back(r);
  }
  return out;
}

std::vector<EdgeRow> gaussian_edge_compare(const std::vector<double>& c_grid, const std::vector<double>& eps_grid) {
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    if (!(c_grid[i] > 0.0 && c_grid[i] <= 1.0)) throw std::invalid_argument("gaussian_edge_compare: c must lie in (0, 1]");
    if (i > 0 && c_grid[i] >= c_grid[i - 1]) throw std::invalid_argument("gaussian_edge_compare: c grid must be decreasing");
  }
  std::vector<EdgeRow> out;
  for (double c : c_grid) {
    const auto sk = skellam_shift_pair(make_limit_params(c, 0.5));
    for (double eps : eps_grid) {
      EdgeRow r;
      r.c = c;
      r.eps = eps;
      r.delta_poisson = poisson_shift_delta_closed(1.0 / (c * c), eps);
      r.delta_gauss = gdp_delta(c, eps);
      r.gap = std::abs(r.delta_poisson - r.delta_gauss);
      r.delta_skellam = delta_np(sk.p, sk.q, eps, Direction::forward).value;
      r.gap_skellam = std::abs(r.delta_skellam - r.delta_gauss);
      out.push_back(r);
    }
  }
  return out;
}

std::vector<HiddenCountRow> hidden_count_diagnostic(double c, const std::vector<std::int64_t>& n_grid) {
  check_grid(n_grid, "hidden_count_diagnostic");
  std::vector<HiddenCountRow> out;
  for (auto n : n_grid) {
    const auto cfg = rr_config(n, CanonicalC{c}, 0);
    const double nd = static_cast<double>(n);
    HiddenCountRow r;
    r.n = n;
    r.clone_mean = (nd - 1.0) / cfg.exp_eps0;
    r.clone_limit = 1.0 / (c * c);
    r.blanket_mean = 2.0 * nd * cfg.delta_n;
    r.blanket_limit = 2.0 / (c * c);
    out.push_back(r);
  }
  return out;
}

NoncommutingTable noncommuting_demo(double c, const std::vector<std::int64_t>& n_grid, const std::vector<double>& eps_grid) {
  check_grid(n_grid, "noncommuting_demo");
  NoncommutingTable t;
  t.n_grid = n_grid;
  t.eps_grid = eps_grid;
  const double lambda = 1.0 / (c * c);
  t.floor = std::exp(-lambda);
  const auto lim = poisson_shift_pair(lambda);
  for (double eps : eps_grid) t.limit_delta_two.push_back(delta_np(lim.p, lim.q, eps, Direction::two_sided).value);
  for (auto n : n_grid) {
    const auto pair = canonical_pair(rr_config(n, CanonicalC{c}, 0));
    const double nd = static_cast<double>(n);
    const double comp = 2.0 / (c * c * nd) + 2.0 / (c * c * c * c * nd);
    std::vector<double> row, stab;
    for (double eps : eps_grid) {
      row.push_back(delta_np(pair.p, pair.q, eps, Direction::two_sided).value);
      stab.push_back((1.0 + std::exp(eps)) * comp);
    }
    t.delta_two.push_back(std::move(row));
    t.stability.push_back(std::move(stab));
  }
  return t;
}

}  // namespace critshuffle
