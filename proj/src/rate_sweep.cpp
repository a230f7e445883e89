#include "critshuffle/rate_sweep.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "critshuffle/bounds.hpp"
#include "critshuffle/privacy_curve.hpp"
#include "critshuffle/rr_experiment.hpp"

namespace critshuffle {

namespace {

template <class Dist>
RateRow row_impl(const SweepSpec<Dist>& spec, std::int64_t n, const std::vector<double>& eps_grid) {
  const auto fin = spec.finite(n);
  RateRow r;
  r.n = n;
  r.tv_exact = tv_distance(fin.p, spec.limit.p);
  r.tv_alt = tv_distance(fin.q, spec.limit.q);
  r.upper_bound = spec.upper ? spec.upper(n) : 0.0;
  r.lower_bound = spec.lower ? spec.lower(n) : 0.0;
  r.valid = spec.valid ? spec.valid(n) : true;
  const double comp = spec.composite ? spec.composite(n) : 0.0;
  for (double eps : eps_grid) {
    const double dn = delta_np(fin.p, fin.q, eps, Direction::forward).value;
    const double dl = delta_np(spec.limit.p, spec.limit.q, eps, Direction::forward).value;
    r.delta_gaps.push_back(std::abs(dn - dl));
    r.stability_bounds.push_back((1.0 + std::exp(eps)) * comp);
  }
  return r;
}

template <class Dist>
RateSweep sweep_impl(const SweepSpec<Dist>& spec, const std::vector<std::int64_t>& n_grid,
                     const std::vector<double>& eps_grid, int jobs) {
  if (n_grid.size() < 4) throw std::invalid_argument("rate_sweep: n_grid needs at least four points");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("rate_sweep: n_grid must be increasing");
  if (n_grid.front() < 1) throw std::invalid_argument("rate_sweep: n must be >= 1");
  RateSweep out;
  out.eps_grid = eps_grid;
  out.rows.resize(n_grid.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n_grid.size(); ++i) out.rows[i] = row_impl(spec, n_grid[i], eps_grid);
  } else {
    for (std::size_t start = 0; start < n_grid.size(); start += static_cast<std::size_t>(jobs)) {
      std::vector<std::future<RateRow>> batch;
      const std::size_t stop = std::min(n_grid.size(), start + static_cast<std::size_t>(jobs));
      for (std::size_t i = start; i < stop; ++i)
        batch.push_back(std::async(std::launch::async, [&, i] { return row_impl(spec, n_grid[i], eps_grid); }));
      for (std::size_t i = start; i < stop; ++i) out.rows[i] = batch[i - start].get();
    }
  }
  std::vector<double> xs, ys;
  bool positive = true;
  for (const auto& r : out.rows) {
    const double slack = r.tv_exact.upper - r.tv_exact.lower;
    if (slack > 0.01 * r.tv_exact.lower) out.slack_exceeded = true;
    if (r.n < 100) continue;
    if (!(r.tv_exact.lower > 0.0)) positive = false;
    xs.push_back(static_cast<double>(r.n));
    ys.push_back(r.tv_exact.lower);
  }
  if (positive && xs.size() >= 2 && !out.slack_exceeded) out.slope = loglog_slope(xs, ys);
  return out;
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<std::int64_t> geometric_grid(double from_exp, double to_exp, double step) {
  if (!(step > 0.0) || to_exp < from_exp) throw std::invalid_argument("geometric_grid: bad range");
  std::vector<std::int64_t> out;
  for (double e = from_exp; e <= to_exp + 1e-9; e += step) out.push_back(std::llround(std::pow(10.0, e)));
  return out;
}

IntSweepSpec poisson_sweep_spec(double c) {
  IntSweepSpec s;
  s.finite = [c](std::int64_t n) { return canonical_pair(rr_config(n, CanonicalC{c}, 0)); };
  s.limit = poisson_shift_pair(1.0 / (c * c));
  s.upper = [c](std::int64_t n) { return poisson_sharp_lower(c, n).upper; };
  s.lower = [c](std::int64_t n) { return poisson_sharp_lower(c, n).lower; };
  s.valid = [c](std::int64_t n) {
    const auto r = poisson_sharp_lower(c, n);
    return r.exact_atom_gap >= r.lower;
  };
  s.composite = [c](std::int64_t n) {
    const double nd = static_cast<double>(n);
    return 2.0 / (c * c * nd) + 2.0 / (c * c * c * c * nd);
  };
  return s;
}

IntSweepSpec skellam_sweep_spec(double c, double pi) {
  const LimitParams params = make_limit_params(c, pi);
  auto cfg_of = [c, pi](std::int64_t n) {
    const auto k = static_cast<std::int64_t>(std::floor(pi * static_cast<double>(n)));
    return rr_config(n, CanonicalC{c}, std::min(k, n - 1));
  };
  IntSweepSpec s;
  s.finite = [cfg_of](std::int64_t n) { return composition_pair(cfg_of(n)); };
  s.limit = skellam_shift_pair(params);
  const double c2 = c * c;
  s.upper = [c2](std::int64_t n) { return (2.0 * c2 + 3.0) / (c2 * c2 * static_cast<double>(n)); };
  s.lower = [cfg_of, params](std::int64_t n) { return skellam_bounds(cfg_of(n), params).cf_lower_p; };
  s.composite = s.upper;
  s.valid = [](std::int64_t) { return true; };
  return s;
}

LatticeSweepSpec multivariate_sweep_spec(const IntensitySpec& spec, int rare_cap) {
  spec.validate();
  auto k_of = [pi = spec.pi](std::int64_t n) {
    const auto k = static_cast<std::int64_t>(std::floor(pi * static_cast<double>(n)));
    return std::min(k, n - 1);
  };
  LatticeSweepSpec s{.limit = compound_poisson_limit(spec)};
  s.finite = [spec, rare_cap, k_of](std::int64_t n) {
    return exact_histogram_pair(channel_from_intensities(spec, n), k_of(n), rare_cap);
  };
  s.upper = [spec, k_of](std::int64_t n) {
    return multivariate_bounds(channel_from_intensities(spec, n), k_of(n), spec).p_bound;
  };
  s.lower = [](std::int64_t) { return 0.0; };
  s.composite = [spec, k_of](std::int64_t n) {
    const auto b = multivariate_bounds(channel_from_intensities(spec, n), k_of(n), spec);
    return std::max(b.p_bound, b.q_bound);
  };
  s.valid = [](std::int64_t) { return true; };
  return s;
}

RateRow rate_row(const IntSweepSpec& spec, std::int64_t n, const std::vector<double>& eps_grid) {
  return row_impl(spec, n, eps_grid);
}

RateRow rate_row(const LatticeSweepSpec& spec, std::int64_t n, const std::vector<double>& eps_grid) {
  return row_impl(spec, n, eps_grid);
}

RateSweep rate_sweep(const IntSweepSpec& spec, const std::vector<std::int64_t>& n_grid,
                     const std::vector<double>& eps_grid, int jobs) {
  return sweep_impl(spec, n_grid, eps_grid, jobs);
}

RateSweep rate_sweep(const LatticeSweepSpec& spec, const std::vector<std::int64_t>& n_grid,
                     const std::vector<double>& eps_grid, int jobs) {
  return sweep_impl(spec, n_grid, eps_grid, jobs);
}

}  // namespace critshuffle
