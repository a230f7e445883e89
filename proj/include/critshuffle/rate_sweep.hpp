#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "critshuffle/experiment.hpp"
#include "critshuffle/multivariate.hpp"

namespace critshuffle {

struct RateRow {
  std::int64_t n = 0;
  TVInterval tv_exact;  // TV(P_n, P_inf)
  TVInterval tv_alt;    // TV(Q_n, Q_inf)
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  std::vector<double> delta_gaps;        // |delta_n - delta_inf| (forward), one per eps
  std::vector<double> stability_bounds;  // (1 + e^eps) * composite(n), one per eps
  bool valid = true;  // the asymptotic lower bound's validity condition holds at this n
};

struct RateSweep {
  std::vector<double> eps_grid;
  std::vector<RateRow> rows;
  std::optional<double> slope;  // OLS of log tv vs log n over rows with n >= 100
  bool slack_exceeded = false;  // truncation slack above 1% of tv_exact.lower somewhere
  bool flagged() const { return slack_exceeded || !slope.has_value(); }
};

template <class Dist>
struct SweepSpec {
  std::function<Experiment<Dist>(std::int64_t)> finite{};
  Experiment<Dist> limit;
  std::function<double(std::int64_t)> upper{};
  std::function<double(std::int64_t)> lower{};
  std::function<double(std::int64_t)> composite{};  // bound on both TVs, for the curve-stability check
  std::function<bool(std::int64_t)> valid{};
};

using IntSweepSpec = SweepSpec<IntDist>;
using LatticeSweepSpec = SweepSpec<LatticeDist>;

IntSweepSpec poisson_sweep_spec(double c);
IntSweepSpec skellam_sweep_spec(double c, double pi);
LatticeSweepSpec multivariate_sweep_spec(const IntensitySpec& spec, int rare_cap = kDefaultRareCap);

RateRow rate_row(const IntSweepSpec& spec, std::int64_t n, const std::vector<double>& eps_grid);
RateRow rate_row(const LatticeSweepSpec& spec, std::int64_t n, const std::vector<double>& eps_grid);

// jobs > 1 evaluates rows concurrently; row order always follows n_grid
RateSweep rate_sweep(const IntSweepSpec& spec, const std::vector<std::int64_t>& n_grid,
                     const std::vector<double>& eps_grid, int jobs = 1);
RateSweep rate_sweep(const LatticeSweepSpec& spec, const std::vector<std::int64_t>& n_grid,
                     const std::vector<double>& eps_grid, int jobs = 1);

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// geometric grid 10^{from}, 10^{from+step}, ..., rounded to integers
std::vector<std::int64_t> geometric_grid(double from_exp, double to_exp, double step);

}  // namespace critshuffle
