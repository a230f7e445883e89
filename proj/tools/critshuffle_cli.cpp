#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "critshuffle/channel_spec.hpp"
#include "critshuffle/coupling.hpp"
#include "critshuffle/limit_experiment.hpp"
#include "critshuffle/multivariate.hpp"
#include "critshuffle/privacy_curve.hpp"
#include "critshuffle/rate_sweep.hpp"
#include "critshuffle/regime.hpp"
#include "critshuffle/rr_experiment.hpp"
#include "table.hpp"

using namespace critshuffle;
using cli::Cell;
using cli::Table;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitAssert = 3;
constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct AssertionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "csv";
  std::string out;
  bool assert_mode = false;
};

struct ExperimentArgs {
  std::string experiment;
  std::int64_t n = 0;
  std::int64_t k = -1;
  double c = kUnset;
  double eps0 = kUnset;
  double pi = kUnset;
  double lambda = kUnset;
  std::string channel;
};

using AnyExperiment = std::variant<IntExperiment, LatticeExperiment>;

bool set(double v) { return !std::isnan(v); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_assert(bool ok, const std::string& msg) {
  if (!ok) throw AssertionFailed(msg);
}

RRConfig rr_from(const ExperimentArgs& a, std::int64_t k) {
  require(a.n >= 2, "--n must be >= 2");
  require(set(a.c) != set(a.eps0), "give exactly one of --c and --eps0");
  if (set(a.c)) return rr_config(a.n, CanonicalC{a.c}, k);
  return rr_config(a.n, ExplicitEps0{a.eps0}, k);
}

std::int64_t k_from(const ExperimentArgs& a, std::int64_t n) {
  if (a.k >= 0) return a.k;
  if (set(a.pi)) return static_cast<std::int64_t>(std::floor(a.pi * static_cast<double>(n)));
  return 0;
}

AnyExperiment build_experiment(const ExperimentArgs& a) {
  const std::string& e = a.experiment;
  if (e == "rr-canonical") return canonical_pair(rr_from(a, 0));
  if (e == "rr-composition") return composition_pair(rr_from(a, k_from(a, a.n)));
  if (e == "poisson-limit") {
    require(set(a.lambda) != set(a.c), "give exactly one of --lambda and --c");
    return poisson_shift_pair(set(a.lambda) ? a.lambda : 1.0 / (a.c * a.c));
  }
  if (e == "skellam-limit") {
    require(set(a.c) && set(a.pi), "skellam-limit needs --c and --pi");
    return skellam_shift_pair(make_limit_params(a.c, a.pi));
  }
  if (e == "multivariate-limit" || e == "multivariate-finite") {
    require(!a.channel.empty(), e + " needs --channel");
    const ChannelSpec spec = load_channel_spec(a.channel);
    if (e == "multivariate-limit") {
      require(spec.mode == ChannelMode::single_dominant, "multivariate-limit needs a single-dominant channel");
      return compound_poisson_limit(to_intensity_spec(spec));
    }
    require(a.n >= 2, "--n must be >= 2");
    const std::int64_t k = a.k >= 0 ? a.k : static_cast<std::int64_t>(std::floor(spec.pi * static_cast<double>(a.n)));
    return exact_histogram_pair(channel_from_intensities(spec, a.n), k);
  }
  throw std::invalid_argument("unknown experiment '" + e + "'");
}

void add_experiment_options(CLI::App* sub, ExperimentArgs& a) {
  sub->add_option("--experiment", a.experiment,
                  "rr-canonical | rr-composition | poisson-limit | skellam-limit | multivariate-limit | "
                  "multivariate-finite")
      ->required();
  sub->add_option("--n", a.n, "population size");
  sub->add_option("--k", a.k, "number of ones in the composition (default floor(pi n) or 0)");
  sub->add_option("--c", a.c, "canonical constant: e^eps0 = c^2 n, or limit rate 1/c^2");
  sub->add_option("--eps0", a.eps0, "explicit local privacy level");
  sub->add_option("--pi", a.pi, "fraction of ones");
  sub->add_option("--lambda", a.lambda, "Poisson-shift rate");
  sub->add_option("--channel", a.channel, "channel specification file");
}

std::vector<std::int64_t> checked_grid(const std::vector<std::int64_t>& g, std::size_t min_len) {
  require(g.size() >= min_len, "--n-grid needs at least " + std::to_string(min_len) + " value(s)");
  for (std::size_t i = 0; i < g.size(); ++i) {
    require(g[i] >= 1, "--n-grid values must be positive");
    require(i == 0 || g[i] > g[i - 1], "--n-grid must be strictly increasing");
  }
  return g;
}

// ---------------------------------------------------------------- commands

Table cmd_curve(const ExperimentArgs& a, const std::vector<double>& eps) {
  require(!eps.empty(), "--eps needs at least one value");
  const AnyExperiment ex = build_experiment(a);
  Table t;
  t.columns = {"eps", "delta_forward", "delta_reverse", "delta_two", "slack"};
  for (double e : eps) {
    require(e >= 0.0, "--eps values must be >= 0");
    std::array<DeltaResult, 3> d;
    std::visit(
        [&](const auto& pair) {
          d = {delta_np(pair.p, pair.q, e, Direction::forward), delta_np(pair.p, pair.q, e, Direction::reverse),
               delta_np(pair.p, pair.q, e, Direction::two_sided)};
        },
        ex);
    t.add({e, d[0].value, d[1].value, d[2].value, std::max({d[0].slack, d[1].slack, d[2].slack})});
  }
  return t;
}

Table cmd_tradeoff(const ExperimentArgs& a, const Common& common) {
  TradeoffCurve curve({{0.0, 1.0}});
  if (a.experiment == "poisson-limit") {
    require(set(a.lambda) != set(a.c), "give exactly one of --lambda and --c");
    curve = poisson_shift_tradeoff(set(a.lambda) ? a.lambda : 1.0 / (a.c * a.c));
  } else {
    const AnyExperiment ex = build_experiment(a);
    std::visit([&](const auto& pair) { curve = tradeoff_generic(pair.p, pair.q); }, ex);
  }
  Table t;
  t.columns = {"alpha", "beta"};
  for (const auto& k : curve.knots()) t.add({k.alpha, k.beta});
  if (common.assert_mode) {
    const auto& ks = curve.knots();
    for (std::size_t i = 1; i < ks.size(); ++i) check_assert(ks[i].beta <= ks[i - 1].beta + 1e-15, "trade-off not nonincreasing");
    for (std::size_t i = 2; i < ks.size(); ++i) {
      const double s0 = (ks[i - 1].beta - ks[i - 2].beta) / (ks[i - 1].alpha - ks[i - 2].alpha);
      const double s1 = (ks[i].beta - ks[i - 1].beta) / (ks[i].alpha - ks[i - 1].alpha);
      check_assert(s1 >= s0 - 1e-9, "trade-off not convex");
    }
  }
  return t;
}

struct SweepArgs {
  std::string regime;
  double c = kUnset;
  double pi = kUnset;
  std::string channel;
  std::vector<std::int64_t> n_grid;
  std::vector<double> eps{1.0};
  int jobs = 1;
  int rare_cap = kDefaultRareCap;
};

template <class Spec>
Table sweep_table(const Spec& spec, const SweepArgs& a, const Common& common) {
  const auto grid = checked_grid(a.n_grid, 4);
  require(!a.eps.empty(), "--eps needs at least one value");
  require(a.jobs >= 1, "--jobs must be >= 1");
  const RateSweep s = rate_sweep(spec, grid, a.eps, a.jobs);
  Table t;
  t.columns = {"n", "eps", "tv_lower", "tv_upper", "paper_upper", "paper_lower", "delta_gap", "stability_bound", "valid"};
  t.comments.push_back(std::string("slack_exceeded=") + (s.slack_exceeded ? "true" : "false"));
  for (const auto& r : s.rows) {
    for (std::size_t j = 0; j < a.eps.size(); ++j) {
      t.add({r.n, a.eps[j], r.tv_exact.lower, r.tv_exact.upper, r.upper_bound, r.lower_bound, r.delta_gaps[j],
             r.stability_bounds[j], r.valid});
      if (common.assert_mode) {
        const std::string at = " at n=" + std::to_string(r.n);
        if (r.valid) {
          check_assert(r.lower_bound <= r.tv_exact.upper, "tv below explicit lower bound" + at);
          check_assert(r.tv_exact.lower <= r.upper_bound, "tv above explicit upper bound" + at);
        }
        check_assert(r.delta_gaps[j] <= r.stability_bounds[j], "delta gap above stability bound" + at);
      }
    }
  }
  t.add({std::string("slope"), Cell{}, s.slope ? Cell{*s.slope} : Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{},
         !s.flagged()});
  return t;
}

Table cmd_sweep(const SweepArgs& a, const Common& common) {
  if (a.regime == "poisson") {
    require(set(a.c) && a.c > 0.0, "poisson sweep needs --c > 0");
    return sweep_table(poisson_sweep_spec(a.c), a, common);
  }
  if (a.regime == "skellam") {
    require(set(a.c) && a.c > 0.0, "skellam sweep needs --c > 0");
    const double pi = set(a.pi) ? a.pi : 0.5;
    require(pi > 0.0 && pi < 1.0, "skellam sweep needs --pi in (0,1)");
    return sweep_table(skellam_sweep_spec(a.c, pi), a, common);
  }
  if (a.regime == "multivariate") {
    require(!a.channel.empty(), "multivariate sweep needs --channel");
    ChannelSpec spec = load_channel_spec(a.channel);
    require(spec.mode == ChannelMode::single_dominant, "multivariate sweep needs a single-dominant channel");
    if (set(a.pi)) spec.pi = a.pi;
    return sweep_table(multivariate_sweep_spec(to_intensity_spec(spec), a.rare_cap), a, common);
  }
  throw std::invalid_argument("unknown regime '" + a.regime + "' (poisson | skellam | multivariate)");
}

struct RegimeArgs {
  std::string scaling;
  std::string diagnostic = "verdict";
  std::vector<std::int64_t> n_grid{10, 100, 1000, 10000};
  std::string k_rule = "zero";
  double c = 1.0;
  std::vector<double> c_grid{1.0, 0.5, 0.25, 0.1};
  std::vector<double> eps{1.0};
};

KRule parse_k_rule(const std::string& s) {
  if (s == "zero") return KRule::zero;
  if (s == "half") return KRule::half;
  throw std::invalid_argument("--k-rule must be zero or half");
}

Table cmd_regime(const RegimeArgs& a, const Common& common) {
  const auto grid = checked_grid(a.n_grid, 1);
  Table t;
  const std::string& d = a.diagnostic;
  if (d == "verdict" || d == "supercritical" || d == "subcritical") require(!a.scaling.empty(), "--scaling is required");
  if (d == "verdict") {
    const auto v = classify_regime(parse_scaling(a.scaling), grid);
    t.columns = {"n", "a_n", "regime", "c"};
    for (std::size_t i = 0; i < grid.size(); ++i)
      t.add({grid[i], v.a_n_trace[i], to_string(v.regime), v.regime == Regime::critical ? Cell{v.c} : Cell{}});
    return t;
  }
  if (d == "supercritical") {
    const auto s = supercritical_diagnostic(parse_scaling(a.scaling), parse_k_rule(a.k_rule), grid);
    t.columns = {"n", "k", "eps0", "tv_lower", "tv_upper", "p_event", "q_event", "lr_at_event"};
    for (const auto& r : s.rows) t.add({r.n, r.k, r.eps0, r.tv.lower, r.tv.upper, r.p_event, r.q_event, r.lr_at_event});
    if (common.assert_mode) check_assert(s.monotone, "TV not nondecreasing in n");
    return t;
  }
  if (d == "subcritical") {
    const auto sc = parse_scaling(a.scaling);
    const auto* p = std::get_if<PowerScaling>(&sc);
    require(p != nullptr, "subcritical diagnostic needs --scaling power:<alpha>");
    const auto rows = subcritical_gaussian_check(p->alpha, parse_k_rule(a.k_rule), grid);
    t.columns = {"n", "h_n", "ks_null", "ks_alt", "defect"};
    for (const auto& r : rows) t.add({r.n, r.h_n, r.ks_null, r.ks_alt, r.defect});
    if (common.assert_mode)
      for (std::size_t i = 1; i < rows.size(); ++i) check_assert(rows[i].ks_null < rows[i - 1].ks_null, "KS not decreasing");
    return t;
  }
  if (d == "hidden") {
    require(a.c > 0.0, "--c must be > 0");
    t.columns = {"n", "clone_mean", "clone_limit", "blanket_mean", "blanket_limit", "blanket_note"};
    for (const auto& r : hidden_count_diagnostic(a.c, grid))
      t.add({r.n, r.clone_mean, r.clone_limit, r.blanket_mean, r.blanket_limit, std::string(kBlanketInstantiation)});
    return t;
  }
  if (d == "edge") {
    t.columns = {"c", "eps", "delta_poisson", "delta_gauss", "gap", "delta_skellam", "gap_skellam"};
    for (const auto& r : gaussian_edge_compare(a.c_grid, a.eps))
      t.add({r.c, r.eps, r.delta_poisson, r.delta_gauss, r.gap, r.delta_skellam, r.gap_skellam});
    return t;
  }
  if (d == "noncommuting") {
    require(a.c > 0.0, "--c must be > 0");
    const auto nc = noncommuting_demo(a.c, grid, a.eps);
    t.columns = {"n", "eps", "delta_two", "limit_delta_two", "stability_bound", "floor"};
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < a.eps.size(); ++j) {
        t.add({grid[i], a.eps[j], nc.delta_two[i][j], nc.limit_delta_two[j], nc.stability[i][j], nc.floor});
        if (common.assert_mode)
          check_assert(std::abs(nc.delta_two[i][j] - nc.limit_delta_two[j]) <= nc.stability[i][j],
                       "curve gap above stability bound at n=" + std::to_string(grid[i]));
      }
    return t;
  }
  throw std::invalid_argument("unknown diagnostic '" + d + "'");
}

std::int64_t sample_count(double samples) {
  require(samples >= 1.0 && samples <= 1e9 && std::floor(samples) == samples, "--samples must be an integer in [1, 1e9]");
  return static_cast<std::int64_t>(samples);
}

struct CouplingArgs {
  std::string which;
  std::int64_t m = 0;
  double p = kUnset;
  double lambda = kUnset;
  double lambda_prime = kUnset;
  std::vector<double> probs;
  std::vector<std::size_t> rare;
  double samples = 1e5;
  std::uint64_t seed = 1;
};

Table cmd_coupling(const CouplingArgs& a, const Common& common) {
  const std::int64_t ns = sample_count(a.samples);
  CouplingReport r;
  if (a.which == "A1") {
    require(a.m >= 1 && set(a.p), "A1 needs --m >= 1 and --p");
    r = couple_binom_poisson(a.m, a.p, a.seed, ns);
  } else if (a.which == "A2") {
    require(set(a.lambda) && set(a.lambda_prime), "A2 needs --lambda and --lambda-prime");
    r = couple_poisson_poisson(a.lambda, a.lambda_prime, a.seed, ns);
  } else if (a.which == "A3") {
    require(a.m >= 1 && !a.probs.empty() && !a.rare.empty(), "A3 needs --m, --probs and --rare");
    r = couple_multinomial_poisson(a.m, a.probs, a.rare, a.seed, ns);
  } else {
    throw std::invalid_argument("unknown coupler '" + a.which + "' (A1 | A2 | A3)");
  }
  Table t;
  t.comments.push_back("seed=" + std::to_string(a.seed));
  t.columns = {"which", "seed", "n_samples", "mismatch_freq", "bound", "three_sigma", "ks_first", "ks_second"};
  t.add({a.which, std::to_string(a.seed), r.n_samples, r.mismatch_freq, r.bound, r.three_sigma, r.ks_first, r.ks_second});
  if (common.assert_mode) check_assert(r.mismatch_freq <= r.bound + r.three_sigma, "mismatch frequency above bound + 3 sigma");
  return t;
}

struct HybridArgs {
  std::string channel;
  std::string mode = "gap";
  double eps = 1.0;
  std::vector<std::int64_t> n_grid;
  int rare_cap = kDefaultRareCap;
  std::int64_t n = 10000;
  double samples = 1e5;
  std::uint64_t seed = 1;
};

Table cmd_hybrid(const HybridArgs& a, const Common& common) {
  require(!a.channel.empty(), "--channel is required");
  const ChannelSpec spec = load_channel_spec(a.channel);
  require(spec.mode == ChannelMode::two_dominant, "hybrid needs a two-dominant channel");
  Table t;
  if (a.mode == "gap") {
    const auto grid = checked_grid(a.n_grid.empty() ? std::vector<std::int64_t>{8, 16, 32, 64} : a.n_grid, 1);
    require(a.eps >= 0.0, "--eps must be >= 0");
    t.columns = {"n", "k", "delta_full", "delta_projected", "gap", "bound", "empirical_constant", "common_factor_gap"};
    for (const auto& r : hybrid_delta_gap(spec, a.eps, grid, a.rare_cap)) {
      t.add({r.n, r.k, r.delta_full, r.delta_projected, r.gap, r.bound, r.empirical_constant, r.common_factor_gap});
      if (common.assert_mode) check_assert(r.gap <= r.bound, "gap above bound at n=" + std::to_string(r.n));
    }
    return t;
  }
  const HybridModel model = hybrid_setup(spec);
  if (a.mode == "cf") {
    const auto grid = checked_grid(a.n_grid.empty() ? std::vector<std::int64_t>{100, 1000, 10000} : a.n_grid, 1);
    const auto pts = default_cf_grid(model);
    t.columns = {"n", "k", "sup_null", "sup_alt"};
    double prev = std::numeric_limits<double>::infinity();
    for (auto n : grid) {
      const auto k = static_cast<std::int64_t>(std::floor(spec.pi * static_cast<double>(n)));
      const auto cf = hybrid_cf(model, channel_from_intensities(spec, n), std::min(k, n - 1), pts);
      t.add({n, k, cf.sup_null, cf.sup_alt});
      if (common.assert_mode) check_assert(cf.sup_null < prev, "CF sup-distance not decreasing at n=" + std::to_string(n));
      prev = cf.sup_null;
    }
    return t;
  }
  if (a.mode == "mc") {
    require(a.n >= 2, "--n must be >= 2");
    const std::int64_t ns = sample_count(a.samples);
    const auto k = static_cast<std::int64_t>(std::floor(spec.pi * static_cast<double>(a.n)));
    const auto xs = hybrid_mc_sample(channel_from_intensities(spec, a.n), std::min(k, a.n - 1), a.seed, ns);
    double m0 = 0.0, m1 = 0.0;
    for (const auto& s : xs) {
      m0 += s.gauss[0];
      m1 += s.gauss[1];
    }
    const double N = static_cast<double>(xs.size());
    m0 /= N;
    m1 /= N;
    double c00 = 0.0, c01 = 0.0, c11 = 0.0;
    for (const auto& s : xs) {
      c00 += (s.gauss[0] - m0) * (s.gauss[0] - m0);
      c01 += (s.gauss[0] - m0) * (s.gauss[1] - m1);
      c11 += (s.gauss[1] - m1) * (s.gauss[1] - m1);
    }
    c00 /= N - 1.0;
    c01 /= N - 1.0;
    c11 /= N - 1.0;
    t.comments.push_back("seed=" + std::to_string(a.seed));
    t.columns = {"stat", "empirical", "target", "seed"};
    const std::string sd = std::to_string(a.seed);
    t.add({std::string("cov00"), c00, model.Sigma[0][0], sd});
    t.add({std::string("cov01"), c01, model.Sigma[0][1], sd});
    t.add({std::string("cov11"), c11, model.Sigma[1][1], sd});
    if (common.assert_mode) {
      check_assert(std::abs(c00 - model.Sigma[0][0]) <= 0.05 * model.Sigma[0][0] + 1e-12, "cov00 off by more than 5%");
      check_assert(std::abs(c11 - model.Sigma[1][1]) <= 0.05 * model.Sigma[1][1] + 1e-12, "cov11 off by more than 5%");
    }
    return t;
  }
  throw std::invalid_argument("unknown hybrid mode '" + a.mode + "' (gap | cf | mc)");
}

// Flat "key = value" config: each key becomes --key value unless the flag was
// already given on the command line, so flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config '" + path + "'");
  std::set<std::string> given;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "config line " + std::to_string(ln) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto x = s.find_first_not_of(" \t\r");
      if (x == std::string::npos) return std::string();
      return s.substr(x, s.find_last_not_of(" \t\r") - x + 1);
    };
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (given.count(key)) continue;
    if (value == "true") {
      args.push_back(key);
    } else if (value != "false") {
      args.push_back(key);
      args.push_back(value);
    }
  }
  return args;
}

void emit(const Table& t, const Common& common) {
  require(common.format == "csv" || common.format == "json", "--format must be csv or json");
  std::ostringstream buf;
  if (common.format == "csv") cli::write_csv(buf, t);
  else cli::write_json(buf, t);
  if (common.out.empty()) {
    std::cout << buf.str();
    return;
  }
  std::ofstream f(common.out, std::ios::binary);
  require(static_cast<bool>(f), "cannot write '" + common.out + "'");
  f << buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finite-n and limit experiments for critical shuffled randomized response"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "critshuffle 0.1.0");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", common.out, "output file (default stdout)");
    sub->add_flag("--assert", common.assert_mode, "exit 3 when a checked bound fails");
  };

  ExperimentArgs curve_args;
  std::vector<double> curve_eps;
  auto* curve = app.add_subcommand("curve", "privacy curve delta(eps) of a binary experiment");
  add_experiment_options(curve, curve_args);
  curve->add_option("--eps", curve_eps, "comma-separated eps grid")->delimiter(',')->required();
  add_common(curve);

  ExperimentArgs trade_args;
  auto* trade = app.add_subcommand("tradeoff", "trade-off function knots (alpha, beta)");
  add_experiment_options(trade, trade_args);
  add_common(trade);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "exact TV and curve gaps against the explicit bounds along an n grid");
  sweep->add_option("--regime", sweep_args.regime, "poisson | skellam | multivariate")->required();
  sweep->add_option("--c", sweep_args.c, "canonical constant");
  sweep->add_option("--pi", sweep_args.pi, "fraction of ones (skellam, multivariate)");
  sweep->add_option("--channel", sweep_args.channel, "channel specification file (multivariate)");
  sweep->add_option("--n-grid", sweep_args.n_grid, "increasing n values, at least four")->delimiter(',')->required();
  sweep->add_option("--eps", sweep_args.eps, "eps values for the curve gap")->delimiter(',');
  sweep->add_option("--jobs", sweep_args.jobs, "rows evaluated concurrently");
  sweep->add_option("--rare-cap", sweep_args.rare_cap, "per-coordinate enumeration cap (multivariate)");
  add_common(sweep);

  RegimeArgs regime_args;
  auto* regime = app.add_subcommand("regime", "regime classification and diagnostics");
  regime->add_option("--scaling", regime_args.scaling, "power:<alpha> | canonical:<c> | explicit:<v1,v2,...>");
  regime->add_option("--diagnostic", regime_args.diagnostic,
                     "verdict | supercritical | subcritical | hidden | edge | noncommuting");
  regime->add_option("--n-grid", regime_args.n_grid, "increasing n values")->delimiter(',');
  regime->add_option("--k-rule", regime_args.k_rule, "zero | half");
  regime->add_option("--c", regime_args.c, "canonical constant (hidden, noncommuting)");
  regime->add_option("--c-grid", regime_args.c_grid, "decreasing c values in (0,1] (edge)")->delimiter(',');
  regime->add_option("--eps", regime_args.eps, "eps values (edge, noncommuting)")->delimiter(',');
  add_common(regime);

  CouplingArgs coup_args;
  auto* coup = app.add_subcommand("coupling", "seeded Monte Carlo of the Poisson couplings");
  coup->add_option("--which", coup_args.which, "A1 (binomial-Poisson) | A2 (Poisson-Poisson) | A3 (multinomial-Poisson)")
      ->required();
  coup->add_option("--m", coup_args.m, "number of trials (A1, A3)");
  coup->add_option("--p", coup_args.p, "success probability (A1)");
  coup->add_option("--lambda", coup_args.lambda, "first rate (A2)");
  coup->add_option("--lambda-prime", coup_args.lambda_prime, "second rate (A2)");
  coup->add_option("--probs", coup_args.probs, "category probabilities (A3)")->delimiter(',');
  coup->add_option("--rare", coup_args.rare, "rare category indices (A3)")->delimiter(',');
  coup->add_option("--samples", coup_args.samples, "number of samples (accepts 1e6)");
  coup->add_option("--seed", coup_args.seed, "64-bit seed")->envname("CRITSHUFFLE_SEED");
  add_common(coup);

  HybridArgs hyb_args;
  auto* hyb = app.add_subcommand("hybrid", "two-dominant channels: curve gap, CF distance, Monte Carlo covariance");
  hyb->add_option("--channel", hyb_args.channel, "channel specification file")->required();
  hyb->add_option("--mode", hyb_args.mode, "gap | cf | mc");
  hyb->add_option("--eps", hyb_args.eps, "eps for the curve gap");
  hyb->add_option("--n-grid", hyb_args.n_grid, "increasing n values")->delimiter(',');
  hyb->add_option("--rare-cap", hyb_args.rare_cap, "per-coordinate enumeration cap");
  hyb->add_option("--n", hyb_args.n, "population size (mc)");
  hyb->add_option("--samples", hyb_args.samples, "number of samples (mc)");
  hyb->add_option("--seed", hyb_args.seed, "64-bit seed (mc)")->envname("CRITSHUFFLE_SEED");
  add_common(hyb);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "critshuffle: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "critshuffle: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    Table t;
    if (curve->parsed()) t = cmd_curve(curve_args, curve_eps);
    else if (trade->parsed()) t = cmd_tradeoff(trade_args, common);
    else if (sweep->parsed()) t = cmd_sweep(sweep_args, common);
    else if (regime->parsed()) t = cmd_regime(regime_args, common);
    else if (coup->parsed()) t = cmd_coupling(coup_args, common);
    else t = cmd_hybrid(hyb_args, common);
    emit(t, common);
  } catch (const AssertionFailed& e) {
    std::cerr << "critshuffle: assertion failed: " << e.what() << '\n';
    return kExitAssert;
  } catch (const std::invalid_argument& e) {
    std::cerr << "critshuffle: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "critshuffle: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
