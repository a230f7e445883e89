#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "critshuffle/int_dist.hpp"

namespace critshuffle {

struct PowerScaling {
  double alpha;  // e^{eps0} = n^alpha
};
struct CanonicalScaling {
  double c;  // e^{eps0} = c^2 n
};
struct ExplicitScaling {
  std::vector<double> exp_eps0;  // e^{eps0(n)} aligned with the n grid
};
using Scaling = std::variant<PowerScaling, CanonicalScaling, ExplicitScaling>;

// "power:0.5", "canonical:2", "explicit:v1,v2,...". Throws std::invalid_argument.
Scaling parse_scaling(const std::string& text);

enum class Regime { subcritical, critical, supercritical, indeterminate };
std::string to_string(Regime r);

struct RegimeVerdict {
  Regime regime = Regime::indeterminate;
  double c = 0.0;  // only meaningful for critical
  std::vector<double> a_n_trace;
};

double eps0_at(const Scaling& s, std::int64_t n, std::size_t index);

RegimeVerdict classify_regime(const Scaling& scaling, const std::vector<std::int64_t>& n_grid);

enum class KRule { zero, half };
std::int64_t apply_k_rule(KRule rule, std::int64_t n);

struct SupercriticalRow {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double eps0 = 0.0;
  TVInterval tv;          // TV(P_n, Q_n)
  double p_event = 0.0;   // P_n(K = k)
  double q_event = 0.0;   // Q_n(K = k)
  double lr_at_event = 0.0;  // e^{-eps0}
};

struct SupercriticalTable {
  std::vector<SupercriticalRow> rows;
  bool monotone = true;  // tv.lower nondecreasing along the grid
};

SupercriticalTable supercritical_diagnostic(const Scaling& scaling, KRule rule, const std::vector<std::int64_t>& n_grid);

struct SubcriticalRow {
  std::int64_t n = 0;
  double h_n = 0.0;
  double ks_null = 0.0;  // (Lambda + h^2/2)/h under P_n
  double ks_alt = 0.0;   // (Lambda - h^2/2)/h under Q_n
  double defect = 0.0;
};

std::vector<SubcriticalRow> subcritical_gaussian_check(double alpha, KRule rule, const std::vector<std::int64_t>& n_grid);

struct EdgeRow {
  double c = 0.0;
  double eps = 0.0;
  double delta_poisson = 0.0;
  double delta_gauss = 0.0;
  double gap = 0.0;
  double delta_skellam = 0.0;  // Skellam limit at pi = 0.5
  double gap_skellam = 0.0;
};

std::vector<EdgeRow> gaussian_edge_compare(const std::vector<double>& c_grid, const std::vector<double>& eps_grid);

struct HiddenCountRow {
  std::int64_t n = 0;
  double clone_mean = 0.0;    // (n-1) e^{-eps0}
  double clone_limit = 0.0;   // 1/c^2
  double blanket_mean = 0.0;  // instantiated as 2 n delta_n
  double blanket_limit = 0.0; // 2/c^2
};

inline constexpr const char* kBlanketInstantiation = "blanket mean instantiated as 2*n*delta_n";

std::vector<HiddenCountRow> hidden_count_diagnostic(double c, const std::vector<std::int64_t>& n_grid);

struct NoncommutingTable {
  std::vector<std::int64_t> n_grid;
  std::vector<double> eps_grid;
  std::vector<std::vector<double>> delta_two;  // [n][eps]
  std::vector<double> limit_delta_two;         // [eps]
  std::vector<std::vector<double>> stability;  // (1 + e^eps)(2/(c^2 n) + 2/(c^4 n))
  double floor = 0.0;                          // e^{-1/c^2}
};

NoncommutingTable noncommuting_demo(double c, const std::vector<std::int64_t>& n_grid, const std::vector<double>& eps_grid);

}  // namespace critshuffle
