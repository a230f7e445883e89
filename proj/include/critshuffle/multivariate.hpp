#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "critshuffle/experiment.hpp"
#include "critshuffle/limit_experiment.hpp"

namespace critshuffle {

enum class ChannelMode { single_dominant, two_dominant };

// Size-free description of a sparse-error channel family. In two-dominant
// mode pair0 = {y0a, y0b} and pair1 = {y1a, y1b}; split_b is the share of
// y_ba inside its pair. Intensities are indexed by alphabet position and
// ignored on a row's own dominant output(s).
struct ChannelSpec {
  std::vector<std::string> alphabet;
  ChannelMode mode = ChannelMode::single_dominant;
  std::size_t y0 = 0;
  std::size_t y1 = 1;
  std::array<std::size_t, 2> pair0{0, 1};
  std::array<std::size_t, 2> pair1{2, 3};
  double split0 = 0.5;
  double split1 = 0.5;
  std::vector<double> alpha0;
  std::vector<double> alpha1;
  double pi = 0.0;

  void validate() const;
  bool is_dominant(int row, std::size_t y) const;
  // rare intensity of row b at y (zero on the row's dominant outputs)
  double rare_intensity(int row, std::size_t y) const;
  double total_rare_intensity(int row) const;
};

ChannelSpec to_channel_spec(const IntensitySpec& spec);
IntensitySpec to_intensity_spec(const ChannelSpec& spec);

struct SparseChannel {
  ChannelSpec spec;
  std::int64_t n = 0;
  std::vector<double> w0;
  std::vector<double> w1;
};

// Exact-rate instantiation: W_b(y) = alpha_b(y) / n off the dominant outputs.
SparseChannel channel_from_intensities(const ChannelSpec& spec, std::int64_t n);
SparseChannel channel_from_intensities(const IntensitySpec& spec, std::int64_t n);

inline constexpr std::size_t kMaxHistogramAlphabet = 6;
inline constexpr std::int64_t kMaxTwoDominantN = 128;
inline constexpr int kDefaultRareCap = 12;

// Laws of the centred histogram under k ones against k + 1 ones, both centred
// with k. Single-dominant: N - (n-k) e_{y0} - k e_{y1}. Two-dominant:
// N - (n-k) e_{y0a} - k e_{y1a}, which differs from N - (n-k) mu0 - k mu1 by
// a fixed vector of the Gaussian block and has the same jump projection.
LatticeExperiment exact_histogram_pair(const SparseChannel& channel, std::int64_t k, int rare_cap = kDefaultRareCap);

struct LevyAtom {
  LatticePoint jump;
  double weight;
};

struct HybridModel {
  std::size_t dim = 0;
  double pi = 0.0;
  std::vector<double> mu0;
  std::vector<double> mu1;
  LatticePoint g0;
  LatticePoint g1;
  std::vector<LatticePoint> Pi_G;  // rows
  std::vector<LatticePoint> Pi_J;  // rows
  std::array<std::array<double, 2>, 2> Sigma{};  // (g0, g1) frame
  LatticePoint m0;  // Pi_J mu0
  LatticePoint m1;  // Pi_J mu1
  std::vector<LevyAtom> levy;
  LatticePoint Delta;  // Pi_J (mu1 - mu0)
};

HybridModel hybrid_setup(const ChannelSpec& spec);

LatticePoint apply(const std::vector<LatticePoint>& matrix, const LatticePoint& x);

LatticeExperiment project_jump_pair(const LatticeExperiment& pair, const HybridModel& model);
// (L(J), L(J + Delta)) built from the compound-Poisson limit on the projected
// alphabet with grouped intensities.
LatticeExperiment projected_jump_limit(const ChannelSpec& spec, const HybridModel& model,
                                       double tail_eps = kDefaultTailEps);

struct CfPoint {
  std::vector<double> u;  // ambient; projected onto M before use
  std::vector<double> v;  // ambient; projected onto the complement of M
};

struct CfTable {
  std::vector<std::complex<double>> finite_null;
  std::vector<std::complex<double>> finite_alt;
  std::vector<std::complex<double>> limit_null;
  std::vector<std::complex<double>> limit_alt;
  double sup_null = 0.0;
  double sup_alt = 0.0;
};

std::vector<CfPoint> default_cf_grid(const HybridModel& model);
CfTable hybrid_cf(const HybridModel& model, const SparseChannel& channel, std::int64_t k,
                  const std::vector<CfPoint>& grid);

struct HybridSample {
  std::array<double, 2> gauss;  // frame coefficients of n^{-1/2} Pi_G H
  LatticePoint jump;            // Pi_J H
};

std::vector<HybridSample> hybrid_mc_sample(const SparseChannel& channel, std::int64_t k, std::uint64_t seed,
                                           std::int64_t n_samples);

struct HybridGapRow {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double delta_full = 0.0;
  double delta_projected = 0.0;
  double gap = 0.0;
  double bound = 0.0;               // C_int (1 + e^eps) / sqrt(n); infinite at boundary pi
  double empirical_constant = 0.0;  // gap sqrt(n) / (1 + e^eps)
  double common_factor_gap = 0.0;   // |delta(J x R) - delta(J)| on the limit pair
};

std::vector<HybridGapRow> hybrid_delta_gap(const ChannelSpec& spec, double eps, const std::vector<std::int64_t>& n_grid,
                                           int rare_cap = kDefaultRareCap);

}  // namespace critshuffle
