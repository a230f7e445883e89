#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "critshuffle/experiment.hpp"

namespace critshuffle {

struct ExplicitEps0 {
  double eps0;
};
struct CanonicalC {
  double c;  // e^{eps0} = c^2 n
};
using Calibration = std::variant<ExplicitEps0, CanonicalC>;

struct RRConfig {
  std::int64_t n = 1;
  double eps0 = 0.0;
  double exp_eps0 = 1.0;  // kept alongside eps0 so canonical values never round-trip through log
  double delta_n = 0.5;
  double a_n = 0.0;
  std::int64_t k = 0;
  double pi_n = 0.0;
};

RRConfig rr_config(std::int64_t n, Calibration calibration, std::int64_t k = 0);

// Released count K under the all-zero null and the one-flipped alternative.
IntExperiment canonical_pair(const RRConfig& cfg);
// Laws of D = K - k for a population with k ones, against k + 1 ones.
IntExperiment composition_pair(const RRConfig& cfg);

double likelihood_ratio_canonical(const RRConfig& cfg, std::int64_t m);

enum class Hypothesis { null, alt };

struct ScoreContext {
  double h_n = 0.0;
  double v_n = 0.0;
  double Delta_n = 0.0;
};

struct ScoredAtom {
  double value;
  double prob;
};

struct ScoredLaw {
  std::vector<ScoredAtom> atoms;  // sorted, strictly increasing values
  ScoreContext context;
  double defect = 0.0;  // mass at points where a pmf entry underflowed
};

inline constexpr double kUnderflowThreshold = 1e-300;

ScoredLaw loglr_law(const RRConfig& cfg, Hypothesis hypothesis);
// Law of log(q/p) under the chosen hypothesis for any pair of IntDists.
ScoredLaw loglr_law(const IntExperiment& pair, Hypothesis hypothesis);

// sup_x |F(x) - Phi((x - center) / scale)| for the step cdf of the atoms
double ks_to_normal(const ScoredLaw& law, double center, double scale);

}  // namespace critshuffle
