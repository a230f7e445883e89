#pragma once

#include <cstdint>
#include <vector>

#include "critshuffle/int_dist.hpp"
#include "critshuffle/lattice_dist.hpp"

namespace critshuffle {

// 64-bit counter-mixing generator: the state advances by a fixed odd
// constant and each output is a xor-shift-multiply mix of the new state.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // uniform on [0, 1) with 53 random bits
  double uniform();
  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Seed for the index-th independent child stream of seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

// Inversion sampler over an exact IntDist.
class InversionSampler {
 public:
  explicit InversionSampler(const IntDist& dist);
  std::int64_t operator()(SeededStream& rng) const;

 private:
  std::int64_t offset_;
  std::vector<double> cdf_;
};

struct CouplingReport {
  std::int64_t n_samples = 0;
  double mismatch_freq = 0.0;
  double bound = 0.0;
  double three_sigma = 0.0;
  double ks_first = 0.0;   // first coordinate against its exact marginal
  double ks_second = 0.0;  // second coordinate against its exact marginal
};

// q with P(X = 1) = p when X = 1{N >= 1} or Bern(q) on {N = 0}, N ~ Poi(p).
double binom_poisson_q(double p);

CouplingReport couple_binom_poisson(std::int64_t m, double p, std::uint64_t seed, std::int64_t n_samples);
CouplingReport couple_poisson_poisson(double lambda, double lambda_prime, std::uint64_t seed, std::int64_t n_samples);
CouplingReport couple_multinomial_poisson(std::int64_t m, const std::vector<double>& probs,
                                          const std::vector<std::size_t>& rare_set, std::uint64_t seed,
                                          std::int64_t n_samples);

struct BinomPoissonTrace {
  std::int64_t s;
  std::int64_t n;
  bool multi_arrival;    // some N_i >= 2
  bool spurious_one;     // some N_i = 0 with X_i = 1
};
std::vector<BinomPoissonTrace> trace_binom_poisson(std::int64_t m, double p, std::uint64_t seed, std::int64_t n_samples);

// Exact joint laws of the couplers, by enumerating their decision trees.
// Coordinates: (S, N); (M, M'); (X_b for b in B, then U_b for b in B).
LatticeDist binom_poisson_joint_law(std::int64_t m, double p);
LatticeDist poisson_poisson_joint_law(double lambda, double lambda_prime);
LatticeDist multinomial_poisson_joint_law(std::int64_t m, const std::vector<double>& probs,
                                          const std::vector<std::size_t>& rare_set);

// sup_x |F_emp(x) - F(x)| for integer samples against an exact law
double discrete_ks(const std::vector<std::int64_t>& samples, const IntDist& exact);

}  // namespace critshuffle
