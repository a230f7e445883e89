#pragma once

#include "critshuffle/int_dist.hpp"
#include "critshuffle/lattice_dist.hpp"

namespace critshuffle {

// A binary experiment: p is the law under the null neighbour, q under the
// alternative.
template <class Dist>
struct Experiment {
  Dist p;
  Dist q;
};

using IntExperiment = Experiment<IntDist>;
using LatticeExperiment = Experiment<LatticeDist>;

}  // namespace critshuffle
