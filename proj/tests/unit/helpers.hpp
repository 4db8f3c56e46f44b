#pragma once

#include <random>
#include <vector>

#include "../oracles/oracles.hpp"
#include "uirisk/distribution.hpp"
#include "uirisk/random.hpp"

namespace testing {

inline oracle::Law law_of(const uirisk::DiscreteDistribution& x) {
  return {{x.atoms().begin(), x.atoms().end()}, {x.weights().begin(), x.weights().end()}};
}

// Random law with 1..max_atoms atoms on a coarse grid, so ties and zeros occur.
inline uirisk::DiscreteDistribution random_law(std::mt19937_64& rng, int max_atoms, double spread = 5.0) {
  const int k = 1 + static_cast<int>(uirisk::uniform01(rng) * max_atoms);
  std::vector<double> atoms;
  std::vector<double> weights;
  for (int i = 0; i < k; ++i) {
    atoms.push_back(std::round((2.0 * uirisk::uniform01(rng) - 1.0) * spread * 8.0) / 8.0);
    weights.push_back(0.05 + uirisk::uniform01(rng));
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return uirisk::DiscreteDistribution(atoms, weights);
}

}  // namespace testing
