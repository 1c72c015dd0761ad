#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "pcause/dtmc.hpp"

namespace pcause {

/// Floating-point successor sampler for one chain. Simulation only; analyses stay exact.
class PathSampler {
 public:
  explicit PathSampler(const Dtmc& m);

  StateId step(StateId s, std::mt19937_64& rng) const;

  /// Path from init until a state in `stop` is entered or `max_steps` transitions were taken.
  std::vector<StateId> sample(std::mt19937_64& rng, const std::vector<bool>& stop, std::size_t max_steps) const;

 private:
  const Dtmc* m_;
  std::vector<std::vector<double>> cumulative_;
};

}  // namespace pcause
