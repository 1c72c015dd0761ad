#include "pcause/sampling.hpp"

#include <algorithm>

namespace pcause {

PathSampler::PathSampler(const Dtmc& m) : m_(&m), cumulative_(m.size()) {
  for (StateId s = 0; s < m.size(); ++s) {
    double acc = 0;
    for (const auto& tr : m.row(s)) {
      acc += to_double(tr.prob);
      cumulative_[s].push_back(acc);
    }
  }
}

StateId PathSampler::step(StateId s, std::mt19937_64& rng) const {
  const auto& cum = cumulative_[s];
  std::uniform_real_distribution<double> u(0.0, cum.back());
  auto it = std::upper_bound(cum.begin(), cum.end(), u(rng));
  auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
  return m_->row(s)[idx].to;
}

std::vector<StateId> PathSampler::sample(std::mt19937_64& rng, const std::vector<bool>& stop,
                                         std::size_t max_steps) const {
  std::vector<StateId> path{m_->init()};
  while (path.size() <= max_steps && !stop[path.back()]) path.push_back(step(path.back(), rng));
  return path;
}

}  // namespace pcause
