#pragma once

#include <cstddef>
#include <vector>

#include "pcause/linear.hpp"
#include "pcause/rational.hpp"

namespace pcause {

/// One action of a stochastic shortest path problem: immediate cost and the distribution over
/// internal states. Probability mass missing from `next` terminates with cost 0.
struct SspAction {
  Rat cost;
  SparseRow next;
};

/// Minimization problem over internal states 0..n-1. Every state needs at least one action and
/// every memoryless policy must terminate with probability 1.
struct SspProblem {
  std::vector<std::vector<SspAction>> actions;
};

struct SspSolution {
  std::vector<Rat> value;
  std::vector<std::size_t> policy;
  std::size_t iterations = 0;
  /// Value vector of every evaluated policy, in order.
  std::vector<std::vector<Rat>> history;
};

/// Exact expected total cost of a memoryless policy.
std::vector<Rat> evaluate_policy(const SspProblem& problem, const std::vector<std::size_t>& policy);

/// Exact policy iteration starting from action 0 everywhere. A state switches only on strict
/// improvement; the returned policy picks, in every state, the lowest-index optimal action.
SspSolution solve_ssp(const SspProblem& problem);

}  // namespace pcause
