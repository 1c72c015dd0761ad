#include "pcause/ssp.hpp"

#include <stdexcept>

namespace pcause {

namespace {

Rat action_value(const SspAction& a, const std::vector<Rat>& v) {
  Rat x = a.cost;
  for (const auto& [j, p] : a.next) x += p * v[j];
  return x;
}

// Lowest-index action attaining the minimum; `current` is kept unless strictly beaten.
std::size_t greedy(const std::vector<SspAction>& acts, const std::vector<Rat>& v, std::size_t current, bool keep_current) {
  std::size_t best = 0;
  Rat best_value = action_value(acts[0], v);
  for (std::size_t a = 1; a < acts.size(); ++a) {
    Rat x = action_value(acts[a], v);
    if (x < best_value) {
      best = a;
      best_value = x;
    }
  }
  if (keep_current && action_value(acts[current], v) == best_value) return current;
  return best;
}

}  // namespace

std::vector<Rat> evaluate_policy(const SspProblem& problem, const std::vector<std::size_t>& policy) {
  const std::size_t n = problem.actions.size();
  std::vector<SparseRow> p(n);
  std::vector<Rat> b(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto& a = problem.actions[s].at(policy[s]);
    p[s] = a.next;
    b[s] = a.cost;
  }
  return solve_fixpoint(p, std::move(b));
}

SspSolution solve_ssp(const SspProblem& problem) {
  const std::size_t n = problem.actions.size();
  for (const auto& acts : problem.actions) {
    if (acts.empty()) throw std::invalid_argument("solve_ssp: state without actions");
  }
  SspSolution sol;
  sol.policy.assign(n, 0);
  while (true) {
    sol.value = evaluate_policy(problem, sol.policy);
    sol.history.push_back(sol.value);
    ++sol.iterations;
    bool changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      auto a = greedy(problem.actions[s], sol.value, sol.policy[s], true);
      if (a != sol.policy[s]) {
        sol.policy[s] = a;
        changed = true;
      }
    }
    if (!changed) break;
  }
  // Any greedy policy for the optimal values is optimal when all policies are proper.
  std::vector<std::size_t> canonical(n);
  for (std::size_t s = 0; s < n; ++s) canonical[s] = greedy(problem.actions[s], sol.value, 0, false);
  if (canonical != sol.policy) {
    sol.policy = std::move(canonical);
    sol.value = evaluate_policy(problem, sol.policy);
  }
  return sol;
}

}  // namespace pcause
