#pragma once

#include <cstddef>
#include <vector>

#include "pcause/cost_instantaneous.hpp"
#include "pcause/cost_result.hpp"
#include "pcause/model.hpp"

namespace pcause {

/// Paths from init absorbed in error or safe within the depth bound, plus the mass still moving.
struct PathEnumeration {
  std::vector<FinPath> paths;
  Rat residual = 0;
  std::size_t depth = 0;
};

/// Exhaustive expansion up to `depth` transitions. Throws LimitError beyond `max_paths` paths.
PathEnumeration enumerate_paths(const PreparedModel& pm, std::size_t depth, std::size_t max_paths = 1'000'000);

/// Exact minimum by exhaustive search. expcost and maxcost range over every trigger set
/// Q with error in Q and Q \ {error} inside S_p (at most max_subset_states free states); pexpcost
/// ranges over every scheduler of the causal MDP on an acyclic chain and returns an explicit cause.
/// Throws LimitError for instances beyond these bounds and UnsupportedError for instantaneous kinds.
CostResult brute_force_min(const PreparedModel& pm, CostKind kind, std::size_t max_subset_states = 8,
                           std::size_t max_choices = 10'000);

/// Instantaneous kinds over every Q with E in Q and Q inside S_p.
CostResult brute_force_inst_min(const InstModel& im, CostKind kind, std::size_t max_subset_states = 8);

/// The pair of chains used to relate pexpcost minimisation to a threshold probability.
struct PpGadgets {
  Dtmc n0;
  Dtmc n1;
  Rat p{1, 2};
};

/// Replaces the absorbing state `t` of `m` by the gadget t -> a -> (safe 2/3 | c 1/3), c -> b,
/// b -> (safe 1/2 | error 1/2), with b weighted R + i in N_i. Requires m acyclic up to t,
/// Pr(reach t) = 1, natural weights and no target states.
PpGadgets build_pp_gadgets(const Dtmc& m, StateId t, const mpz_class& r);

/// Probability that a path of `m` to the absorbing state `t` has total weight at most `r`.
Rat weight_at_most(const Dtmc& m, StateId t, const Rat& r);

}  // namespace pcause
