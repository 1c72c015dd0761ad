#pragma once

#include <cstddef>
#include <vector>

#include "pcause/cause.hpp"
#include "pcause/cost_result.hpp"
#include "pcause/model.hpp"
#include "pcause/ssp.hpp"

namespace pcause {

/// The p-causal MDP as a shortest path problem to {error, safe}. Internal states are the
/// non-terminal states; on S_p action 0 is pick and action 1 is continue, elsewhere continue is
/// the only action. Costs are the weights of entered states.
struct ExpcostSsp {
  SspProblem problem;
  std::vector<StateId> state_of;
  std::vector<std::size_t> index_of;  ///< size() for terminal states
};

ExpcostSsp expcost_ssp(const PreparedModel& pm);

/// Expected weight of the cause prefix, or of the path up to safe when no prefix is in the cause.
/// Supports canonical, state-based and explicit causes; throws CauseError if error can be reached
/// without passing the cause.
Rat expcost_of(const PreparedModel& pm, const CauseRepr& c);

/// expcost-minimal state-based cause by policy iteration; any rational weights.
CostResult expcost_minimal(const PreparedModel& pm);

}  // namespace pcause
