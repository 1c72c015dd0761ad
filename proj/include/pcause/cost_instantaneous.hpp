#pragma once

#include <vector>

#include "pcause/cause.hpp"
#include "pcause/cost_result.hpp"
#include "pcause/dtmc.hpp"

namespace pcause {

/// Chain with an error set E (target states) and terminal safe set F (states with q = 0), both
/// treated as absorbing. Costs are instantaneous: a path pays the weight of its last state.
/// Causes refer to state ids of `chain`.
struct InstModel {
  Dtmc chain;
  Rat p;
  std::vector<bool> error_set;
  std::vector<bool> safe_set;
  std::vector<Rat> q;
  std::vector<bool> in_sp;

  bool terminal(StateId s) const { return error_set[s] || safe_set[s]; }
  std::vector<StateId> sp() const;
};

/// Throws ModelError when there is no target state or p is outside (0, 1].
InstModel make_inst_model(const Dtmc& m, const Rat& p);

/// Expected weight of the state where the path first meets Q, E or F. Throws CauseError when Q is
/// not a subset of S_p.
Rat expcost_inst_of(const InstModel& im, const std::vector<StateId>& q);
/// As expcost_inst_of, with F weights counted as 0.
Rat pexpcost_inst_of(const InstModel& im, const std::vector<StateId>& q);
/// Largest weight of a state where a path first meets Q or E; -inf when none is reachable.
ExtRat maxcost_inst_of(const InstModel& im, const std::vector<StateId>& q);

/// Shortest path over {pick, continue}; the cause is Q = picked states together with E.
CostResult expcost_inst_minimal(const InstModel& im);
/// expcost_inst_minimal on the model with F weights set to 0.
CostResult pexpcost_inst_minimal(const InstModel& im);

/// Greedy removal of S_p in ascending (weight, id) order until E is unreachable. `order`
/// receives the removed states.
CostResult maxcost_inst_minimal(const InstModel& im, std::vector<StateId>* order = nullptr);

}  // namespace pcause
