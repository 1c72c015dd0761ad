#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "pcause/cause.hpp"
#include "pcause/cost_result.hpp"
#include "pcause/model.hpp"

namespace pcause {

/// Max-cost reachability game. Max owns the chain states, Min owns one copy per state of S_p.
/// Edges into S_p states are redirected to their copy; a copy moves to its state (continue) or
/// to error (pick). Vertex weights: c on S \ S_p and on copies, 0 on S_p. Only vertices
/// reachable from the start vertex are built.
struct GameArena {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<StateId> state;       ///< chain state of each vertex
  std::vector<bool> min_vertex;     ///< true for copies
  std::vector<Rat> weight;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::size_t> vertex_of;  ///< state -> original vertex or npos
  std::vector<std::size_t> copy_of;    ///< state -> copy vertex or npos
  std::size_t start = 0;
  std::size_t target = 0;  ///< original error vertex

  std::size_t size() const { return state.size(); }
};

GameArena build_arena(const PreparedModel& pm);

struct GameValues {
  /// Total weight of the play from the vertex (inclusive) to error; -inf if error is unreachable.
  std::vector<ExtRat> value;
  /// Min choice per S_p state with a copy in the arena: true means pick (ties pick).
  std::map<StateId, bool> pick;
  std::size_t iterations = 0;
};

/// Value iteration from below; vertices that can pump a positive cycle of S \ S_p are fixed to +inf.
GameValues solve_game(const PreparedModel& pm, const GameArena& arena);

/// True iff a cycle of positive weight lies in S \ S_p among states with q > 0, reachable from
/// init without entering S_p.
bool has_positive_cycle_outside_sp(const PreparedModel& pm);

/// Largest weight of a cause member: +inf if members can pump a positive cycle, -inf without
/// members. Trigger-set and explicit causes only.
ExtRat maxcost_of(const PreparedModel& pm, const CauseRepr& c);

/// Longest first-hit path to S_p after collapsing zero-weight cycles; non-negative weights only.
ExtRat maxcost_nonnegative(const PreparedModel& pm);

/// maxcost-minimal state-based cause. Non-negative weights take the canonical cause; otherwise
/// the game is solved and Q collects the states whose copy picks, plus error.
CostResult maxcost_minimal(const PreparedModel& pm);

}  // namespace pcause
