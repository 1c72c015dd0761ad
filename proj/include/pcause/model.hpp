#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcause/dtmc.hpp"
#include "pcause/rational.hpp"

namespace pcause {

/// Exact Pr_s(<> targets) for every state. States that cannot reach the targets get exactly 0.
std::vector<Rat> reach_probabilities(const Dtmc& m, const std::vector<bool>& targets);

/// Convenience overload over a list of target states.
std::vector<Rat> reach_probabilities(const Dtmc& m, const std::vector<StateId>& targets);

/// A chain prepared for cause analysis with threshold p.
///
/// All target states are merged into one absorbing `error` state, all states that cannot
/// reach a target are merged into one absorbing `safe` state and states unreachable from the
/// initial state are dropped. `q[s]` is the exact probability to reach error from s and
/// S_p = { s : q[s] >= p }.
class PreparedModel {
 public:
  const Dtmc& chain() const { return chain_; }
  std::size_t size() const { return chain_.size(); }
  StateId init() const { return chain_.init(); }
  StateId error() const { return error_; }
  StateId safe() const { return safe_; }
  const Rat& p() const { return p_; }

  const Rat& q(StateId s) const { return q_[s]; }
  const std::vector<Rat>& q() const { return q_; }

  bool in_sp(StateId s) const { return in_sp_[s]; }
  const std::vector<bool>& sp_mask() const { return in_sp_; }
  /// S_p in increasing state order; always contains error.
  const std::vector<StateId>& sp() const { return sp_; }

  const Rat& weight(StateId s) const { return chain_.weight(s); }
  const std::string& name(StateId s) const { return chain_.name(s); }

  bool is_terminal(StateId s) const { return s == error_ || s == safe_; }

  /// True when the initial state cannot reach any target (q(init) = 0).
  bool trivial() const { return trivial_; }

  /// Resolves a prepared name or a name of the original chain (collapsed and pruned states map
  /// to their representative; pruned states yield nullopt).
  std::optional<StateId> resolve(std::string_view name) const;
  /// Like resolve, but throws ModelError for unknown names.
  StateId resolve_or_throw(std::string_view name) const;

  /// Original state names merged into each prepared state.
  const std::vector<std::vector<std::string>>& members() const { return members_; }

  /// Non-fatal notes produced by preprocessing (pruned states, weight conflicts).
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Set when merged states disagreed on their weights; accumulated costs that depend on the
  /// merged state's weight refuse to run.
  bool error_weight_ambiguous() const { return error_weight_ambiguous_; }
  bool safe_weight_ambiguous() const { return safe_weight_ambiguous_; }

  /// Copy with new state weights (indexed by prepared state).
  PreparedModel with_weights(const std::vector<Rat>& weights) const;

 private:
  friend PreparedModel preprocess(const Dtmc& m, const Rat& p);

  Dtmc chain_;
  StateId error_ = 0;
  StateId safe_ = 0;
  Rat p_;
  std::vector<Rat> q_;
  std::vector<bool> in_sp_;
  std::vector<StateId> sp_;
  bool trivial_ = false;
  std::vector<std::vector<std::string>> members_;
  std::vector<std::optional<StateId>> original_to_prepared_;
  Dtmc original_;
  std::vector<std::string> warnings_;
  bool error_weight_ambiguous_ = false;
  bool safe_weight_ambiguous_ = false;
};

/// Collapses, prunes and solves for q. Requires 0 < p <= 1 and at least one target state.
PreparedModel preprocess(const Dtmc& m, const Rat& p);

/// Finite path of a prepared model with cached probability and accumulated weight.
struct FinPath {
  std::vector<StateId> states;
  Rat prob = 1;
  Rat weight = 0;

  StateId last() const { return states.back(); }
  std::size_t length() const { return states.size(); }
  friend bool operator==(const FinPath& a, const FinPath& b) { return a.states == b.states; }
};

/// Builds a path starting at the initial state; throws CauseError when a step has probability 0
/// or the path does not start at init.
FinPath make_path(const PreparedModel& pm, const std::vector<StateId>& states);

/// Path from state names (prepared or original).
FinPath make_path(const PreparedModel& pm, const std::vector<std::string>& names);

std::string format_path(const PreparedModel& pm, const std::vector<StateId>& states);

}  // namespace pcause
