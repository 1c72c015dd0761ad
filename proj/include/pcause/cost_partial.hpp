#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pcause/cause.hpp"
#include "pcause/cost_result.hpp"
#include "pcause/model.hpp"

namespace pcause {

/// Bounds above which continuing is strictly optimal for partial expected cost.
struct SaturationData {
  /// Expected weight entered strictly after s on paths to error, never picking.
  std::vector<Rat> r;
  std::vector<Rat> q;
  /// r(s) / (1 - q(s)), +inf where q(s) = 1.
  std::vector<ExtRat> k;
  /// Largest finite k(s); empty when q = 1 everywhere.
  std::optional<Rat> k_max;
  /// Common denominator of all weights; scaled weights c(s) * scale are natural numbers.
  mpz_class scale = 1;
};

/// Throws UnsupportedError for negative weights.
SaturationData saturation(const PreparedModel& pm);

/// Optimal values V(s, w) of the weight-unfolded causal MDP for scaled levels w below top().
/// Levels at or above top() follow the closed form q(s) * w + tail(s), where the tail picks
/// only in states with q = 1.
class LevelValueTable {
 public:
  std::size_t top() const { return top_; }
  const mpz_class& scale() const { return scale_; }
  std::size_t num_states() const { return tail_.size(); }

  /// Value in scaled units; terminal states included (error: w, safe: 0).
  Rat value(StateId s, std::size_t level) const;
  /// True where pick is optimal (ties pick); false outside S_p and at or above top().
  bool picks(StateId s, std::size_t level) const;
  /// Continue value in scaled units, for non-terminal s.
  Rat continue_value(StateId s, std::size_t level) const;

  /// One line per (state, level) below top: state,level,value,action with values unscaled.
  void write_csv(std::ostream& out) const;

 private:
  friend LevelValueTable level_values(const PreparedModel& pm, const SaturationData& sat, std::size_t max_cells);
  friend CostResult pexpcost_minimal(const PreparedModel& pm, std::size_t max_cells);

  const PreparedModel* pm_ = nullptr;
  std::size_t top_ = 0;
  mpz_class scale_ = 1;
  std::vector<std::size_t> step_;  ///< scaled weight of each state
  std::vector<Rat> q_;
  std::vector<Rat> tail_;
  std::vector<std::vector<Rat>> value_;  ///< [level][state]
  std::vector<std::vector<bool>> pick_;
  std::size_t iterations_ = 0;
};

/// Backward induction over levels top-1 .. 0. States joined by zero-weight cycles on one level
/// are solved together by policy iteration. Throws LimitError when top * |S| exceeds max_cells.
LevelValueTable level_values(const PreparedModel& pm, const SaturationData& sat,
                             std::size_t max_cells = 20'000'000);

/// Partial expected cost: weight of the cause prefix, 0 on paths without one. Trigger-set and
/// threshold causes are solved exactly; explicit causes are expanded along their prefix tree.
Rat pexpcost_of(const PreparedModel& pm, const CauseRepr& c);

/// Minimal partial expected cost with a threshold cause attaining it, for non-negative weights.
/// Thresholds are given for S_p only: +inf where q = 1, otherwise one scaled level above the
/// largest pick level reachable under the optimal policy (0 when no such level exists).
CostResult pexpcost_minimal(const PreparedModel& pm, std::size_t max_cells = 20'000'000);

}  // namespace pcause
