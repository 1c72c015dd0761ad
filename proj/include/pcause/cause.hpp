#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcause/model.hpp"
#include "pcause/rational.hpp"

namespace pcause {

/// Canonical cause: first visit to S_p. Carries no data; meaning comes from the PreparedModel.
struct CanonicalCause {
  friend bool operator==(const CanonicalCause&, const CanonicalCause&) = default;
};

/// First visit to a state of Q. `q` is sorted and duplicate free.
struct StateBasedCause {
  std::vector<StateId> q;
  friend bool operator==(const StateBasedCause&, const StateBasedCause&) = default;
};

/// First prefix ending in some s in S_p with accumulated weight < T(s).
/// States missing from the map are never picked.
struct ThresholdCause {
  std::map<StateId, ExtRat> t;
  friend bool operator==(const ThresholdCause&, const ThresholdCause&) = default;
};

/// Finite set of paths, each starting at init.
struct ExplicitCause {
  std::vector<std::vector<StateId>> paths;
  friend bool operator==(const ExplicitCause&, const ExplicitCause&) = default;
};

using CauseRepr = std::variant<CanonicalCause, StateBasedCause, ThresholdCause, ExplicitCause>;

std::string cause_kind(const CauseRepr& c);

/// Normalized state-based view of canonical and state-based causes; nullopt otherwise.
std::optional<std::vector<StateId>> trigger_set(const PreparedModel& pm, const CauseRepr& c);

/// Membership mask for a trigger set.
std::vector<bool> mask_of(std::size_t n, const std::vector<StateId>& states);

/// Incremental first-hit membership test along one path.
///
/// Feed states one at a time starting with init. `hit()` becomes true on the first prefix that
/// belongs to the cause and stays latched; `dead()` is true when no extension of the current prefix
/// can belong to the cause.
class CauseTracker {
 public:
  CauseTracker(const PreparedModel& pm, const CauseRepr& c);

  /// Advances by one state; returns hit().
  bool push(StateId s);
  bool hit() const { return hit_; }
  bool dead() const;
  std::size_t length() const { return length_; }
  const Rat& weight() const { return weight_; }

 private:
  struct Trie;

  const PreparedModel* pm_;
  int kind_;
  std::vector<bool> q_mask_;
  std::shared_ptr<const ThresholdCause> thresholds_;
  std::shared_ptr<const Trie> trie_;
  std::size_t node_ = 0;
  bool off_trie_ = false;
  bool hit_ = false;
  std::size_t length_ = 0;
  Rat weight_ = 0;
  StateId last_ = 0;
};

/// True when `path` (starting at init) is a member of the cause.
bool is_member(const PreparedModel& pm, const CauseRepr& c, const std::vector<StateId>& path);

/// True when q(last) >= p, i.e. the prefix is p-critical for reaching error.
bool is_p_critical(const PreparedModel& pm, const FinPath& path);

CauseRepr canonical_cause(const PreparedModel& pm);

/// Automaton over alphabet S with states S plus an extra initial state.
struct Dfa {
  std::size_t num_states = 0;
  std::size_t initial = 0;
  /// delta[q] maps a letter (state of the chain) to the successor; missing means reject.
  std::vector<std::map<StateId, std::size_t>> delta;
  std::vector<bool> accepting;

  bool accepts(const std::vector<StateId>& word) const;
};

/// Accepts exactly the canonical cause; S_p states are accepting and have no successors.
Dfa canonical_dfa(const PreparedModel& pm);

/// Result of checking the two conditions of a cause plus prefix-freeness.
struct VerifyReport {
  bool prefix_free = true;
  std::vector<std::vector<StateId>> prefix_witness;  ///< (shorter, longer) member pair
  bool critical = true;
  std::vector<StateId> critical_witness;  ///< member (or trigger state) with q < p
  bool covered = true;
  bool coverage_exact = true;
  /// Probability of reaching error without a member prefix (exact when coverage_exact, otherwise
  /// a lower bound from the explored depth).
  Rat uncovered_mass = 0;
  /// Mass of prefixes still undecided at the depth bound, weighted by their chance to reach
  /// error; 0 when coverage_exact.
  Rat residual = 0;
  std::vector<StateId> coverage_witness;  ///< path to error with no member prefix
  std::size_t depth = 0;
  std::vector<std::string> problems;

  bool ok(double residual_tolerance = 1e-6) const;
};

VerifyReport verify_cause(const PreparedModel& pm, const CauseRepr& c, std::size_t depth);

/// Pr_init(reach error without visiting `avoid` before); error itself counts as avoided when
/// flagged.
Rat avoiding_reach_probability(const PreparedModel& pm, const std::vector<bool>& avoid);

/// Members of the cause with at most `depth` transitions, plus the probability mass of prefixes
/// still undecided at the bound.
struct Unfolding {
  std::vector<std::vector<StateId>> members;
  Rat residual = 0;
};

/// Paths stop at the first member, at error and at safe; members are sorted lexicographically.
Unfolding unfold(const PreparedModel& pm, const CauseRepr& c, std::size_t depth);

/// Pi <= Phi: every member of `b` has a prefix in `a`. Exact for trigger sets; otherwise unfolds
/// `b` to `depth` and throws LimitError unless the model is acyclic or the residual is < 1e-9.
bool cause_leq(const PreparedModel& pm, const CauseRepr& a, const CauseRepr& b, std::size_t depth);

enum class Action { cont, pick };

/// p-causal MDP: `cont` follows the chain, `pick` (enabled exactly on S_p) moves to error with
/// probability 1. Weight accrues on entering a state; the pick move adds nothing, so a pick after
/// a prefix costs exactly the prefix weight.
class CausalMdp {
 public:
  explicit CausalMdp(const PreparedModel& pm) : pm_(&pm) {}

  const PreparedModel& model() const { return *pm_; }
  bool pick_enabled(StateId s) const { return pm_->in_sp(s); }
  /// Distribution of the action; throws CauseError for pick outside S_p.
  std::vector<Transition> successors(StateId s, Action a) const;
  /// Weight added by taking `a` in s and moving to t.
  Rat step_weight(Action a, StateId t) const { return a == Action::pick ? Rat(0) : pm_->weight(t); }

 private:
  const PreparedModel* pm_;
};

/// Scheduler of the p-causal MDP. Memoryless picks on a state set; weight-based picks at (s, w)
/// iff s in S_p and w < threshold(s).
struct MemorylessScheduler {
  std::vector<Action> action;  ///< indexed by state
};
struct WeightScheduler {
  std::map<StateId, ExtRat> threshold;
};
using SchedulerRepr = std::variant<MemorylessScheduler, WeightScheduler>;

/// Action the scheduler takes after a prefix ending in `s` with accumulated weight `w`.
Action decide(const PreparedModel& pm, const SchedulerRepr& sched, StateId s, const Rat& w);

/// Canonical and state-based causes map to memoryless schedulers, threshold causes to weight-based
/// ones. Explicit causes throw UnsupportedError.
SchedulerRepr cause_to_scheduler(const PreparedModel& pm, const CauseRepr& c);
CauseRepr scheduler_to_cause(const PreparedModel& pm, const SchedulerRepr& s);

/// Prefixes on which the scheduler picks, plus prefixes reaching error without a pick, up to
/// `depth` transitions. Computed by running the scheduler, independently of cause membership.
std::vector<std::vector<StateId>> scheduler_paths(const PreparedModel& pm, const SchedulerRepr& s,
                                                   std::size_t depth);

/// Violated conditions of a p-prima facie cause (empty when all hold).
std::vector<std::string> prima_facie_violations(const PreparedModel& pm, const std::vector<StateId>& c);

/// State-based cause with Q = C + {error}; throws CauseError listing every violated condition.
CauseRepr prima_facie_to_cause(const PreparedModel& pm, const std::vector<StateId>& c);

/// Checks the structural invariants of a representation: Q within S_p, T keys within S_p, explicit
/// paths valid, starting at init and not running past error or safe. Throws CauseError.
void validate_cause(const PreparedModel& pm, const CauseRepr& c);

/// Maps a weight vector over the chain to an integer scale: the least D > 0 with D*w integral for
/// every weight.
mpz_class weight_scale(const PreparedModel& pm);

}  // namespace pcause
