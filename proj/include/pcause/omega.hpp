#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcause/cause.hpp"
#include "pcause/dtmc.hpp"
#include "pcause/model.hpp"

namespace pcause {

/// Deterministic Rabin automaton reading chain state names. A run is accepting when for some
/// pair (E, F) it visits E finitely often and F infinitely often.
struct Dra {
  std::vector<std::string> states;
  std::size_t initial = 0;
  std::map<std::pair<std::size_t, std::string>, std::size_t> delta;
  std::vector<std::pair<std::vector<bool>, std::vector<bool>>> pairs;

  std::optional<std::size_t> find(std::string_view name) const;
  /// Successor on `letter`; throws ModelError when undefined.
  std::size_t next(std::size_t q, const std::string& letter) const;
  /// Automaton state after reading the whole word from the initial state.
  std::size_t run(const std::vector<std::string>& word) const;
};

/// Line format: `dra`, `state <q>`, `init <q>`, `trans <q> <letter> <q'>`,
/// `pair E:<q,...> F:<q,...>`; `#` starts a comment.
Dra parse_dra(std::string_view text);
Dra load_dra(const std::string& path);

/// Reachable part of M x A. Product state (s, q) records the automaton state after reading s.
/// Target states of `chain` are the accepting bottom components.
struct ProductModel {
  Dtmc chain;
  std::vector<StateId> m_state;
  std::vector<std::size_t> a_state;
  std::vector<std::vector<StateId>> bsccs;
  std::vector<bool> bscc_accepting;
  std::vector<bool> accepting;  ///< U: union of accepting bottom components
  /// Probability of reaching U from each product state.
  std::vector<Rat> q;

  std::optional<StateId> lookup(StateId s, std::size_t a) const;
  /// Product path of an M path starting in M's initial state; throws CauseError when it
  /// leaves the product.
  std::vector<StateId> lift(const std::vector<StateId>& m_path) const;
  Rat effect_probability() const { return q[chain.init()]; }

  /// Prepared product for the reachability effect U. Throws ModelError when U is empty.
  PreparedModel prepare(const Rat& p) const;

 private:
  std::map<std::pair<StateId, std::size_t>, StateId> index_;
  friend ProductModel build_product_from(const Dtmc& m, const Dra& a, StateId s, std::size_t q);
};

/// Throws ModelError when the automaton lacks a transition for a reachable (q, s).
ProductModel build_product(const Dtmc& m, const Dra& a);
/// Product whose initial state is (s, q), i.e. q already read s.
ProductModel build_product_from(const Dtmc& m, const Dra& a, StateId s, std::size_t q);

/// Pr_M(L | path) computed on a product rooted at the end of `path`.
Rat conditional_probability(const Dtmc& m, const Dra& a, const std::vector<StateId>& path);

/// Cause on M induced by a trigger-set cause of the prepared product.
struct ProjectedCause {
  /// Set when membership depends on the chain state only; ids of M.
  std::optional<std::vector<StateId>> state_based;
  /// Members up to `depth` transitions as paths of M, sorted.
  std::vector<std::vector<StateId>> members;
  /// Probability of product paths still undecided at the depth bound.
  Rat residual = 0;
  std::size_t depth = 0;
};

/// `prepared` must come from prod.prepare(p). Throws UnsupportedError for threshold and explicit
/// causes and CauseError when the cause is not valid on the product.
ProjectedCause transfer_cause(const ProductModel& prod, const PreparedModel& prepared, const CauseRepr& c,
                              std::size_t depth);

struct ProjectedReport {
  bool prefix_free = true;
  bool critical = true;
  std::vector<StateId> critical_witness;
  /// Pr_M(L) minus the L-probability carried by the members; at most `residual` when covering.
  Rat uncovered = 0;
  Rat residual = 0;

  bool ok(double residual_tolerance = 1e-6) const;
};

/// Checks a projected cause directly on M: prefix-freeness, Pr_M(L | member) >= p and coverage.
ProjectedReport verify_projected(const Dtmc& m, const Dra& a, const Rat& p, const ProjectedCause& c);

}  // namespace pcause
