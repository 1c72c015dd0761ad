#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pcause/rational.hpp"

namespace pcause {

using StateId = std::size_t;

struct Transition {
  StateId to;
  Rat prob;
};

struct StateInfo {
  std::string name;
  Rat weight = 0;
  bool target = false;
  bool safe_terminal = false;
};

/// Explicit-state discrete-time Markov chain with exact probabilities.
///
/// Rows are sparse and hold strictly positive probabilities that sum to exactly one;
/// state names are unique. Instances are built through DtmcBuilder or parse_dtmc and
/// are immutable afterwards.
class Dtmc {
 public:
  std::size_t size() const { return states_.size(); }
  StateId init() const { return init_; }

  const StateInfo& state(StateId s) const { return states_[s]; }
  const std::string& name(StateId s) const { return states_[s].name; }
  const Rat& weight(StateId s) const { return states_[s].weight; }
  bool is_target(StateId s) const { return states_[s].target; }

  const std::vector<Transition>& row(StateId s) const { return rows_[s]; }

  /// Transition probability, 0 when there is no edge.
  Rat prob(StateId from, StateId to) const;

  std::optional<StateId> find(std::string_view name) const;
  /// Like find, but throws ModelError for unknown names.
  StateId at(std::string_view name) const;

  std::vector<Rat> weights() const;

  /// Same chain with every state weight replaced.
  Dtmc with_weights(const std::vector<Rat>& weights) const;

  /// Renders the model in the line format accepted by parse_dtmc.
  std::string to_text() const;

 private:
  friend class DtmcBuilder;

  std::vector<StateInfo> states_;
  std::vector<std::vector<Transition>> rows_;
  std::unordered_map<std::string, StateId> index_;
  StateId init_ = 0;
};

/// Incremental construction with validation in build().
class DtmcBuilder {
 public:
  StateId add_state(std::string name, Rat weight = 0, bool target = false, bool safe_terminal = false);
  void set_init(StateId s);
  void add_transition(StateId from, StateId to, Rat prob);

  bool has_state(std::string_view name) const;
  StateId state_id(std::string_view name) const;
  std::size_t size() const { return states_.size(); }

  /// Validates row sums, positivity, duplicate edges and the initial state.
  Dtmc build() const;

 private:
  std::vector<StateInfo> states_;
  std::vector<std::vector<Transition>> rows_;
  std::unordered_map<std::string, StateId> index_;
  std::optional<StateId> init_;
};

/// Parses the line-oriented model format:
///
///     dtmc
///     state <name> [weight=<rat>] [target] [safeterm]
///     init <name>
///     trans <from> <to> <rat>
///
/// `#` starts a comment. Errors carry the offending line number.
Dtmc parse_dtmc(std::string_view text);

/// Reads and parses a model file.
Dtmc load_dtmc(const std::string& path);

/// Reads a whole text file; throws ModelError when it cannot be opened.
std::string read_file(const std::string& path);

/// Splits a line into whitespace separated tokens, dropping a trailing `#` comment.
std::vector<std::string_view> tokenize_line(std::string_view line);

}  // namespace pcause
