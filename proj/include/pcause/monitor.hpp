#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pcause/cause.hpp"
#include "pcause/model.hpp"

namespace pcause {

enum class Status { pending, alarm, cleared };

std::string to_string(Status s);

struct Verdict {
  Status status = Status::pending;
  /// Index of the step that decided the status; meaningful once it is not pending.
  std::size_t decided_at = 0;
};

/// Runtime monitor for a state-based or threshold cause over state traces of the prepared model.
/// Threshold bounds are kept as exclusive integer bounds on the scaled accumulated weight.
class Monitor {
 public:
  Status status() const { return status_; }
  std::size_t steps() const { return steps_; }
  /// Accumulated weight of the consumed states, in model units.
  Rat weight() const { return Rat(acc_) / scale_; }
  bool threshold_based() const { return threshold_; }

  /// Consumes one state. The first state must be the initial one, later states must be
  /// successors of the previous one; decided monitors ignore further input.
  Verdict step(StateId s);
  Verdict step(std::string_view name);

  /// Bits needed for the accumulated weight: 0 for state triggers.
  std::size_t memory_bits() const;

  void reset();

 private:
  friend Monitor compile(const PreparedModel& pm, const CauseRepr& c);

  const PreparedModel* pm_ = nullptr;
  bool threshold_ = false;
  std::vector<bool> trigger_;
  std::map<StateId, mpz_class> bound_;  ///< scaled exclusive bounds; absent means never
  std::vector<bool> unbounded_;         ///< +inf thresholds
  mpz_class scale_ = 1;
  std::vector<mpz_class> step_weight_;
  mpz_class acc_ = 0;
  Status status_ = Status::pending;
  std::size_t steps_ = 0;
  std::size_t decided_at_ = 0;
  StateId last_ = 0;
};

/// Throws UnsupportedError for explicit causes.
Monitor compile(const PreparedModel& pm, const CauseRepr& c);

/// One verdict per consumed state.
std::vector<Verdict> run_trace(Monitor& mon, const std::vector<std::string>& trace);

/// Bits for the accumulator of a threshold monitor: ceil(log2(b + 1)) for the largest finite
/// scaled bound b.
std::size_t memory_report(const Monitor& mon);

}  // namespace pcause
