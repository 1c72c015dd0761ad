#include "pcause/monitor.hpp"

#include "pcause/errors.hpp"

namespace pcause {

std::string to_string(Status s) {
  switch (s) {
    case Status::alarm:
      return "alarm";
    case Status::cleared:
      return "cleared";
    default:
      return "pending";
  }
}

Monitor compile(const PreparedModel& pm, const CauseRepr& c) {
  validate_cause(pm, c);
  Monitor mon;
  mon.pm_ = &pm;
  const std::size_t n = pm.size();
  if (auto q = trigger_set(pm, c)) {
    mon.trigger_ = mask_of(n, *q);
    return mon;
  }
  const auto* th = std::get_if<ThresholdCause>(&c);
  if (!th) throw UnsupportedError("explicit causes need unbounded monitor memory; use a state-based or threshold cause");
  mon.threshold_ = true;
  mon.scale_ = weight_scale(pm);
  mon.trigger_.assign(n, false);
  mon.unbounded_.assign(n, false);
  for (StateId s = 0; s < n; ++s) mon.step_weight_.push_back(mpz_class(Rat(pm.weight(s) * mon.scale_).get_num()));
  for (const auto& [s, t] : th->t) {
    if (!pm.in_sp(s) || t.is_neg_inf()) continue;
    if (t.is_pos_inf()) {
      mon.unbounded_[s] = true;
      continue;
    }
    // acc < T * D holds for an integer acc exactly when acc < ceil(T * D).
    Rat scaled = t.value() * mon.scale_;
    mpz_class bound;
    mpz_cdiv_q(bound.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    mon.bound_[s] = bound;
  }
  return mon;
}

Verdict Monitor::step(StateId s) {
  if (status_ != Status::pending) return Verdict{status_, decided_at_};
  if (s >= pm_->size()) throw ModelError("unknown state id " + std::to_string(s));
  if (steps_ == 0 && s != pm_->init()) throw ModelError("trace must start at the initial state " + pm_->name(pm_->init()));
  if (steps_ > 0 && pm_->chain().prob(last_, s) == 0) {
    throw ModelError("no transition from " + pm_->name(last_) + " to " + pm_->name(s));
  }
  last_ = s;
  ++steps_;
  bool hit = false;
  if (threshold_) {
    acc_ += step_weight_[s];
    if (unbounded_[s]) {
      hit = true;
    } else if (auto it = bound_.find(s); it != bound_.end()) {
      hit = acc_ < it->second;
    }
  } else {
    hit = trigger_[s];
  }
  if (hit) {
    status_ = Status::alarm;
  } else if (s == pm_->safe()) {
    status_ = Status::cleared;
  }
  if (status_ != Status::pending) decided_at_ = steps_ - 1;
  return Verdict{status_, decided_at_};
}

Verdict Monitor::step(std::string_view name) { return step(pm_->resolve_or_throw(name)); }

void Monitor::reset() {
  acc_ = 0;
  status_ = Status::pending;
  steps_ = 0;
  decided_at_ = 0;
  last_ = 0;
}

std::size_t Monitor::memory_bits() const {
  if (!threshold_) return 0;
  mpz_class largest = 0;
  for (const auto& [s, b] : bound_) {
    if (b > largest) largest = b;
  }
  // ceil(log2(b + 1)) is the bit length of b.
  return largest > 0 ? mpz_sizeinbase(largest.get_mpz_t(), 2) : 0;
}

std::vector<Verdict> run_trace(Monitor& mon, const std::vector<std::string>& trace) {
  std::vector<Verdict> out;
  out.reserve(trace.size());
  for (const auto& name : trace) out.push_back(mon.step(name));
  return out;
}

std::size_t memory_report(const Monitor& mon) { return mon.memory_bits(); }

}  // namespace pcause
