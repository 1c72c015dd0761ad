#include "pcause/cost_partial.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "pcause/errors.hpp"
#include "pcause/graph.hpp"
#include "pcause/linear.hpp"
#include "pcause/ssp.hpp"

namespace pcause {

namespace {

void require_non_negative(const PreparedModel& pm) {
  for (StateId s = 0; s < pm.size(); ++s) {
    if (sgn(pm.weight(s)) < 0) {
      throw UnsupportedError("partial expected cost needs non-negative weights (state " + pm.name(s) + ")");
    }
  }
}

mpz_class floor_of(const Rat& r) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

Rat from_level(std::size_t w) { return Rat(static_cast<unsigned long>(w)); }

std::vector<std::size_t> scaled_steps(const PreparedModel& pm, const mpz_class& scale) {
  std::vector<std::size_t> out(pm.size());
  for (StateId s = 0; s < pm.size(); ++s) {
    Rat v = pm.weight(s) * scale;
    if (v.get_den() != 1 || !v.get_num().fits_ulong_p()) throw LimitError("scaled weight does not fit a level index");
    out[s] = v.get_num().get_ui();
  }
  return out;
}

// Solves x(s) = sum P(s,s') (gain(s') + [open(s')] x(s')) over the open states; 0 elsewhere.
std::vector<Rat> accumulate(const PreparedModel& pm, const std::vector<bool>& open, const std::vector<Rat>& gain) {
  const std::size_t n = pm.size();
  std::vector<std::size_t> var(n, n);
  std::vector<StateId> vars;
  for (StateId s = 0; s < n; ++s) {
    if (open[s]) {
      var[s] = vars.size();
      vars.push_back(s);
    }
  }
  std::vector<SparseRow> p(vars.size());
  std::vector<Rat> b(vars.size(), Rat(0));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (const auto& tr : pm.chain().row(vars[i])) {
      b[i] += tr.prob * gain[tr.to];
      if (var[tr.to] != n) p[i].emplace_back(var[tr.to], tr.prob);
    }
  }
  auto x = solve_fixpoint(p, std::move(b));
  std::vector<Rat> out(n, Rat(0));
  for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i]] = x[i];
  return out;
}

// Value h(s) * w + g(s) of the first-hit cause `stop` from (s, w), w in scaled units.
struct LinearTail {
  std::vector<Rat> h;
  std::vector<Rat> g;
  std::vector<bool> leaks;  ///< error reachable without passing `stop`
};

LinearTail first_hit_tail(const PreparedModel& pm, const std::vector<bool>& stop, const std::vector<std::size_t>& step) {
  const std::size_t n = pm.size();
  std::vector<bool> open(n);
  for (StateId s = 0; s < n; ++s) open[s] = !stop[s] && !pm.is_terminal(s);
  std::vector<Rat> one(n, Rat(0));
  for (StateId s = 0; s < n; ++s) one[s] = stop[s] ? Rat(1) : Rat(0);
  LinearTail t;
  t.h = accumulate(pm, open, one);
  for (StateId s = 0; s < n; ++s) {
    if (stop[s]) t.h[s] = 1;
  }
  std::vector<Rat> gain(n);
  for (StateId s = 0; s < n; ++s) gain[s] = from_level(step[s]) * t.h[s];
  t.g = accumulate(pm, open, gain);
  for (StateId s = 0; s < n; ++s) {
    if (stop[s]) t.g[s] = 0;
  }
  t.leaks.assign(n, false);
  if (!stop[pm.error()]) {
    auto rev = reverse(support_graph(pm.chain()));
    t.leaks = reachable_from(rev, {pm.error()}, [&](std::size_t s) { return !stop[s]; });
  }
  return t;
}

}  // namespace

SaturationData saturation(const PreparedModel& pm) {
  require_non_negative(pm);
  const std::size_t n = pm.size();
  SaturationData sat;
  sat.q = pm.q();
  sat.scale = weight_scale(pm);
  std::vector<bool> open(n);
  std::vector<Rat> gain(n);
  for (StateId s = 0; s < n; ++s) {
    open[s] = !pm.is_terminal(s);
    gain[s] = pm.weight(s) * sat.q[s];
  }
  sat.r = accumulate(pm, open, gain);
  sat.k.resize(n);
  for (StateId s = 0; s < n; ++s) {
    if (sat.q[s] == 1) {
      sat.k[s] = ExtRat::pos_inf();
      continue;
    }
    Rat k = sat.r[s] / (1 - sat.q[s]);
    sat.k[s] = ExtRat(k);
    if (!sat.k_max || *sat.k_max < k) sat.k_max = k;
  }
  return sat;
}

Rat LevelValueTable::value(StateId s, std::size_t level) const {
  if (s == pm_->error()) return from_level(level);
  if (s == pm_->safe()) return 0;
  if (level >= top_) return q_[s] * from_level(level) + tail_[s];
  return value_[level][s];
}

bool LevelValueTable::picks(StateId s, std::size_t level) const {
  if (level >= top_) return pm_->in_sp(s) && q_[s] == 1;
  return pick_[level][s];
}

Rat LevelValueTable::continue_value(StateId s, std::size_t level) const {
  Rat v = 0;
  for (const auto& tr : pm_->chain().row(s)) v += tr.prob * value(tr.to, level + step_[tr.to]);
  return v;
}

void LevelValueTable::write_csv(std::ostream& out) const {
  out << "state,level,value,action\n";
  for (std::size_t w = 0; w < top_; ++w) {
    for (StateId s = 0; s < num_states(); ++s) {
      if (pm_->is_terminal(s)) continue;
      out << pm_->name(s) << ',' << w << ',' << to_string(Rat(value_[w][s] / scale_)) << ','
          << (pick_[w][s] ? "pick" : "continue") << '\n';
    }
  }
}

LevelValueTable level_values(const PreparedModel& pm, const SaturationData& sat, std::size_t max_cells) {
  const std::size_t n = pm.size();
  LevelValueTable t;
  t.pm_ = &pm;
  t.scale_ = sat.scale;
  t.step_ = scaled_steps(pm, sat.scale);
  t.q_ = sat.q;

  // Above the top level only q = 1 states pick; the tail is the weight entered after s until
  // error or a q = 1 state.
  std::vector<bool> open(n);
  std::vector<Rat> gain(n);
  for (StateId s = 0; s < n; ++s) {
    open[s] = !pm.is_terminal(s) && sat.q[s] != 1;
    gain[s] = from_level(t.step_[s]) * sat.q[s];
  }
  t.tail_ = accumulate(pm, open, gain);
  for (StateId s = 0; s < n; ++s) {
    if (!open[s]) t.tail_[s] = 0;
  }

  if (sat.k_max) {
    mpz_class top = floor_of(*sat.k_max * sat.scale) + 1;
    if (!top.fits_ulong_p()) throw LimitError("saturation level does not fit a level index");
    t.top_ = top.get_ui();
  }
  if (t.top_ > 0 && t.top_ > max_cells / std::max<std::size_t>(n, 1)) {
    throw LimitError("level table needs " + std::to_string(t.top_) + " levels over " + std::to_string(n) +
                     " states, more than the cell limit");
  }

  std::vector<bool> internal(n);
  Digraph zero(n);
  for (StateId s = 0; s < n; ++s) internal[s] = !pm.is_terminal(s);
  for (StateId s = 0; s < n; ++s) {
    if (!internal[s]) continue;
    for (const auto& tr : pm.chain().row(s)) {
      if (internal[tr.to] && t.step_[tr.to] == 0) zero[s].push_back(tr.to);
    }
  }
  auto comps = strongly_connected_components(zero, internal);

  t.value_.assign(t.top_, std::vector<Rat>(n, Rat(0)));
  t.pick_.assign(t.top_, std::vector<bool>(n, false));
  std::vector<std::size_t> comp_of(n, comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (auto s : comps[c]) comp_of[s] = c;
  }

  for (std::size_t w = t.top_; w-- > 0;) {
    Rat level = from_level(w);
    auto& val = t.value_[w];
    auto& pick = t.pick_[w];
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto& members = comps[c];
      auto inside = [&](StateId to) { return comp_of[to] == c && t.step_[to] == 0; };
      auto known = [&](StateId s) {
        Rat v = 0;
        for (const auto& tr : pm.chain().row(s)) {
          if (inside(tr.to)) continue;
          v += tr.prob * t.value(tr.to, w + t.step_[tr.to]);
        }
        return v;
      };
      bool cyclic = members.size() > 1;
      if (!cyclic) {
        for (const auto& tr : pm.chain().row(members[0])) cyclic = cyclic || inside(tr.to);
      }
      if (!cyclic) {
        StateId s = members[0];
        Rat cont = known(s);
        pick[s] = pm.in_sp(s) && level <= cont;
        val[s] = pick[s] ? level : cont;
        continue;
      }
      std::vector<std::size_t> local(n, members.size());
      for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;
      SspProblem problem;
      for (auto s : members) {
        std::vector<SspAction> acts;
        if (pm.in_sp(s)) acts.push_back(SspAction{level, {}});
        SspAction cont{known(s), {}};
        for (const auto& tr : pm.chain().row(s)) {
          if (inside(tr.to)) cont.next.emplace_back(local[tr.to], tr.prob);
        }
        acts.push_back(std::move(cont));
        problem.actions.push_back(std::move(acts));
      }
      auto sol = solve_ssp(problem);
      t.iterations_ += sol.iterations;
      for (std::size_t i = 0; i < members.size(); ++i) {
        pick[members[i]] = pm.in_sp(members[i]) && sol.policy[i] == 0;
        val[members[i]] = sol.value[i];
      }
    }
  }
  return t;
}

Rat pexpcost_of(const PreparedModel& pm, const CauseRepr& c) {
  require_non_negative(pm);
  validate_cause(pm, c);
  const std::size_t n = pm.size();
  mpz_class scale = weight_scale(pm);
  auto step = scaled_steps(pm, scale);
  const Rat start = from_level(step[pm.init()]);

  if (auto q = trigger_set(pm, c)) {
    auto stop = mask_of(n, *q);
    auto tail = first_hit_tail(pm, stop, step);
    if (tail.leaks[pm.init()]) throw CauseError("cause does not cover all paths to error");
    return (tail.h[pm.init()] * start + tail.g[pm.init()]) / scale;
  }

  if (const auto* th = std::get_if<ThresholdCause>(&c)) {
    // Below level `cut` the thresholds decide; from `cut` on only +inf thresholds can pick.
    std::size_t cut = 0;
    std::vector<bool> always(n, false);
    for (const auto& [s, t] : th->t) {
      if (!pm.in_sp(s)) continue;
      if (t.is_pos_inf()) {
        always[s] = true;
      } else if (t.is_finite()) {
        mpz_class lvl = -floor_of(-t.value() * scale);
        if (lvl > 0) {
          if (!lvl.fits_ulong_p()) throw LimitError("threshold level does not fit a level index");
          cut = std::max<std::size_t>(cut, lvl.get_ui());
        }
      }
    }
    auto tail = first_hit_tail(pm, always, step);
    auto hits = [&](StateId s, std::size_t w) {
      if (!pm.in_sp(s)) return false;
      auto it = th->t.find(s);
      return it != th->t.end() && ExtRat(Rat(from_level(w) / scale)) < it->second;
    };
    using Node = std::pair<StateId, std::size_t>;
    std::map<Node, std::size_t> var;
    std::vector<Node> nodes;
    std::vector<SparseRow> p;
    std::vector<Rat> b;
    // Returns the index of an open node, or the constant contribution through `constant`.
    std::function<std::optional<std::size_t>(StateId, std::size_t, Rat&)> classify = [&](StateId s, std::size_t w,
                                                                                          Rat& constant) {
      if (w >= cut) {
        if (tail.leaks[s]) throw CauseError("cause does not cover all paths to error");
        constant = tail.h[s] * from_level(w) + tail.g[s];
        return std::optional<std::size_t>{};
      }
      if (hits(s, w)) {
        constant = from_level(w);
        return std::optional<std::size_t>{};
      }
      if (s == pm.error()) throw CauseError("cause does not cover all paths to error");
      if (s == pm.safe()) {
        constant = 0;
        return std::optional<std::size_t>{};
      }
      auto [it, fresh] = var.try_emplace(Node{s, w}, nodes.size());
      if (fresh) nodes.emplace_back(s, w);
      return std::optional<std::size_t>{it->second};
    };
    Rat constant;
    auto root = classify(pm.init(), step[pm.init()], constant);
    if (!root) return constant / scale;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      auto [s, w] = nodes[i];
      SparseRow row;
      Rat rhs = 0;
      for (const auto& tr : pm.chain().row(s)) {
        Rat k;
        if (auto j = classify(tr.to, w + step[tr.to], k)) {
          row.emplace_back(*j, tr.prob);
        } else {
          rhs += tr.prob * k;
        }
      }
      p.push_back(std::move(row));
      b.push_back(std::move(rhs));
    }
    auto x = solve_fixpoint(p, std::move(b));
    return x[*root] / scale;
  }

  Rat total = 0;
  std::function<void(const CauseTracker&, StateId, const Rat&)> walk = [&](const CauseTracker& tr, StateId s,
                                                                             const Rat& mass) {
    if (tr.hit()) {
      total += mass * tr.weight();
      return;
    }
    if (s == pm.safe()) return;
    if (sgn(pm.q(s)) > 0 && tr.dead()) throw CauseError("cause does not cover all paths to error");
    for (const auto& t : pm.chain().row(s)) {
      auto next = tr;
      next.push(t.to);
      walk(next, t.to, mass * t.prob);
    }
  };
  CauseTracker start_tracker(pm, c);
  start_tracker.push(pm.init());
  walk(start_tracker, pm.init(), Rat(1));
  return total;
}

CostResult pexpcost_minimal(const PreparedModel& pm, std::size_t max_cells) {
  auto sat = saturation(pm);
  auto table = level_values(pm, sat, max_cells);
  const std::size_t n = pm.size();
  const std::size_t start = table.step_[pm.init()];

  CostResult res;
  res.kind = CostKind::pexpcost;
  res.value = ExtRat(Rat(table.value(pm.init(), start) / sat.scale));
  res.stats.levels = table.top();
  res.stats.iterations = table.iterations_;

  // Largest pick level per state over the pairs the optimal policy visits below the top.
  std::vector<std::optional<std::size_t>> max_pick(n);
  std::set<std::pair<StateId, std::size_t>> seen;
  std::deque<std::pair<StateId, std::size_t>> work;
  if (start < table.top() && !pm.is_terminal(pm.init())) {
    work.emplace_back(pm.init(), start);
    seen.emplace(pm.init(), start);
  }
  while (!work.empty()) {
    auto [s, w] = work.front();
    work.pop_front();
    if (table.picks(s, w)) {
      max_pick[s] = std::max(max_pick[s].value_or(0), w);
      continue;
    }
    for (const auto& tr : pm.chain().row(s)) {
      std::size_t next = w + table.step_[tr.to];
      if (pm.is_terminal(tr.to) || next >= table.top()) continue;
      if (seen.emplace(tr.to, next).second) work.emplace_back(tr.to, next);
    }
  }

  ThresholdCause cause;
  for (auto s : pm.sp()) {
    if (sat.q[s] == 1) {
      cause.t[s] = ExtRat::pos_inf();
    } else if (max_pick[s]) {
      cause.t[s] = ExtRat(Rat(from_level(*max_pick[s] + 1) / sat.scale));
    } else {
      cause.t[s] = ExtRat(Rat(0));
    }
  }
  res.cause = std::move(cause);
  return res;
}

}  // namespace pcause
