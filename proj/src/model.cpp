#include "pcause/model.hpp"

#include <algorithm>
#include <unordered_set>

#include "pcause/errors.hpp"
#include "pcause/graph.hpp"
#include "pcause/linear.hpp"

namespace pcause {

std::vector<Rat> reach_probabilities(const Dtmc& m, const std::vector<bool>& targets) {
  const std::size_t n = m.size();
  if (targets.size() != n) throw std::invalid_argument("reach_probabilities: mask size mismatch");
  const auto g = support_graph(m);
  const auto reach = can_reach(g, targets);

  // Unknowns: non-target states with positive probability; every one of them leaks to the
  // targets, so the restricted system is nonsingular.
  std::vector<std::size_t> var(n, n);
  std::vector<StateId> vars;
  for (StateId s = 0; s < n; ++s) {
    if (!targets[s] && reach[s]) {
      var[s] = vars.size();
      vars.push_back(s);
    }
  }
  std::vector<SparseRow> p(vars.size());
  std::vector<Rat> b(vars.size(), Rat(0));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (const auto& tr : m.row(vars[i])) {
      if (targets[tr.to]) {
        b[i] += tr.prob;
      } else if (var[tr.to] != n) {
        p[i].emplace_back(var[tr.to], tr.prob);
      }
    }
  }
  const auto x = solve_fixpoint(p, std::move(b));

  std::vector<Rat> q(n, Rat(0));
  for (StateId s = 0; s < n; ++s) {
    if (targets[s]) q[s] = 1;
    else if (var[s] != n) q[s] = x[var[s]];
  }
  return q;
}

std::vector<Rat> reach_probabilities(const Dtmc& m, const std::vector<StateId>& targets) {
  std::vector<bool> mask(m.size(), false);
  for (auto t : targets) mask.at(t) = true;
  return reach_probabilities(m, mask);
}

std::optional<StateId> PreparedModel::resolve(std::string_view name) const {
  if (auto s = chain_.find(name)) return s;
  if (auto o = original_.find(name)) return original_to_prepared_[*o];
  return std::nullopt;
}

StateId PreparedModel::resolve_or_throw(std::string_view name) const {
  if (auto s = resolve(name)) return *s;
  if (original_.find(name)) throw ModelError("state '" + std::string(name) + "' is unreachable and was pruned");
  throw ModelError("unknown state '" + std::string(name) + "'");
}

PreparedModel PreparedModel::with_weights(const std::vector<Rat>& weights) const {
  PreparedModel out = *this;
  out.chain_ = chain_.with_weights(weights);
  out.error_weight_ambiguous_ = false;
  out.safe_weight_ambiguous_ = false;
  return out;
}

namespace {

enum class Group { keep, error, safe, pruned };

// Common weight of the merged members, or 0 with `ambiguous` set when they differ.
Rat merged_weight(const Dtmc& m, const std::vector<StateId>& members, bool& ambiguous) {
  ambiguous = false;
  if (members.empty()) return 0;
  Rat w = m.weight(members.front());
  for (auto s : members) {
    if (m.weight(s) != w) {
      ambiguous = true;
      return 0;
    }
  }
  return w;
}

std::string merged_name(const Dtmc& m, const std::vector<StateId>& members, const std::string& base,
                        const std::unordered_set<std::string>& taken) {
  if (members.size() == 1) return m.name(members.front());
  std::string name = base;
  while (taken.contains(name)) name += "_";
  return name;
}

}  // namespace

PreparedModel preprocess(const Dtmc& m, const Rat& p) {
  if (sgn(p) <= 0 || p > 1) throw ModelError("threshold p must satisfy 0 < p <= 1, got " + to_string(p));
  const std::size_t n = m.size();
  std::vector<bool> target(n, false);
  bool any_target = false;
  for (StateId s = 0; s < n; ++s) {
    target[s] = m.is_target(s);
    any_target = any_target || target[s];
  }
  if (!any_target) throw ModelError("model has no target state");

  const auto g = support_graph(m);
  const auto positive = can_reach(g, target);

  // Reachability from init, not expanding through states that get collapsed.
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack{m.init()};
  seen[m.init()] = true;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (target[v] || !positive[v]) continue;
    for (auto w : g[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }

  PreparedModel pm;
  pm.original_ = m;
  pm.p_ = p;

  std::vector<Group> group(n);
  std::vector<StateId> error_members, safe_members;
  std::vector<std::string> pruned;
  for (StateId s = 0; s < n; ++s) {
    if (!seen[s]) {
      group[s] = Group::pruned;
      pruned.push_back(m.name(s));
    } else if (target[s]) {
      group[s] = Group::error;
      error_members.push_back(s);
    } else if (!positive[s]) {
      group[s] = Group::safe;
      safe_members.push_back(s);
    } else {
      group[s] = Group::keep;
    }
  }
  if (!pruned.empty()) {
    std::string msg = "pruned " + std::to_string(pruned.size()) + " unreachable state(s):";
    for (const auto& name : pruned) msg += " " + name;
    pm.warnings_.push_back(std::move(msg));
  }

  // Kept states in original order, then error, then safe.
  std::unordered_set<std::string> taken;
  for (StateId s = 0; s < n; ++s) {
    if (group[s] == Group::keep) taken.insert(m.name(s));
  }
  const std::string error_name = merged_name(m, error_members, "error", taken);
  taken.insert(error_name);
  const std::string safe_name = merged_name(m, safe_members, "safe", taken);

  bool error_ambiguous = false, safe_ambiguous = false;
  const Rat error_weight = merged_weight(m, error_members, error_ambiguous);
  const Rat safe_weight = merged_weight(m, safe_members, safe_ambiguous);
  if (error_ambiguous) pm.warnings_.push_back("merged target states have different weights; error weight set to 0");
  if (safe_ambiguous) pm.warnings_.push_back("merged safe states have different weights; safe weight set to 0");
  pm.error_weight_ambiguous_ = error_ambiguous;
  pm.safe_weight_ambiguous_ = safe_ambiguous;

  DtmcBuilder b;
  std::vector<std::optional<StateId>> map(n);
  for (StateId s = 0; s < n; ++s) {
    if (group[s] == Group::keep) {
      map[s] = b.add_state(m.name(s), m.weight(s));
      pm.members_.push_back({m.name(s)});
    }
  }
  const StateId err = b.add_state(error_name, error_weight, true, false);
  const StateId safe = b.add_state(safe_name, safe_weight, false, true);
  pm.members_.emplace_back();
  pm.members_.emplace_back();
  for (auto s : error_members) {
    map[s] = err;
    pm.members_[err].push_back(m.name(s));
  }
  for (auto s : safe_members) {
    map[s] = safe;
    pm.members_[safe].push_back(m.name(s));
  }

  for (StateId s = 0; s < n; ++s) {
    if (group[s] != Group::keep) continue;
    std::vector<Rat> acc(b.size(), Rat(0));
    for (const auto& tr : m.row(s)) acc[*map[tr.to]] += tr.prob;
    for (StateId t = 0; t < acc.size(); ++t) {
      if (sgn(acc[t]) > 0) b.add_transition(*map[s], t, acc[t]);
    }
  }
  b.add_transition(err, err, Rat(1));
  b.add_transition(safe, safe, Rat(1));
  b.set_init(*map[m.init()]);

  pm.chain_ = b.build();
  pm.error_ = err;
  pm.safe_ = safe;
  pm.original_to_prepared_ = std::move(map);
  pm.trivial_ = pm.chain_.init() == safe;
  if (pm.trivial_) pm.warnings_.push_back("initial state cannot reach a target state");

  pm.q_ = reach_probabilities(pm.chain_, std::vector<StateId>{err});
  pm.in_sp_.assign(pm.size(), false);
  for (StateId s = 0; s < pm.size(); ++s) {
    if (pm.q_[s] >= p) {
      pm.in_sp_[s] = true;
      pm.sp_.push_back(s);
    }
  }
  return pm;
}

FinPath make_path(const PreparedModel& pm, const std::vector<StateId>& states) {
  if (states.empty()) throw CauseError("empty path");
  if (states.front() != pm.init()) throw CauseError("path does not start in the initial state");
  FinPath path;
  path.states = states;
  path.weight = pm.weight(states.front());
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i] >= pm.size()) throw CauseError("path state out of range");
    Rat pr = pm.chain().prob(states[i - 1], states[i]);
    if (sgn(pr) == 0) {
      throw CauseError("path " + format_path(pm, states) + " is not a path of the model");
    }
    path.prob *= pr;
    path.weight += pm.weight(states[i]);
  }
  return path;
}

FinPath make_path(const PreparedModel& pm, const std::vector<std::string>& names) {
  std::vector<StateId> states;
  states.reserve(names.size());
  for (const auto& name : names) states.push_back(pm.resolve_or_throw(name));
  return make_path(pm, states);
}

std::string format_path(const PreparedModel& pm, const std::vector<StateId>& states) {
  std::string out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0) out += ' ';
    out += pm.name(states[i]);
  }
  return out;
}

}  // namespace pcause
