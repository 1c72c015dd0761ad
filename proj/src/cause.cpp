#include "pcause/cause.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "pcause/errors.hpp"
#include "pcause/graph.hpp"
#include "pcause/linear.hpp"

namespace pcause {

namespace {

constexpr int kTrigger = 0;
constexpr int kThreshold = 1;
constexpr int kExplicit = 2;
constexpr std::size_t kMaxUnfoldNodes = 1'000'000;

std::vector<StateId> normalized(std::vector<StateId> q) {
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  return q;
}

// BFS path from `from` to the first state of `goal`, never expanding `blocked` states.
std::vector<StateId> shortest_path(const PreparedModel& pm, StateId from, const std::vector<bool>& goal,
                                   const std::vector<bool>& blocked) {
  const std::size_t n = pm.size();
  auto build = [&](StateId v, const std::vector<StateId>& parent) {
    std::vector<StateId> path;
    for (StateId x = v; x != n; x = parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
  };
  std::vector<StateId> parent(n, n);
  std::vector<bool> seen(n, false);
  if (goal[from]) return {from};
  if (!blocked.empty() && blocked[from]) return {};
  std::deque<StateId> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (const auto& tr : pm.chain().row(v)) {
      if (seen[tr.to]) continue;
      seen[tr.to] = true;
      parent[tr.to] = v;
      if (goal[tr.to]) return build(tr.to, parent);
      if (blocked.empty() || !blocked[tr.to]) queue.push_back(tr.to);
    }
  }
  return {};
}

void check_state(const PreparedModel& pm, StateId s) {
  if (s >= pm.size()) throw CauseError("state index " + std::to_string(s) + " out of range");
}

void check_explicit_path(const PreparedModel& pm, const std::vector<StateId>& path) {
  if (path.empty()) throw CauseError("explicit cause contains an empty path");
  for (auto s : path) check_state(pm, s);
  if (path.front() != pm.init()) {
    throw CauseError("path " + format_path(pm, path) + " does not start in the initial state");
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (pm.is_terminal(path[i - 1])) {
      throw CauseError("path " + format_path(pm, path) + " continues after " + pm.name(path[i - 1]));
    }
    if (sgn(pm.chain().prob(path[i - 1], path[i])) == 0) {
      throw CauseError("path " + format_path(pm, path) + " is not a path of the model");
    }
  }
}

bool acyclic_before_absorption(const PreparedModel& pm) {
  std::vector<bool> inner(pm.size(), true);
  inner[pm.error()] = false;
  inner[pm.safe()] = false;
  return is_acyclic(support_graph(pm.chain()), inner);
}

}  // namespace

std::string cause_kind(const CauseRepr& c) {
  switch (c.index()) {
    case 0: return "canonical";
    case 1: return "state_based";
    case 2: return "threshold";
    default: return "explicit";
  }
}

std::optional<std::vector<StateId>> trigger_set(const PreparedModel& pm, const CauseRepr& c) {
  if (std::holds_alternative<CanonicalCause>(c)) return pm.sp();
  if (const auto* sb = std::get_if<StateBasedCause>(&c)) return normalized(sb->q);
  return std::nullopt;
}

std::vector<bool> mask_of(std::size_t n, const std::vector<StateId>& states) {
  std::vector<bool> mask(n, false);
  for (auto s : states) mask.at(s) = true;
  return mask;
}

struct CauseTracker::Trie {
  std::vector<std::map<StateId, std::size_t>> children{1};
  std::vector<bool> member{false};

  void insert(const std::vector<StateId>& path) {
    std::size_t node = 0;
    for (auto s : path) {
      auto it = children[node].find(s);
      if (it == children[node].end()) {
        children.emplace_back();
        member.push_back(false);
        it = children[node].emplace(s, children.size() - 1).first;
      }
      node = it->second;
    }
    member[node] = true;
  }
};

CauseTracker::CauseTracker(const PreparedModel& pm, const CauseRepr& c) : pm_(&pm) {
  if (auto q = trigger_set(pm, c)) {
    kind_ = kTrigger;
    for (auto s : *q) check_state(pm, s);
    q_mask_ = mask_of(pm.size(), *q);
  } else if (const auto* th = std::get_if<ThresholdCause>(&c)) {
    kind_ = kThreshold;
    thresholds_ = std::make_shared<const ThresholdCause>(*th);
  } else {
    kind_ = kExplicit;
    auto trie = std::make_shared<Trie>();
    for (const auto& path : std::get<ExplicitCause>(c).paths) trie->insert(path);
    trie_ = std::move(trie);
  }
}

bool CauseTracker::push(StateId s) {
  ++length_;
  weight_ += pm_->weight(s);
  last_ = s;
  if (hit_) return true;
  switch (kind_) {
    case kTrigger:
      hit_ = q_mask_[s];
      break;
    case kThreshold:
      if (pm_->in_sp(s)) {
        auto it = thresholds_->t.find(s);
        hit_ = it != thresholds_->t.end() && ExtRat(weight_) < it->second;
      }
      break;
    default:
      if (!off_trie_) {
        auto it = trie_->children[node_].find(s);
        if (it == trie_->children[node_].end()) {
          off_trie_ = true;
        } else {
          node_ = it->second;
          hit_ = trie_->member[node_];
        }
      }
      break;
  }
  return hit_;
}

bool CauseTracker::dead() const {
  if (hit_) return false;
  return off_trie_ || (length_ > 0 && pm_->is_terminal(last_));
}

bool is_member(const PreparedModel& pm, const CauseRepr& c, const std::vector<StateId>& path) {
  CauseTracker tracker(pm, c);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (tracker.push(path[i])) return i + 1 == path.size();
  }
  return false;
}

bool is_p_critical(const PreparedModel& pm, const FinPath& path) { return pm.in_sp(path.last()); }

CauseRepr canonical_cause(const PreparedModel& pm) { return StateBasedCause{pm.sp()}; }

bool Dfa::accepts(const std::vector<StateId>& word) const {
  std::size_t q = initial;
  for (auto letter : word) {
    auto it = delta[q].find(letter);
    if (it == delta[q].end()) return false;
    q = it->second;
  }
  return accepting[q];
}

Dfa canonical_dfa(const PreparedModel& pm) {
  const std::size_t n = pm.size();
  Dfa dfa;
  dfa.num_states = n + 1;
  dfa.initial = n;
  dfa.delta.resize(n + 1);
  dfa.accepting.assign(n + 1, false);
  dfa.delta[n][pm.init()] = pm.init();
  for (StateId s = 0; s < n; ++s) {
    dfa.accepting[s] = pm.in_sp(s);
    if (pm.in_sp(s)) continue;
    for (const auto& tr : pm.chain().row(s)) dfa.delta[s][tr.to] = tr.to;
  }
  return dfa;
}

bool VerifyReport::ok(double residual_tolerance) const {
  return prefix_free && critical && covered && to_double(residual) < residual_tolerance;
}

Rat avoiding_reach_probability(const PreparedModel& pm, const std::vector<bool>& avoid) {
  const std::size_t n = pm.size();
  const StateId err = pm.error();
  if (avoid[err] || avoid[pm.init()]) return 0;
  if (pm.init() == err) return 1;
  const auto g = support_graph(pm.chain());
  const auto live = reachable_from(reverse(g), {err}, [&](std::size_t v) { return !avoid[v]; });

  std::vector<std::size_t> var(n, n);
  std::vector<StateId> vars;
  for (StateId s = 0; s < n; ++s) {
    if (s != err && live[s] && !avoid[s]) {
      var[s] = vars.size();
      vars.push_back(s);
    }
  }
  if (var[pm.init()] == n) return 0;
  std::vector<SparseRow> p(vars.size());
  std::vector<Rat> b(vars.size(), Rat(0));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (const auto& tr : pm.chain().row(vars[i])) {
      if (tr.to == err) b[i] += tr.prob;
      else if (var[tr.to] != n) p[i].emplace_back(var[tr.to], tr.prob);
    }
  }
  return solve_fixpoint(p, std::move(b))[var[pm.init()]];
}

VerifyReport verify_cause(const PreparedModel& pm, const CauseRepr& c, std::size_t depth) {
  VerifyReport rep;
  rep.depth = depth;
  const std::vector<bool> to_error = mask_of(pm.size(), {pm.error()});

  if (auto q = trigger_set(pm, c)) {
    for (auto s : *q) {
      check_state(pm, s);
      if (!pm.in_sp(s)) {
        rep.critical = false;
        rep.critical_witness = {s};
        rep.problems.push_back("trigger state " + pm.name(s) + " has q = " + to_string(pm.q(s)) + " < p");
        break;
      }
    }
    const auto avoid = mask_of(pm.size(), *q);
    rep.uncovered_mass = avoiding_reach_probability(pm, avoid);
    rep.covered = sgn(rep.uncovered_mass) == 0;
    if (!rep.covered) rep.coverage_witness = shortest_path(pm, pm.init(), to_error, avoid);
  } else if (const auto* th = std::get_if<ThresholdCause>(&c)) {
    for (const auto& [s, t] : th->t) {
      check_state(pm, s);
      if (!pm.in_sp(s)) {
        rep.critical = false;
        rep.critical_witness = {s};
        rep.problems.push_back("threshold state " + pm.name(s) + " is not in S_p");
        break;
      }
    }
    auto err_it = th->t.find(pm.error());
    if (err_it != th->t.end() && err_it->second.is_pos_inf()) {
      // Every arrival at error is picked at the latest there.
    } else {
      // Forward propagation over (state, accumulated weight).
      std::map<std::pair<StateId, Rat>, Rat> frontier;
      frontier[{pm.init(), pm.weight(pm.init())}] = 1;
      auto picks = [&](StateId s, const Rat& w) {
        if (!pm.in_sp(s)) return false;
        auto it = th->t.find(s);
        return it != th->t.end() && ExtRat(w) < it->second;
      };
      for (std::size_t step = 0; !frontier.empty(); ++step) {
        std::map<std::pair<StateId, Rat>, Rat> next;
        for (const auto& [key, mass] : frontier) {
          const auto& [s, w] = key;
          if (picks(s, w) || s == pm.safe()) continue;
          if (s == pm.error()) {
            rep.uncovered_mass += mass;
            continue;
          }
          if (step >= depth) {
            rep.residual += mass * pm.q(s);
            continue;
          }
          for (const auto& tr : pm.chain().row(s)) next[{tr.to, w + pm.weight(tr.to)}] += mass * tr.prob;
        }
        frontier = std::move(next);
      }
      rep.coverage_exact = sgn(rep.residual) == 0;
      rep.covered = sgn(rep.uncovered_mass) == 0;
      if (!rep.covered) {
        // Depth-first search for a concrete uncovered error path.
        std::vector<StateId> path{pm.init()};
        std::function<bool(CauseTracker)> dfs = [&](CauseTracker tr) {
          if (tr.hit()) return false;
          StateId s = path.back();
          if (s == pm.error()) return true;
          if (s == pm.safe() || path.size() > depth) return false;
          for (const auto& t : pm.chain().row(s)) {
            auto next = tr;
            next.push(t.to);
            path.push_back(t.to);
            if (dfs(next)) return true;
            path.pop_back();
          }
          return false;
        };
        CauseTracker start(pm, c);
        start.push(pm.init());
        if (dfs(start)) rep.coverage_witness = path;
      }
    }
  } else {
    auto paths = std::get<ExplicitCause>(c).paths;
    for (const auto& path : paths) check_explicit_path(pm, path);
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    // A prefix sorts immediately before some extension of it.
    for (std::size_t i = 0; i + 1 < paths.size(); ++i) {
      const auto& a = paths[i];
      const auto& b = paths[i + 1];
      if (a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin())) {
        rep.prefix_free = false;
        rep.prefix_witness = {a, b};
        rep.problems.push_back(format_path(pm, a) + " is a prefix of " + format_path(pm, b));
        break;
      }
    }
    for (const auto& path : paths) {
      if (!pm.in_sp(path.back())) {
        rep.critical = false;
        rep.critical_witness = path;
        rep.problems.push_back("member " + format_path(pm, path) + " is not p-critical");
        break;
      }
    }

    std::vector<std::map<StateId, std::size_t>> children{1};
    std::vector<bool> member{false};
    for (const auto& path : paths) {
      std::size_t node = 0;
      for (auto s : path) {
        auto it = children[node].find(s);
        if (it == children[node].end()) {
          children.emplace_back();
          member.push_back(false);
          it = children[node].emplace(s, children.size() - 1).first;
        }
        node = it->second;
      }
      member[node] = true;
    }

    std::vector<StateId> prefix;
    auto note_uncovered = [&](std::vector<StateId> witness) {
      if (rep.coverage_witness.empty()) rep.coverage_witness = std::move(witness);
    };
    std::function<void(std::size_t, const Rat&)> visit = [&](std::size_t node, const Rat& mass) {
      if (member[node]) return;
      StateId s = prefix.back();
      if (s == pm.error()) {
        rep.uncovered_mass += mass;
        note_uncovered(prefix);
        return;
      }
      if (s == pm.safe()) return;
      for (const auto& tr : pm.chain().row(s)) {
        auto it = children[node].find(tr.to);
        if (it != children[node].end()) {
          prefix.push_back(tr.to);
          visit(it->second, mass * tr.prob);
          prefix.pop_back();
        } else if (sgn(pm.q(tr.to)) > 0) {
          rep.uncovered_mass += mass * tr.prob * pm.q(tr.to);
          auto witness = prefix;
          auto tail = shortest_path(pm, tr.to, to_error, {});
          witness.insert(witness.end(), tail.begin(), tail.end());
          note_uncovered(std::move(witness));
        }
      }
    };
    auto root = children[0].find(pm.init());
    if (root == children[0].end()) {
      rep.uncovered_mass = pm.q(pm.init());
      if (sgn(rep.uncovered_mass) > 0) rep.coverage_witness = shortest_path(pm, pm.init(), to_error, {});
    } else {
      prefix.push_back(pm.init());
      visit(root->second, Rat(1));
    }
    rep.covered = sgn(rep.uncovered_mass) == 0;
  }

  if (!rep.covered) {
    rep.problems.push_back("error reached without a member prefix with probability " + to_string(rep.uncovered_mass) +
                           (rep.coverage_witness.empty() ? "" : ", e.g. " + format_path(pm, rep.coverage_witness)));
  }
  return rep;
}

Unfolding unfold(const PreparedModel& pm, const CauseRepr& c, std::size_t depth) {
  Unfolding out;
  std::size_t nodes = 0;
  std::vector<StateId> path;
  std::function<void(const CauseTracker&, const Rat&)> explore = [&](const CauseTracker& tr, const Rat& mass) {
    if (++nodes > kMaxUnfoldNodes) throw LimitError("unfolding exceeds " + std::to_string(kMaxUnfoldNodes) + " prefixes");
    if (tr.hit()) {
      out.members.push_back(path);
      return;
    }
    if (tr.dead()) return;
    if (path.size() > depth) {
      out.residual += mass;
      return;
    }
    for (const auto& t : pm.chain().row(path.back())) {
      auto next = tr;
      next.push(t.to);
      path.push_back(t.to);
      explore(next, mass * t.prob);
      path.pop_back();
    }
  };
  CauseTracker start(pm, c);
  start.push(pm.init());
  path.push_back(pm.init());
  explore(start, Rat(1));
  std::sort(out.members.begin(), out.members.end());
  return out;
}

bool cause_leq(const PreparedModel& pm, const CauseRepr& a, const CauseRepr& b, std::size_t depth) {
  auto qa = trigger_set(pm, a);
  auto qb = trigger_set(pm, b);
  if (qa && qb) {
    // A first visit to Q_b that is not preceded (or accompanied) by a visit to Q_a violates the order.
    auto ma = mask_of(pm.size(), *qa);
    auto mb = mask_of(pm.size(), *qb);
    std::vector<bool> goal(pm.size()), blocked(pm.size());
    for (StateId s = 0; s < pm.size(); ++s) {
      goal[s] = mb[s] && !ma[s];
      blocked[s] = ma[s] || mb[s];
    }
    return shortest_path(pm, pm.init(), goal, blocked).empty();
  }
  const bool acyclic = acyclic_before_absorption(pm);
  if (acyclic) depth = std::max(depth, pm.size());
  auto ub = unfold(pm, b, depth);
  if (!acyclic && to_double(ub.residual) >= 1e-9) {
    throw LimitError("depth " + std::to_string(depth) + " leaves undecided mass " + std::to_string(to_double(ub.residual)));
  }
  for (const auto& phi : ub.members) {
    CauseTracker tr(pm, a);
    bool found = false;
    for (auto s : phi) {
      if (tr.push(s)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<Transition> CausalMdp::successors(StateId s, Action a) const {
  if (a == Action::cont) return pm_->chain().row(s);
  if (!pick_enabled(s)) throw CauseError("pick is not enabled in " + pm_->name(s));
  return {Transition{pm_->error(), Rat(1)}};
}

Action decide(const PreparedModel& pm, const SchedulerRepr& sched, StateId s, const Rat& w) {
  if (!pm.in_sp(s)) return Action::cont;
  if (const auto* m = std::get_if<MemorylessScheduler>(&sched)) return m->action.at(s);
  const auto& th = std::get<WeightScheduler>(sched).threshold;
  auto it = th.find(s);
  return it != th.end() && ExtRat(w) < it->second ? Action::pick : Action::cont;
}

SchedulerRepr cause_to_scheduler(const PreparedModel& pm, const CauseRepr& c) {
  if (auto q = trigger_set(pm, c)) {
    MemorylessScheduler m{std::vector<Action>(pm.size(), Action::cont)};
    for (auto s : *q) {
      check_state(pm, s);
      if (!pm.in_sp(s)) throw CauseError("pick is not enabled in " + pm.name(s));
      m.action[s] = Action::pick;
    }
    return m;
  }
  if (const auto* th = std::get_if<ThresholdCause>(&c)) return WeightScheduler{th->t};
  throw UnsupportedError("explicit causes have no finite scheduler representation");
}

CauseRepr scheduler_to_cause(const PreparedModel& pm, const SchedulerRepr& s) {
  if (const auto* m = std::get_if<MemorylessScheduler>(&s)) {
    std::vector<StateId> q{pm.error()};
    for (StateId v = 0; v < pm.size(); ++v) {
      if (pm.in_sp(v) && m->action.at(v) == Action::pick) q.push_back(v);
    }
    return StateBasedCause{normalized(std::move(q))};
  }
  ThresholdCause th{std::get<WeightScheduler>(s).threshold};
  // Unpicked arrivals at error belong to the induced cause.
  th.t[pm.error()] = ExtRat::pos_inf();
  return th;
}

std::vector<std::vector<StateId>> scheduler_paths(const PreparedModel& pm, const SchedulerRepr& s,
                                                   std::size_t depth) {
  std::vector<std::vector<StateId>> out;
  std::vector<StateId> path{pm.init()};
  std::size_t nodes = 0;
  std::function<void(const Rat&)> run = [&](const Rat& w) {
    if (++nodes > kMaxUnfoldNodes) throw LimitError("scheduler unfolding too large");
    StateId v = path.back();
    if (decide(pm, s, v, w) == Action::pick || v == pm.error()) {
      out.push_back(path);
      return;
    }
    if (v == pm.safe() || path.size() > depth) return;
    for (const auto& tr : pm.chain().row(v)) {
      path.push_back(tr.to);
      run(w + pm.weight(tr.to));
      path.pop_back();
    }
  };
  run(pm.weight(pm.init()));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> prima_facie_violations(const PreparedModel& pm, const std::vector<StateId>& c) {
  std::vector<std::string> out;
  for (auto s : c) check_state(pm, s);
  const auto reach = reachable_from(support_graph(pm.chain()), {pm.init()});
  bool reachable = std::any_of(c.begin(), c.end(), [&](StateId s) { return reach[s]; });
  if (!reachable) out.push_back("C is not reachable from the initial state");
  if (std::find(c.begin(), c.end(), pm.error()) != c.end()) out.push_back("error must not belong to C");
  for (auto s : c) {
    if (!pm.in_sp(s)) {
      out.push_back("Pr_" + pm.name(s) + "(<>error) = " + to_string(pm.q(s)) + " is below p = " + to_string(pm.p()));
    }
  }
  if (pm.q(pm.init()) >= pm.p()) {
    out.push_back("Pr_init(<>error) = " + to_string(pm.q(pm.init())) + " is not below p = " + to_string(pm.p()));
  }
  return out;
}

CauseRepr prima_facie_to_cause(const PreparedModel& pm, const std::vector<StateId>& c) {
  auto violations = prima_facie_violations(pm, c);
  if (!violations.empty()) {
    std::string msg = "not a p-prima facie cause:";
    for (const auto& v : violations) msg += " " + v + ";";
    msg.pop_back();
    throw CauseError(msg);
  }
  auto q = c;
  q.push_back(pm.error());
  return StateBasedCause{normalized(std::move(q))};
}

void validate_cause(const PreparedModel& pm, const CauseRepr& c) {
  if (auto q = trigger_set(pm, c)) {
    for (auto s : *q) {
      check_state(pm, s);
      if (!pm.in_sp(s)) throw CauseError("state " + pm.name(s) + " is not in S_p");
    }
  } else if (const auto* th = std::get_if<ThresholdCause>(&c)) {
    for (const auto& [s, t] : th->t) {
      check_state(pm, s);
      if (!pm.in_sp(s)) throw CauseError("threshold given for " + pm.name(s) + ", which is not in S_p");
    }
  } else {
    for (const auto& path : std::get<ExplicitCause>(c).paths) check_explicit_path(pm, path);
  }
}

mpz_class weight_scale(const PreparedModel& pm) { return denominator_lcm(pm.chain().weights()); }

}  // namespace pcause
