#include "pcause/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "pcause/cost_expected.hpp"
#include "pcause/cost_maximal.hpp"
#include "pcause/errors.hpp"
#include "pcause/graph.hpp"

namespace pcause {

namespace {

std::vector<std::vector<StateId>> trigger_candidates(const PreparedModel& pm, std::size_t max_free) {
  std::vector<StateId> pool;
  for (auto s : pm.sp()) {
    if (s != pm.error()) pool.push_back(s);
  }
  if (pool.size() > max_free) {
    throw LimitError("subset enumeration over " + std::to_string(pool.size()) + " states exceeds the bound of " +
                     std::to_string(max_free));
  }
  std::vector<std::vector<StateId>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pool.size()); ++mask) {
    std::vector<StateId> q{pm.error()};
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask >> i & 1) q.push_back(pool[i]);
    }
    std::sort(q.begin(), q.end());
    out.push_back(std::move(q));
  }
  return out;
}

bool acyclic_before_terminals(const PreparedModel& pm) {
  std::vector<bool> inner(pm.size());
  for (StateId s = 0; s < pm.size(); ++s) inner[s] = !pm.is_terminal(s);
  return is_acyclic(support_graph(pm.chain()), inner);
}

struct SchedulerChoice {
  Rat value;
  std::vector<std::vector<StateId>> members;
};

}  // namespace

PathEnumeration enumerate_paths(const PreparedModel& pm, std::size_t depth, std::size_t max_paths) {
  if (depth == 0) throw std::invalid_argument("depth must be at least 1");
  PathEnumeration out;
  out.depth = depth;
  std::vector<FinPath> frontier{make_path(pm, std::vector<StateId>{pm.init()})};
  for (std::size_t d = 0;; ++d) {
    std::vector<FinPath> next;
    for (auto& path : frontier) {
      if (pm.is_terminal(path.last())) {
        out.paths.push_back(std::move(path));
        continue;
      }
      if (d == depth) {
        out.residual += path.prob;
        continue;
      }
      for (const auto& tr : pm.chain().row(path.last())) {
        FinPath ext = path;
        ext.states.push_back(tr.to);
        ext.prob *= tr.prob;
        ext.weight += pm.weight(tr.to);
        next.push_back(std::move(ext));
      }
      if (out.paths.size() + next.size() > max_paths) {
        throw LimitError("path enumeration exceeds " + std::to_string(max_paths) + " paths");
      }
    }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  return out;
}

CostResult brute_force_min(const PreparedModel& pm, CostKind kind, std::size_t max_subset_states,
                           std::size_t max_choices) {
  CostResult res;
  res.kind = kind;
  switch (kind) {
    case CostKind::expcost: {
      std::optional<Rat> best;
      for (auto& q : trigger_candidates(pm, max_subset_states)) {
        Rat v = expcost_of(pm, StateBasedCause{q});
        ++res.stats.iterations;
        if (!best || v < *best) {
          best = v;
          res.cause = StateBasedCause{std::move(q)};
        }
      }
      res.value = ExtRat(*best);
      return res;
    }
    case CostKind::maxcost: {
      std::optional<ExtRat> best;
      for (auto& q : trigger_candidates(pm, max_subset_states)) {
        ExtRat v = maxcost_of(pm, StateBasedCause{q});
        ++res.stats.iterations;
        if (!best || v < *best) {
          best = v;
          res.cause = StateBasedCause{std::move(q)};
        }
      }
      res.value = *best;
      return res;
    }
    case CostKind::pexpcost: {
      if (!acyclic_before_terminals(pm)) throw LimitError("scheduler enumeration needs an acyclic chain");
      for (StateId s = 0; s < pm.size(); ++s) {
        if (sgn(pm.weight(s)) < 0) throw UnsupportedError("partial expected cost needs non-negative weights");
      }
      std::size_t choices = 0;
      std::vector<StateId> path;
      std::function<SchedulerChoice(StateId, const Rat&)> best = [&](StateId s, const Rat& acc) -> SchedulerChoice {
        path.push_back(s);
        SchedulerChoice out;
        if (s == pm.error()) {
          out = {acc, {path}};
        } else if (s != pm.safe()) {
          SchedulerChoice cont{Rat(0), {}};
          for (const auto& tr : pm.chain().row(s)) {
            auto sub = best(tr.to, acc + pm.weight(tr.to));
            cont.value += tr.prob * sub.value;
            cont.members.insert(cont.members.end(), sub.members.begin(), sub.members.end());
          }
          if (pm.in_sp(s) && ++choices > max_choices) throw LimitError("too many scheduler choices");
          out = pm.in_sp(s) && acc <= cont.value ? SchedulerChoice{acc, {path}} : std::move(cont);
        }
        path.pop_back();
        return out;
      };
      auto top = best(pm.init(), pm.weight(pm.init()));
      res.stats.iterations = choices;
      res.value = ExtRat(top.value);
      std::sort(top.members.begin(), top.members.end());
      res.cause = ExplicitCause{std::move(top.members)};
      return res;
    }
    default:
      throw UnsupportedError("instantaneous costs use brute_force_inst_min");
  }
}

CostResult brute_force_inst_min(const InstModel& im, CostKind kind, std::size_t max_subset_states) {
  std::vector<StateId> pool, base;
  for (auto s : im.sp()) (im.error_set[s] ? base : pool).push_back(s);
  if (pool.size() > max_subset_states) throw LimitError("subset enumeration exceeds the bound");
  CostResult res;
  res.kind = kind;
  std::optional<ExtRat> best;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pool.size()); ++mask) {
    auto q = base;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask >> i & 1) q.push_back(pool[i]);
    }
    std::sort(q.begin(), q.end());
    ExtRat v;
    switch (kind) {
      case CostKind::expcost_inst:
        v = ExtRat(expcost_inst_of(im, q));
        break;
      case CostKind::pexpcost_inst:
        v = ExtRat(pexpcost_inst_of(im, q));
        break;
      case CostKind::maxcost_inst:
        v = maxcost_inst_of(im, q);
        break;
      default:
        throw UnsupportedError("brute_force_inst_min handles instantaneous kinds only");
    }
    ++res.stats.iterations;
    if (!best || v < *best) {
      best = v;
      res.cause = StateBasedCause{std::move(q)};
    }
  }
  res.value = *best;
  return res;
}

PpGadgets build_pp_gadgets(const Dtmc& m, StateId t, const mpz_class& r) {
  if (t >= m.size()) throw ModelError("gadget anchor state out of range");
  if (m.prob(t, t) != 1) throw ModelError("gadget anchor " + m.name(t) + " must be absorbing");
  std::vector<bool> inner(m.size(), true);
  inner[t] = false;
  for (StateId s = 0; s < m.size(); ++s) {
    if (m.is_target(s)) throw ModelError("gadget base must not contain target states");
    const Rat& w = m.weight(s);
    if (sgn(w) < 0 || w.get_den() != 1) throw ModelError("gadget base needs natural weights");
  }
  if (!is_acyclic(support_graph(m), inner)) throw ModelError("gadget base must be acyclic apart from its anchor");
  if (reach_probabilities(m, std::vector<StateId>{t})[m.init()] != 1) {
    throw ModelError("gadget base must reach its anchor almost surely");
  }
  if (sgn(r) < 0) throw ModelError("R must be a natural number");

  auto fresh = [&](std::string name) {
    while (m.find(name)) name += '_';
    return name;
  };
  const std::string a = fresh("gadget_a"), b = fresh("gadget_b"), c = fresh("gadget_c");
  const std::string error = fresh("error"), safe = fresh("safe");
  auto build = [&](int i) {
    DtmcBuilder bld;
    for (StateId s = 0; s < m.size(); ++s) bld.add_state(m.name(s), m.weight(s));
    StateId sa = bld.add_state(a);
    StateId sc = bld.add_state(c);
    StateId sb = bld.add_state(b, Rat(r + i));
    StateId se = bld.add_state(error, 0, true);
    StateId sf = bld.add_state(safe, 0, false, true);
    bld.set_init(m.init());
    for (StateId s = 0; s < m.size(); ++s) {
      if (s == t) continue;
      for (const auto& tr : m.row(s)) bld.add_transition(s, tr.to, tr.prob);
    }
    bld.add_transition(t, sa, 1);
    bld.add_transition(sa, sf, Rat(2, 3));
    bld.add_transition(sa, sc, Rat(1, 3));
    bld.add_transition(sc, sb, 1);
    bld.add_transition(sb, sf, Rat(1, 2));
    bld.add_transition(sb, se, Rat(1, 2));
    bld.add_transition(se, se, 1);
    bld.add_transition(sf, sf, 1);
    return bld.build();
  };
  return PpGadgets{build(0), build(1), Rat(1, 2)};
}

Rat weight_at_most(const Dtmc& m, StateId t, const Rat& r) {
  Rat total = 0;
  std::function<void(StateId, const Rat&, const Rat&)> walk = [&](StateId s, const Rat& mass, const Rat& acc) {
    if (s == t) {
      if (acc <= r) total += mass;
      return;
    }
    for (const auto& tr : m.row(s)) walk(tr.to, mass * tr.prob, acc + m.weight(tr.to));
  };
  walk(m.init(), Rat(1), m.weight(m.init()));
  return total;
}

}  // namespace pcause
