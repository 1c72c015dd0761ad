#include "pcause/cost_maximal.hpp"

#include <algorithm>

#include "pcause/errors.hpp"
#include "pcause/graph.hpp"

namespace pcause {

namespace {

const ExtRat kNegInf = ExtRat::neg_inf();

bool nonnegative(const PreparedModel& pm) {
  for (StateId s = 0; s < pm.size(); ++s) {
    if (sgn(pm.weight(s)) < 0) return false;
  }
  return true;
}

// States outside S_p with q > 0: the region in which a member cannot end.
std::vector<bool> open_region(const PreparedModel& pm) {
  std::vector<bool> out(pm.size());
  for (StateId s = 0; s < pm.size(); ++s) out[s] = !pm.in_sp(s) && sgn(pm.q(s)) > 0;
  return out;
}

Digraph region_graph(const PreparedModel& pm, const std::vector<bool>& region) {
  Digraph g(pm.size());
  for (StateId s = 0; s < pm.size(); ++s) {
    if (!region[s]) continue;
    for (const auto& tr : pm.chain().row(s)) {
      if (region[tr.to]) g[s].push_back(tr.to);
    }
  }
  return g;
}

// Longest-path relaxation with vertex weights inside one component; true on a positive cycle.
bool positive_cycle_in(const PreparedModel& pm, const Digraph& g, const std::vector<std::size_t>& comp) {
  std::vector<bool> member(pm.size(), false);
  for (auto v : comp) member[v] = true;
  bool self_loop = false;
  for (auto v : comp) self_loop = self_loop || std::find(g[v].begin(), g[v].end(), v) != g[v].end();
  if (comp.size() == 1 && !self_loop) return false;
  std::vector<Rat> dist(pm.size(), Rat(0));
  for (std::size_t round = 0; round <= comp.size(); ++round) {
    bool changed = false;
    for (auto u : comp) {
      for (auto v : g[u]) {
        if (!member[v]) continue;
        Rat cand = dist[u] + pm.weight(v);
        if (dist[v] < cand) {
          dist[v] = cand;
          changed = true;
        }
      }
    }
    if (!changed) return false;
  }
  return true;
}

// Region states that can reach, inside the region, a component with a positive cycle.
std::vector<bool> pumping_states(const PreparedModel& pm) {
  auto region = open_region(pm);
  auto g = region_graph(pm, region);
  std::vector<bool> pumps(pm.size(), false);
  for (const auto& comp : strongly_connected_components(g, region)) {
    if (positive_cycle_in(pm, g, comp)) {
      for (auto v : comp) pumps[v] = true;
    }
  }
  return can_reach(g, pumps);
}

}  // namespace

GameArena build_arena(const PreparedModel& pm) {
  const std::size_t n = pm.size();
  GameArena a;
  a.vertex_of.assign(n, GameArena::npos);
  a.copy_of.assign(n, GameArena::npos);
  auto add = [&](StateId s, bool copy) {
    auto& slot = copy ? a.copy_of[s] : a.vertex_of[s];
    if (slot == GameArena::npos) {
      slot = a.state.size();
      a.state.push_back(s);
      a.min_vertex.push_back(copy);
      a.weight.push_back(copy || !pm.in_sp(s) ? pm.weight(s) : Rat(0));
      a.succ.emplace_back();
      return std::pair{slot, true};
    }
    return std::pair{slot, false};
  };
  auto entry = [&](StateId s) { return add(s, pm.in_sp(s)); };

  a.target = add(pm.error(), false).first;
  std::vector<std::size_t> work;
  auto [start, fresh] = entry(pm.init());
  a.start = start;
  if (fresh) work.push_back(start);
  while (!work.empty()) {
    std::size_t v = work.back();
    work.pop_back();
    StateId s = a.state[v];
    std::vector<std::size_t> next;
    if (a.min_vertex[v]) {
      auto [orig, f] = add(s, false);
      if (f) work.push_back(orig);
      next = {orig, a.target};
    } else if (v != a.target) {
      for (const auto& tr : pm.chain().row(s)) {
        auto [w, f] = entry(tr.to);
        if (f) work.push_back(w);
        next.push_back(w);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    a.succ[v] = std::move(next);
  }
  return a;
}

GameValues solve_game(const PreparedModel& pm, const GameArena& arena) {
  const std::size_t m = arena.size();
  auto pumps = pumping_states(pm);
  GameValues out;
  out.value.assign(m, kNegInf);
  out.value[arena.target] = ExtRat(Rat(0));
  std::vector<bool> fixed(m, false);
  fixed[arena.target] = true;
  for (std::size_t v = 0; v < m; ++v) {
    if (!arena.min_vertex[v] && pumps[arena.state[v]]) {
      out.value[v] = ExtRat::pos_inf();
      fixed[v] = true;
    }
  }

  // Finite values are multiples of 1/D bounded by m * W in absolute value and only increase.
  Rat w_max = 0;
  for (const auto& w : arena.weight) w_max = std::max<Rat>(w_max, abs(w));
  mpz_class cap = mpz_class(Rat(w_max * weight_scale(pm)).get_num()) * 2 * (m + 1) * (m + 1) + 2 * m + 4;

  for (;;) {
    if (mpz_class(static_cast<unsigned long>(out.iterations)) > cap) {
      throw LimitError("game value iteration exceeded its bound");
    }
    ++out.iterations;
    auto next = out.value;
    bool changed = false;
    for (std::size_t v = 0; v < m; ++v) {
      if (fixed[v]) continue;
      ExtRat best = arena.min_vertex[v] ? ExtRat::pos_inf() : kNegInf;
      for (auto u : arena.succ[v]) {
        best = arena.min_vertex[v] ? std::min(best, out.value[u]) : std::max(best, out.value[u]);
      }
      if (arena.succ[v].empty()) best = kNegInf;
      ExtRat val = best.is_finite() ? ExtRat(Rat(arena.weight[v] + best.value())) : best;
      if (val != out.value[v]) {
        next[v] = val;
        changed = true;
      }
    }
    out.value = std::move(next);
    if (!changed) break;
  }

  for (StateId s = 0; s < pm.size(); ++s) {
    if (arena.copy_of[s] == GameArena::npos) continue;
    std::size_t orig = arena.vertex_of[s];
    ExtRat cont = orig == GameArena::npos ? kNegInf : out.value[orig];
    out.pick[s] = out.value[arena.target] <= cont;
  }
  return out;
}

bool has_positive_cycle_outside_sp(const PreparedModel& pm) {
  if (pm.in_sp(pm.init()) || sgn(pm.q(pm.init())) == 0) return false;
  return pumping_states(pm)[pm.init()];
}

ExtRat maxcost_of(const PreparedModel& pm, const CauseRepr& c) {
  require_defined_weights(pm, true, false);
  validate_cause(pm, c);
  const std::size_t n = pm.size();
  if (const auto* ex = std::get_if<ExplicitCause>(&c)) {
    ExtRat best = kNegInf;
    for (const auto& path : ex->paths) {
      Rat w = 0;
      for (auto s : path) w += pm.weight(s);
      best = std::max(best, ExtRat(w));
    }
    return best;
  }
  auto q = trigger_set(pm, c);
  if (!q) throw UnsupportedError("maxcost_of supports canonical, state-based and explicit causes");
  auto stop = mask_of(n, *q);
  if (avoiding_reach_probability(pm, stop) != 0) throw CauseError("cause does not cover all paths to error");
  if (stop[pm.init()]) return ExtRat(pm.weight(pm.init()));

  // Members pass only open states before their last state.
  std::vector<bool> open(n);
  for (StateId s = 0; s < n; ++s) open[s] = !stop[s] && !pm.is_terminal(s);
  auto g = region_graph(pm, open);
  auto reach = reachable_from(g, {pm.init()});
  std::vector<bool> exits(n, false);
  for (StateId s = 0; s < n; ++s) {
    if (!open[s]) continue;
    for (const auto& tr : pm.chain().row(s)) exits[s] = exits[s] || stop[tr.to];
  }
  auto coreach = can_reach(g, exits);
  std::vector<bool> live(n);
  std::size_t count = 0;
  for (StateId s = 0; s < n; ++s) {
    live[s] = open[s] && reach[s] && coreach[s];
    count += live[s];
  }
  if (!live[pm.init()]) return kNegInf;

  std::vector<ExtRat> dist(n, kNegInf);
  dist[pm.init()] = ExtRat(pm.weight(pm.init()));
  for (std::size_t round = 0; round <= count; ++round) {
    bool changed = false;
    for (StateId u = 0; u < n; ++u) {
      if (!live[u] || !dist[u].is_finite()) continue;
      for (auto v : g[u]) {
        if (!live[v]) continue;
        ExtRat cand(Rat(dist[u].value() + pm.weight(v)));
        if (dist[v] < cand) {
          dist[v] = cand;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (round == count) return ExtRat::pos_inf();
  }
  ExtRat best = kNegInf;
  for (StateId u = 0; u < n; ++u) {
    if (!live[u] || !dist[u].is_finite()) continue;
    for (const auto& tr : pm.chain().row(u)) {
      if (stop[tr.to]) best = std::max(best, ExtRat(Rat(dist[u].value() + pm.weight(tr.to))));
    }
  }
  return best;
}

ExtRat maxcost_nonnegative(const PreparedModel& pm) {
  if (!nonnegative(pm)) throw UnsupportedError("the acyclic longest-path route needs non-negative weights");
  require_defined_weights(pm, true, false);
  const std::size_t n = pm.size();
  if (pm.in_sp(pm.init())) return ExtRat(pm.weight(pm.init()));
  if (sgn(pm.q(pm.init())) == 0) return kNegInf;
  if (has_positive_cycle_outside_sp(pm)) return ExtRat::pos_inf();

  // Remaining cycles in the region have weight 0 and collapse into their component.
  auto region = open_region(pm);
  auto g = region_graph(pm, region);
  auto comps = strongly_connected_components(g, region);
  std::vector<std::size_t> comp_of(n, comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (auto v : comps[c]) comp_of[v] = c;
  }
  auto rev = reverse(g);
  std::vector<ExtRat> dist(n, kNegInf);
  for (std::size_t c = comps.size(); c-- > 0;) {
    ExtRat in = kNegInf;
    for (auto v : comps[c]) {
      if (v == pm.init()) in = std::max(in, ExtRat(pm.weight(v)));
      for (auto u : rev[v]) {
        if (comp_of[u] != c && dist[u].is_finite()) in = std::max(in, ExtRat(Rat(dist[u].value() + pm.weight(v))));
      }
    }
    for (auto v : comps[c]) dist[v] = in;
  }
  ExtRat best = kNegInf;
  for (StateId u = 0; u < n; ++u) {
    if (!region[u] || !dist[u].is_finite()) continue;
    for (const auto& tr : pm.chain().row(u)) {
      if (pm.in_sp(tr.to)) best = std::max(best, ExtRat(Rat(dist[u].value() + pm.weight(tr.to))));
    }
  }
  return best;
}

CostResult maxcost_minimal(const PreparedModel& pm) {
  require_defined_weights(pm, true, false);
  CostResult res;
  res.kind = CostKind::maxcost;
  res.cause = canonical_cause(pm);
  if (pm.trivial()) {
    res.value = kNegInf;
    res.stats.notes.push_back("no path reaches error; every cause is empty");
    return res;
  }
  if (has_positive_cycle_outside_sp(pm)) {
    res.value = ExtRat::pos_inf();
    res.stats.notes.push_back("positive cycle outside S_p reachable from init");
    return res;
  }
  if (nonnegative(pm)) {
    res.value = maxcost_nonnegative(pm);
    res.stats.notes.push_back("non-negative weights: canonical cause by longest path");
    return res;
  }
  auto arena = build_arena(pm);
  auto game = solve_game(pm, arena);
  res.stats.iterations = game.iterations;
  res.value = game.value[arena.start];
  std::vector<StateId> q{pm.error()};
  for (const auto& [s, pick] : game.pick) {
    if (pick && s != pm.error()) q.push_back(s);
  }
  std::sort(q.begin(), q.end());
  res.cause = StateBasedCause{q};
  return res;
}

}  // namespace pcause
