#include "pcause/cost_expected.hpp"

#include <functional>

#include "pcause/errors.hpp"
#include "pcause/linear.hpp"

namespace pcause {

ExpcostSsp expcost_ssp(const PreparedModel& pm) {
  ExpcostSsp out;
  const std::size_t n = pm.size();
  out.index_of.assign(n, n);
  for (StateId s = 0; s < n; ++s) {
    if (pm.is_terminal(s)) continue;
    out.index_of[s] = out.state_of.size();
    out.state_of.push_back(s);
  }
  for (auto s : out.state_of) {
    std::vector<SspAction> acts;
    if (pm.in_sp(s)) acts.push_back(SspAction{Rat(0), {}});
    SspAction cont{Rat(0), {}};
    for (const auto& tr : pm.chain().row(s)) {
      cont.cost += tr.prob * pm.weight(tr.to);
      if (out.index_of[tr.to] != n) cont.next.emplace_back(out.index_of[tr.to], tr.prob);
    }
    acts.push_back(std::move(cont));
    out.problem.actions.push_back(std::move(acts));
  }
  return out;
}

Rat expcost_of(const PreparedModel& pm, const CauseRepr& c) {
  require_defined_weights(pm, true, true);
  validate_cause(pm, c);
  const std::size_t n = pm.size();
  if (auto q = trigger_set(pm, c)) {
    auto stop = mask_of(n, *q);
    if (avoiding_reach_probability(pm, stop) != 0) throw CauseError("cause does not cover all paths to error");
    stop[pm.error()] = stop[pm.safe()] = true;
    // E(s): expected weight collected after s until the first stop state.
    std::vector<std::size_t> var(n, n);
    std::vector<StateId> vars;
    for (StateId s = 0; s < n; ++s) {
      if (!stop[s]) {
        var[s] = vars.size();
        vars.push_back(s);
      }
    }
    std::vector<SparseRow> p(vars.size());
    std::vector<Rat> b(vars.size(), Rat(0));
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (const auto& tr : pm.chain().row(vars[i])) {
        b[i] += tr.prob * pm.weight(tr.to);
        if (var[tr.to] != n) p[i].emplace_back(var[tr.to], tr.prob);
      }
    }
    auto e = solve_fixpoint(p, std::move(b));
    Rat value = pm.weight(pm.init());
    if (var[pm.init()] != n) value += e[var[pm.init()]];
    return value;
  }
  if (!std::holds_alternative<ExplicitCause>(c)) {
    throw UnsupportedError("expcost_of supports canonical, state-based and explicit causes");
  }
  // A valid explicit cause can only be left towards safe, so the exploration is finite.
  Rat total = 0;
  std::function<void(const CauseTracker&, StateId, const Rat&)> walk = [&](const CauseTracker& tr, StateId s,
                                                                             const Rat& mass) {
    if (tr.hit() || s == pm.safe()) {
      total += mass * tr.weight();
      return;
    }
    if (sgn(pm.q(s)) > 0 && tr.dead()) throw CauseError("cause does not cover all paths to error");
    for (const auto& t : pm.chain().row(s)) {
      auto next = tr;
      next.push(t.to);
      walk(next, t.to, mass * t.prob);
    }
  };
  CauseTracker start(pm, c);
  start.push(pm.init());
  walk(start, pm.init(), Rat(1));
  return total;
}

CostResult expcost_minimal(const PreparedModel& pm) {
  require_defined_weights(pm, true, true);
  CostResult res;
  res.kind = CostKind::expcost;
  auto ssp = expcost_ssp(pm);
  std::vector<StateId> q{pm.error()};
  Rat value = pm.weight(pm.init());
  if (!ssp.state_of.empty()) {
    auto sol = solve_ssp(ssp.problem);
    res.stats.iterations = sol.iterations;
    for (std::size_t i = 0; i < ssp.state_of.size(); ++i) {
      StateId s = ssp.state_of[i];
      if (pm.in_sp(s) && sol.policy[i] == 0) q.push_back(s);
    }
    if (ssp.index_of[pm.init()] != pm.size()) value += sol.value[ssp.index_of[pm.init()]];
  }
  std::sort(q.begin(), q.end());
  res.value = ExtRat(value);
  res.cause = StateBasedCause{q};
  return res;
}

}  // namespace pcause
