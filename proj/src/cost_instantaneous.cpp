#include "pcause/cost_instantaneous.hpp"

#include <algorithm>

#include "pcause/errors.hpp"
#include "pcause/graph.hpp"
#include "pcause/linear.hpp"
#include "pcause/model.hpp"
#include "pcause/ssp.hpp"

namespace pcause {

namespace {

std::vector<bool> stop_mask(const InstModel& im, const std::vector<StateId>& q) {
  std::vector<bool> stop(im.chain.size(), false);
  for (auto s : q) {
    if (s >= stop.size() || !im.in_sp[s]) throw CauseError("trigger states must lie in S_p");
    stop[s] = true;
  }
  for (StateId s = 0; s < stop.size(); ++s) stop[s] = stop[s] || im.terminal(s);
  return stop;
}

Rat expected_stop_weight(const InstModel& im, const std::vector<bool>& stop, const std::vector<Rat>& w) {
  const std::size_t n = im.chain.size();
  if (stop[im.chain.init()]) return w[im.chain.init()];
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
    for (const auto& tr : im.chain.row(vars[i])) {
      if (var[tr.to] != n) {
        p[i].emplace_back(var[tr.to], tr.prob);
      } else {
        b[i] += tr.prob * w[tr.to];
      }
    }
  }
  return solve_fixpoint(p, std::move(b))[var[im.chain.init()]];
}

std::vector<Rat> f_zeroed(const InstModel& im) {
  auto w = im.chain.weights();
  for (StateId s = 0; s < w.size(); ++s) {
    if (im.safe_set[s]) w[s] = 0;
  }
  return w;
}

// States reachable from init when paths stop at `stop`.
std::vector<bool> reached(const InstModel& im, const std::vector<bool>& stop) {
  Digraph g(im.chain.size());
  for (StateId s = 0; s < g.size(); ++s) {
    if (stop[s]) continue;
    for (const auto& tr : im.chain.row(s)) g[s].push_back(tr.to);
  }
  return reachable_from(g, {im.chain.init()});
}

CostResult inst_ssp(const InstModel& im, const std::vector<Rat>& w, CostKind kind) {
  const std::size_t n = im.chain.size();
  CostResult res;
  res.kind = kind;
  std::vector<StateId> q;
  for (StateId s = 0; s < n; ++s) {
    if (im.error_set[s]) q.push_back(s);
  }
  const StateId init = im.chain.init();
  if (im.terminal(init)) {
    res.value = ExtRat(w[init]);
    res.cause = StateBasedCause{q};
    return res;
  }
  std::vector<std::size_t> index(n, n);
  std::vector<StateId> states;
  for (StateId s = 0; s < n; ++s) {
    if (!im.terminal(s)) {
      index[s] = states.size();
      states.push_back(s);
    }
  }
  SspProblem problem;
  for (auto s : states) {
    std::vector<SspAction> acts;
    if (im.in_sp[s]) acts.push_back(SspAction{w[s], {}});
    SspAction cont{Rat(0), {}};
    for (const auto& tr : im.chain.row(s)) {
      if (index[tr.to] == n) {
        cont.cost += tr.prob * w[tr.to];
      } else {
        cont.next.emplace_back(index[tr.to], tr.prob);
      }
    }
    acts.push_back(std::move(cont));
    problem.actions.push_back(std::move(acts));
  }
  auto sol = solve_ssp(problem);
  res.stats.iterations = sol.iterations;
  res.value = ExtRat(sol.value[index[init]]);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (im.in_sp[states[i]] && sol.policy[i] == 0) q.push_back(states[i]);
  }
  std::sort(q.begin(), q.end());
  res.cause = StateBasedCause{q};
  return res;
}

}  // namespace

std::vector<StateId> InstModel::sp() const {
  std::vector<StateId> out;
  for (StateId s = 0; s < in_sp.size(); ++s) {
    if (in_sp[s]) out.push_back(s);
  }
  return out;
}

InstModel make_inst_model(const Dtmc& m, const Rat& p) {
  if (sgn(p) <= 0 || p > 1) throw ModelError("p must lie in (0, 1]");
  InstModel im{m, p, {}, {}, {}, {}};
  const std::size_t n = m.size();
  im.error_set.assign(n, false);
  for (StateId s = 0; s < n; ++s) im.error_set[s] = m.is_target(s);
  if (std::none_of(im.error_set.begin(), im.error_set.end(), [](bool b) { return b; })) {
    throw ModelError("model has no target state");
  }
  im.q = reach_probabilities(m, im.error_set);
  im.safe_set.assign(n, false);
  im.in_sp.assign(n, false);
  for (StateId s = 0; s < n; ++s) {
    im.safe_set[s] = sgn(im.q[s]) == 0;
    im.in_sp[s] = im.q[s] >= p;
  }
  return im;
}

Rat expcost_inst_of(const InstModel& im, const std::vector<StateId>& q) {
  return expected_stop_weight(im, stop_mask(im, q), im.chain.weights());
}

Rat pexpcost_inst_of(const InstModel& im, const std::vector<StateId>& q) {
  return expected_stop_weight(im, stop_mask(im, q), f_zeroed(im));
}

ExtRat maxcost_inst_of(const InstModel& im, const std::vector<StateId>& q) {
  auto stop = stop_mask(im, q);
  auto seen = reached(im, stop);
  ExtRat best = ExtRat::neg_inf();
  for (StateId s = 0; s < seen.size(); ++s) {
    if (seen[s] && stop[s] && !im.safe_set[s]) best = std::max(best, ExtRat(im.chain.weight(s)));
  }
  return best;
}

CostResult expcost_inst_minimal(const InstModel& im) {
  return inst_ssp(im, im.chain.weights(), CostKind::expcost_inst);
}

CostResult pexpcost_inst_minimal(const InstModel& im) { return inst_ssp(im, f_zeroed(im), CostKind::pexpcost_inst); }

CostResult maxcost_inst_minimal(const InstModel& im, std::vector<StateId>* order) {
  auto pool = im.sp();
  std::stable_sort(pool.begin(), pool.end(),
                   [&](StateId a, StateId b) { return im.chain.weight(a) < im.chain.weight(b); });
  const std::size_t n = im.chain.size();
  std::vector<bool> removed(n, false);
  std::vector<StateId> q;
  CostResult res;
  res.kind = CostKind::maxcost_inst;
  res.value = ExtRat::neg_inf();
  auto error_reachable = [&] {
    std::vector<bool> stop(n);
    for (StateId s = 0; s < n; ++s) stop[s] = removed[s] || im.safe_set[s];
    if (stop[im.chain.init()]) return false;
    auto seen = reached(im, stop);
    for (StateId s = 0; s < n; ++s) {
      if (seen[s] && im.error_set[s] && !removed[s]) return true;
    }
    return false;
  };
  for (auto s : pool) {
    if (!error_reachable()) break;
    removed[s] = true;
    q.push_back(s);
    res.value = ExtRat(im.chain.weight(s));
    ++res.stats.iterations;
  }
  if (order) *order = q;
  for (StateId s = 0; s < n; ++s) {
    if (im.error_set[s]) q.push_back(s);
  }
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  res.cause = StateBasedCause{q};
  return res;
}

}  // namespace pcause
