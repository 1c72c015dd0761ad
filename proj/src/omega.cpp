#include "pcause/omega.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "pcause/errors.hpp"
#include "pcause/graph.hpp"

namespace pcause {

std::optional<std::size_t> Dra::find(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Dra::next(std::size_t q, const std::string& letter) const {
  auto it = delta.find({q, letter});
  if (it == delta.end()) throw ModelError("automaton has no transition from " + states[q] + " on " + letter);
  return it->second;
}

std::size_t Dra::run(const std::vector<std::string>& word) const {
  std::size_t q = initial;
  for (const auto& letter : word) q = next(q, letter);
  return q;
}

Dra parse_dra(std::string_view text) {
  Dra a;
  bool header = false;
  std::optional<std::size_t> init;
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> raw_pairs;
  std::vector<std::size_t> pair_lines;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t no = 0;
  auto state_of = [&](std::string_view name, std::size_t at) {
    auto q = a.find(name);
    if (!q) throw ModelError("unknown automaton state '" + std::string(name) + "'", at);
    return *q;
  };
  while (std::getline(in, line)) {
    ++no;
    auto tok = tokenize_line(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 1 || tok[0] != "dra") throw ModelError("expected 'dra' header", no);
      header = true;
      continue;
    }
    if (tok[0] == "state") {
      if (tok.size() != 2) throw ModelError("state takes one name", no);
      if (a.find(tok[1])) throw ModelError("duplicate automaton state '" + std::string(tok[1]) + "'", no);
      a.states.emplace_back(tok[1]);
    } else if (tok[0] == "init") {
      if (tok.size() != 2) throw ModelError("init takes one state", no);
      if (init) throw ModelError("duplicate init line", no);
      init = state_of(tok[1], no);
    } else if (tok[0] == "trans") {
      if (tok.size() != 4) throw ModelError("trans takes <q> <letter> <q'>", no);
      auto key = std::pair{state_of(tok[1], no), std::string(tok[2])};
      auto to = state_of(tok[3], no);
      auto [it, fresh] = a.delta.emplace(key, to);
      if (!fresh && it->second != to) throw ModelError("nondeterministic transition on " + key.second, no);
    } else if (tok[0] == "pair") {
      if (tok.size() != 3 || !tok[1].starts_with("E:") || !tok[2].starts_with("F:")) {
        throw ModelError("pair takes E:<q,...> F:<q,...>", no);
      }
      auto split = [](std::string_view list) {
        std::vector<std::string> out;
        while (!list.empty()) {
          auto comma = list.find(',');
          out.emplace_back(list.substr(0, comma));
          if (comma == std::string_view::npos) break;
          list.remove_prefix(comma + 1);
        }
        return out;
      };
      raw_pairs.emplace_back(split(tok[1].substr(2)), split(tok[2].substr(2)));
      pair_lines.push_back(no);
    } else {
      throw ModelError("unknown directive '" + std::string(tok[0]) + "'", no);
    }
  }
  if (!header) throw ModelError("empty automaton");
  if (!init) throw ModelError("automaton has no init line");
  a.initial = *init;
  for (std::size_t i = 0; i < raw_pairs.size(); ++i) {
    std::vector<bool> e(a.states.size(), false), f(a.states.size(), false);
    for (const auto& name : raw_pairs[i].first) e[state_of(name, pair_lines[i])] = true;
    for (const auto& name : raw_pairs[i].second) f[state_of(name, pair_lines[i])] = true;
    a.pairs.emplace_back(std::move(e), std::move(f));
  }
  return a;
}

Dra load_dra(const std::string& path) { return parse_dra(read_file(path)); }

std::optional<StateId> ProductModel::lookup(StateId s, std::size_t a) const {
  auto it = index_.find({s, a});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<StateId> ProductModel::lift(const std::vector<StateId>& m_path) const {
  std::vector<StateId> out;
  for (std::size_t i = 0; i < m_path.size(); ++i) {
    if (i == 0) {
      if (m_path[0] != m_state[chain.init()]) throw CauseError("path does not start in the initial state");
      out.push_back(chain.init());
      continue;
    }
    std::optional<StateId> next;
    for (const auto& tr : chain.row(out.back())) {
      if (m_state[tr.to] == m_path[i]) next = tr.to;
    }
    if (!next) throw CauseError("path is not a path of the model");
    out.push_back(*next);
  }
  return out;
}

PreparedModel ProductModel::prepare(const Rat& p) const {
  if (std::none_of(accepting.begin(), accepting.end(), [](bool b) { return b; })) {
    throw ModelError("no accepting bottom component: the property has probability 0");
  }
  return preprocess(chain, p);
}

ProductModel build_product(const Dtmc& m, const Dra& a) {
  return build_product_from(m, a, m.init(), a.next(a.initial, m.name(m.init())));
}

ProductModel build_product_from(const Dtmc& m, const Dra& a, StateId s0, std::size_t q0) {
  ProductModel prod;
  std::vector<std::pair<StateId, std::size_t>> pairs;
  std::deque<StateId> work;
  auto intern = [&](StateId s, std::size_t q) {
    auto [it, fresh] = prod.index_.try_emplace({s, q}, pairs.size());
    if (fresh) {
      pairs.emplace_back(s, q);
      work.push_back(it->second);
    }
    return it->second;
  };
  intern(s0, q0);
  std::vector<std::vector<std::pair<StateId, Rat>>> rows;
  while (!work.empty()) {
    StateId v = work.front();
    work.pop_front();
    auto [s, q] = pairs[v];
    if (rows.size() <= v) rows.resize(v + 1);
    for (const auto& tr : m.row(s)) rows[v].emplace_back(intern(tr.to, a.next(q, m.name(tr.to))), tr.prob);
  }
  const std::size_t n = pairs.size();
  rows.resize(n);

  Digraph g(n);
  for (StateId v = 0; v < n; ++v) {
    for (const auto& [to, pr] : rows[v]) g[v].push_back(to);
  }
  prod.accepting.assign(n, false);
  prod.bsccs = bottom_components(g);
  for (const auto& comp : prod.bsccs) {
    bool acc = false;
    for (const auto& [e, f] : a.pairs) {
      bool hits_e = false, hits_f = false;
      for (auto v : comp) {
        hits_e = hits_e || e[pairs[v].second];
        hits_f = hits_f || f[pairs[v].second];
      }
      acc = acc || (!hits_e && hits_f);
    }
    prod.bscc_accepting.push_back(acc);
    if (acc) {
      for (auto v : comp) prod.accepting[v] = true;
    }
  }

  std::set<std::string> used;
  DtmcBuilder b;
  for (StateId v = 0; v < n; ++v) {
    auto [s, q] = pairs[v];
    std::string name = m.name(s) + "@" + a.states[q];
    while (!used.insert(name).second) name += '_';
    b.add_state(name, m.weight(s), prod.accepting[v]);
    prod.m_state.push_back(s);
    prod.a_state.push_back(q);
  }
  b.set_init(0);
  for (StateId v = 0; v < n; ++v) {
    for (const auto& [to, pr] : rows[v]) b.add_transition(v, to, pr);
  }
  prod.chain = b.build();
  prod.q = reach_probabilities(prod.chain, prod.accepting);
  return prod;
}

Rat conditional_probability(const Dtmc& m, const Dra& a, const std::vector<StateId>& path) {
  if (path.empty()) throw CauseError("empty path");
  std::vector<std::string> word;
  for (auto s : path) word.push_back(m.name(s));
  auto prod = build_product_from(m, a, path.back(), a.run(word));
  return prod.effect_probability();
}

ProjectedCause transfer_cause(const ProductModel& prod, const PreparedModel& prepared, const CauseRepr& c,
                              std::size_t depth) {
  auto q = trigger_set(prepared, c);
  if (!q) throw UnsupportedError("only trigger-set causes on the product can be projected");
  validate_cause(prepared, c);
  if (avoiding_reach_probability(prepared, mask_of(prepared.size(), *q)) != 0) {
    throw CauseError("cause does not cover the product effect");
  }
  const std::size_t n = prod.chain.size();
  std::vector<bool> stop(n, false);
  for (auto id : *q) {
    for (const auto& name : prepared.members()[id]) stop[*prod.chain.find(name)] = true;
  }

  ProjectedCause out;
  out.depth = depth;
  std::function<void(std::vector<StateId>&, const Rat&)> walk = [&](std::vector<StateId>& path, const Rat& mass) {
    StateId v = path.back();
    if (stop[v]) {
      std::vector<StateId> projected;
      for (auto x : path) projected.push_back(prod.m_state[x]);
      out.members.push_back(std::move(projected));
      return;
    }
    if (sgn(prod.q[v]) == 0) return;
    if (path.size() > depth) {
      out.residual += mass;
      return;
    }
    for (const auto& tr : prod.chain.row(v)) {
      path.push_back(tr.to);
      walk(path, mass * tr.prob);
      path.pop_back();
    }
  };
  std::vector<StateId> path{prod.chain.init()};
  walk(path, Rat(1));
  std::sort(out.members.begin(), out.members.end());

  // The unfolding sees only part of a cyclic product; membership is compared over all product
  // states reachable before the cause.
  std::vector<bool> open(n);
  for (StateId v = 0; v < n; ++v) open[v] = !stop[v] && sgn(prod.q[v]) > 0;
  Digraph g(n);
  for (StateId v = 0; v < n; ++v) {
    if (!open[v]) continue;
    for (const auto& tr : prod.chain.row(v)) g[v].push_back(tr.to);
  }
  auto reach = reachable_from(g, {prod.chain.init()});
  std::map<StateId, std::set<bool>> membership;
  for (StateId v = 0; v < n; ++v) {
    if (reach[v] && (stop[v] || open[v])) membership[prod.m_state[v]].insert(stop[v]);
  }
  bool uniform = std::all_of(membership.begin(), membership.end(), [](const auto& kv) { return kv.second.size() == 1; });
  if (uniform) {
    std::vector<StateId> qm;
    for (const auto& [s, flags] : membership) {
      if (*flags.begin()) qm.push_back(s);
    }
    out.state_based = std::move(qm);
  }
  return out;
}

bool ProjectedReport::ok(double residual_tolerance) const {
  return prefix_free && critical && residual.get_d() < residual_tolerance && uncovered <= residual;
}

ProjectedReport verify_projected(const Dtmc& m, const Dra& a, const Rat& p, const ProjectedCause& c) {
  ProjectedReport rep;
  rep.residual = c.residual;
  auto members = c.members;
  std::sort(members.begin(), members.end());
  for (std::size_t i = 0; i + 1 < members.size(); ++i) {
    const auto& x = members[i];
    const auto& y = members[i + 1];
    if (x.size() <= y.size() && std::equal(x.begin(), x.end(), y.begin())) rep.prefix_free = false;
  }
  std::map<std::pair<StateId, std::size_t>, Rat> cache;
  Rat carried = 0;
  for (const auto& path : members) {
    Rat prob = 1;
    for (std::size_t i = 1; i < path.size(); ++i) prob *= m.prob(path[i - 1], path[i]);
    std::vector<std::string> word;
    for (auto s : path) word.push_back(m.name(s));
    auto key = std::pair{path.back(), a.run(word)};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, conditional_probability(m, a, path)).first;
    if (it->second < p && rep.critical) {
      rep.critical = false;
      rep.critical_witness = path;
    }
    carried += prob * it->second;
  }
  rep.uncovered = conditional_probability(m, a, {m.init()}) - carried;
  return rep;
}

}  // namespace pcause
