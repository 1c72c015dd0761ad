#include "pcause/graph.hpp"

#include <algorithm>
#include <utility>

namespace pcause {

Digraph support_graph(const Dtmc& m) {
  Digraph g(m.size());
  for (StateId s = 0; s < m.size(); ++s) {
    for (const auto& tr : m.row(s)) g[s].push_back(tr.to);
  }
  return g;
}

Digraph reverse(const Digraph& g) {
  Digraph r(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (auto w : g[v]) r[w].push_back(v);
  }
  return r;
}

std::vector<bool> reachable_from(const Digraph& g, const std::vector<std::size_t>& sources,
                                 const std::function<bool(std::size_t)>& allowed) {
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack;
  for (auto s : sources) {
    if (!seen[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : g[v]) {
      if (seen[w] || (allowed && !allowed(w))) continue;
      seen[w] = true;
      stack.push_back(w);
    }
  }
  return seen;
}

std::vector<bool> can_reach(const Digraph& g, const std::vector<bool>& targets) {
  std::vector<std::size_t> sources;
  for (std::size_t v = 0; v < targets.size(); ++v) {
    if (targets[v]) sources.push_back(v);
  }
  return reachable_from(reverse(g), sources);
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const Digraph& g,
                                                                   const std::vector<bool>& restrict_to) {
  const std::size_t n = g.size();
  auto in_scope = [&](std::size_t v) { return restrict_to.empty() || restrict_to[v]; };
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  // Iterative Tarjan: frames hold (vertex, next edge position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (!in_scope(root) || index[root] != unvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < g[v].size()) {
        auto w = g[v][pos++];
        if (!in_scope(w)) continue;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      auto finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        auto parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return components;
}

std::vector<std::vector<std::size_t>> bottom_components(const Digraph& g) {
  auto comps = strongly_connected_components(g);
  std::vector<std::size_t> comp_of(g.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (auto v : comps[c]) comp_of[v] = c;
  }
  std::vector<std::vector<std::size_t>> bottoms;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    bool bottom = true;
    for (auto v : comps[c]) {
      for (auto w : g[v]) {
        if (comp_of[w] != c) bottom = false;
      }
    }
    if (bottom) bottoms.push_back(comps[c]);
  }
  return bottoms;
}

bool is_acyclic(const Digraph& g, const std::vector<bool>& restrict_to) {
  auto in_scope = [&](std::size_t v) { return restrict_to.empty() || restrict_to[v]; };
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!in_scope(v)) continue;
    for (auto w : g[v]) {
      if (w == v) return false;
    }
  }
  for (const auto& comp : strongly_connected_components(g, restrict_to)) {
    if (comp.size() > 1) return false;
  }
  return true;
}

}  // namespace pcause
