#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pcause/dtmc.hpp"

namespace pcause {

/// Adjacency list over dense vertex ids.
using Digraph = std::vector<std::vector<std::size_t>>;

/// Support graph of a chain (edges with positive probability).
Digraph support_graph(const Dtmc& m);

Digraph reverse(const Digraph& g);

/// Vertices reachable from `sources` using only vertices accepted by `allowed`
/// (sources themselves are always included). An empty filter allows everything.
std::vector<bool> reachable_from(const Digraph& g, const std::vector<std::size_t>& sources,
                                 const std::function<bool(std::size_t)>& allowed = {});

/// Vertices that can reach some vertex in `targets`.
std::vector<bool> can_reach(const Digraph& g, const std::vector<bool>& targets);

/// Strongly connected components in reverse topological order (Tarjan).
/// `restrict_to`, when non-empty, limits the graph to the flagged vertices.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Digraph& g,
                                                                   const std::vector<bool>& restrict_to = {});

/// Bottom SCCs: components without edges leaving the component.
std::vector<std::vector<std::size_t>> bottom_components(const Digraph& g);

/// True when the graph restricted to `restrict_to` has no cycle (self-loops count as cycles).
bool is_acyclic(const Digraph& g, const std::vector<bool>& restrict_to);

}  // namespace pcause
