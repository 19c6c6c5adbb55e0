#pragma once

// Small index-based digraph helpers shared by the progress and clip modules.

#include <cstddef>
#include <optional>
#include <vector>

namespace actsense::detail {

// Sorted, duplicate-free successor lists.
using Adjacency = std::vector<std::vector<std::size_t>>;

void normalize(Adjacency& adj);

// reach[a][b] iff b is reachable from a in one or more steps.
std::vector<std::vector<bool>> reachability(const Adjacency& adj);

bool is_acyclic(const Adjacency& adj);

// Longest path length (in edges) from each vertex to `target`; nullopt where
// the target is unreachable. Requires an acyclic graph.
std::vector<std::optional<long>> longest_path_to(const Adjacency& adj, std::size_t target);

// Shortest path from `from` to `to` using at least one edge, as a vertex
// sequence starting at `from` and ending at `to`. Empty when none exists.
std::vector<std::size_t> shortest_path(const Adjacency& adj, std::size_t from, std::size_t to);

// Shortest simple cycle, rotated to start at its smallest vertex; ties are
// broken by lexicographic order of that sequence. Cycles in `skip` (in the
// same canonical form) are ignored. Empty when there is none.
std::vector<std::size_t> shortest_cycle(const Adjacency& adj,
                                        const std::vector<std::vector<std::size_t>>& skip = {});

// Every simple cycle in canonical form, sorted by (length, sequence).
std::vector<std::vector<std::size_t>> all_cycles(const Adjacency& adj);

} // namespace actsense::detail
