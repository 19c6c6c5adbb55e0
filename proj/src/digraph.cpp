#include "digraph.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace actsense::detail {

void normalize(Adjacency& adj) {
    for (auto& out : adj) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
}

std::vector<std::vector<bool>> reachability(const Adjacency& adj) {
    const std::size_t n = adj.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack(adj[s].begin(), adj[s].end());
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (reach[s][v]) {
                continue;
            }
            reach[s][v] = true;
            for (auto t : adj[v]) {
                if (!reach[s][t]) {
                    stack.push_back(t);
                }
            }
        }
    }
    return reach;
}

// Kahn's algorithm
bool is_acyclic(const Adjacency& adj) {
    std::vector<std::size_t> in_degree(adj.size(), 0);
    for (const auto& out : adj) {
        for (auto t : out) {
            ++in_degree[t];
        }
    }
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < adj.size(); ++v) {
        if (in_degree[v] == 0) {
            stack.push_back(v);
        }
    }
    std::size_t removed = 0;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        ++removed;
        for (auto t : adj[v]) {
            if (--in_degree[t] == 0) {
                stack.push_back(t);
            }
        }
    }
    return removed == adj.size();
}

std::vector<std::optional<long>> longest_path_to(const Adjacency& adj, std::size_t target) {
    std::vector<std::optional<long>> memo(adj.size());
    std::vector<bool> done(adj.size(), false);
    std::function<std::optional<long>(std::size_t)> visit = [&](std::size_t v) -> std::optional<long> {
        if (done[v]) {
            return memo[v];
        }
        std::optional<long> best;
        if (v == target) {
            best = 0;
        }
        for (auto t : adj[v]) {
            if (auto d = visit(t)) {
                if (!best || *d + 1 > *best) {
                    best = *d + 1;
                }
            }
        }
        done[v] = true;
        memo[v] = best;
        return best;
    };
    for (std::size_t v = 0; v < adj.size(); ++v) {
        visit(v);
    }
    return memo;
}

std::vector<std::size_t> shortest_path(const Adjacency& adj, std::size_t from, std::size_t to) {
    const std::size_t none = adj.size();
    std::vector<std::size_t> parent(adj.size(), none);
    std::vector<bool> seen(adj.size(), false);
    std::deque<std::size_t> queue;
    for (auto t : adj[from]) {
        if (!seen[t]) {
            seen[t] = true;
            parent[t] = from;
            queue.push_back(t);
        }
    }
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (v == to) {
            std::vector<std::size_t> path{to};
            auto cur = parent[to];
            while (cur != from) {
                path.push_back(cur);
                cur = parent[cur];
            }
            path.push_back(from);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (auto t : adj[v]) {
            if (!seen[t]) {
                seen[t] = true;
                parent[t] = v;
                queue.push_back(t);
            }
        }
    }
    return {};
}

std::vector<std::vector<std::size_t>> all_cycles(const Adjacency& adj) {
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(adj.size(), false);
    // Each cycle is found once, from its smallest vertex, using only larger
    // vertices after it.
    std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t start, std::size_t v) {
        for (auto t : adj[v]) {
            if (t == start) {
                cycles.push_back(path);
            } else if (t > start && !on_path[t]) {
                on_path[t] = true;
                path.push_back(t);
                extend(start, t);
                path.pop_back();
                on_path[t] = false;
            }
        }
    };
    for (std::size_t s = 0; s < adj.size(); ++s) {
        path = {s};
        on_path[s] = true;
        extend(s, s);
        on_path[s] = false;
    }
    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) {
            return a.size() < b.size();
        }
        return a < b;
    });
    return cycles;
}

std::vector<std::size_t> shortest_cycle(const Adjacency& adj,
                                        const std::vector<std::vector<std::size_t>>& skip) {
    for (auto& c : all_cycles(adj)) {
        if (std::find(skip.begin(), skip.end(), c) == skip.end()) {
            return c;
        }
    }
    return {};
}

} // namespace actsense::detail
