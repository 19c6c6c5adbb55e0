#include "actsense/progress.hpp"

#include <algorithm>
#include <deque>

#include "digraph.hpp"
#include "solution.hpp"

namespace actsense {

namespace detail {

ProductGraph require_solution(const Plan& plan, const World& world) {
    auto report = solves(plan, world);
    if (!report.verdict) {
        throw NotASolution("plan does not solve the world: " + report.reason);
    }
    return product_graph(plan, world);
}

Adjacency world_projection(const ProductGraph& g) {
    Adjacency adj(g.world().size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        for (const auto& tr : g.transitions(n)) {
            adj[g.node(n).world].push_back(g.node(tr.target).world);
        }
    }
    normalize(adj);
    return adj;
}

} // namespace detail

namespace {

using detail::Adjacency;

// Shortest execution that visits world state `a` and later `b`, both reached
// through product nodes on one path.
std::optional<Execution> single_witness(const ProductGraph& g, std::size_t a, std::size_t b) {
    std::optional<Execution> best;
    for (std::size_t start = 0; start < g.size(); ++start) {
        if (g.node(start).world != a) {
            continue;
        }
        std::vector<std::optional<Execution>> via(g.size());
        std::deque<std::size_t> queue;
        for (const auto& tr : g.transitions(start)) {
            if (!via[tr.target]) {
                via[tr.target] = g.shortest_execution(start).extended(tr.action, tr.obs);
                queue.push_back(tr.target);
            }
        }
        while (!queue.empty()) {
            auto n = queue.front();
            queue.pop_front();
            if (g.node(n).world == b) {
                if (!best || via[n]->action_count() < best->action_count() ||
                    (via[n]->action_count() == best->action_count() && *via[n] < *best)) {
                    best = via[n];
                }
                break;
            }
            for (const auto& tr : g.transitions(n)) {
                if (!via[tr.target]) {
                    via[tr.target] = via[n]->extended(tr.action, tr.obs);
                    queue.push_back(tr.target);
                }
            }
        }
    }
    return best;
}

std::vector<Execution> witness_chain(const ProductGraph& g, const Adjacency& projection,
                                     std::size_t a, std::size_t b) {
    if (auto single = single_witness(g, a, b)) {
        return {*single};
    }
    std::vector<Execution> chain;
    auto path = detail::shortest_path(projection, a, b);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto single = single_witness(g, path[i], path[i + 1]);
        // Every projected edge comes from a product transition.
        chain.push_back(*single);
    }
    return chain;
}

} // namespace

OperativeActionSet operative_action_set(const Plan& plan, const World& world) {
    auto g = detail::require_solution(plan, world);
    OperativeActionSet ops;
    for (const auto& s : world.states()) {
        ops[s.id];
    }
    for (const auto& node : g.nodes()) {
        for (const auto& u : plan.label(node.plan)) {
            if (!world.successors(node.world, u).empty()) {
                ops[world.id(node.world)].insert(u);
            }
        }
    }
    return ops;
}

bool operative_subset(const OperativeActionSet& lhs, const OperativeActionSet& rhs) {
    for (const auto& [v, actions] : lhs) {
        if (actions.empty()) {
            continue;
        }
        auto it = rhs.find(v);
        if (it == rhs.end() || !std::includes(it->second.begin(), it->second.end(),
                                              actions.begin(), actions.end())) {
            return false;
        }
    }
    return true;
}

bool ComesBefore::acyclic() const {
    for (const auto& [a, b] : relation) {
        if (a == b || relation.count({b, a}) != 0) {
            return false;
        }
    }
    return true;
}

ComesBefore comes_before(const Plan& plan, const World& world) {
    auto g = detail::require_solution(plan, world);
    auto reach = detail::reachability(detail::world_projection(g));
    ComesBefore cb;
    for (std::size_t a = 0; a < world.size(); ++a) {
        for (std::size_t b = 0; b < world.size(); ++b) {
            if (reach[a][b]) {
                cb.relation.emplace(world.id(a), world.id(b));
            }
        }
    }
    return cb;
}

std::vector<CrossoverConflict> find_crossovers(const Plan& plan, const World& world) {
    auto g = detail::require_solution(plan, world);
    auto projection = detail::world_projection(g);
    auto reach = detail::reachability(projection);
    std::vector<CrossoverConflict> conflicts;
    for (std::size_t a = 0; a < world.size(); ++a) {
        for (std::size_t b = a; b < world.size(); ++b) {
            bool conflict = a == b
                                ? std::binary_search(projection[a].begin(), projection[a].end(), a)
                                : reach[a][b] && reach[b][a];
            if (!conflict) {
                continue;
            }
            conflicts.push_back({world.id(a), world.id(b), witness_chain(g, projection, a, b),
                                 witness_chain(g, projection, b, a)});
        }
    }
    return conflicts;
}

namespace {

std::string describe(const std::vector<CrossoverConflict>& conflicts) {
    std::string msg = "plan has crossovers:";
    for (const auto& c : conflicts) {
        msg += " {" + c.state_a + ", " + c.state_b + "}";
    }
    return msg;
}

} // namespace

CrossoverError::CrossoverError(std::vector<CrossoverConflict> conflicts)
    : Error(describe(conflicts)), conflicts_(std::move(conflicts)) {}

long ProgressMeasure::lift(const StateSet& states) const {
    long best = 0;
    for (const auto& v : states) {
        best = std::max(best, values.at(v));
    }
    return best;
}

long ProgressMeasure::max_value() const {
    long best = 0;
    for (const auto& [_, g] : values) {
        best = std::max(best, g);
    }
    return best;
}

ProgressMeasure compute_progress_measure(const Plan& plan, const World& world) {
    auto g = detail::require_solution(plan, world);
    auto projection = detail::world_projection(g);
    if (!detail::is_acyclic(projection)) {
        throw CrossoverError(find_crossovers(plan, world));
    }
    auto goal = world.goal_indices().front();
    auto longest = detail::longest_path_to(projection, goal);
    ProgressMeasure measure;
    for (std::size_t v = 0; v < world.size(); ++v) {
        if (!longest[v]) {
            throw std::logic_error("world state '" + world.id(v) + "' cannot reach the goal");
        }
        measure.values[world.id(v)] = *longest[v];
    }
    return measure;
}

MeasureCheck verify_progress_measure(const ProgressMeasure& g, const Plan& plan,
                                     const World& world) {
    MeasureCheck check;
    auto fail = [&](std::string which, std::string reason) {
        check.ok = false;
        check.violated = std::move(which);
        check.reason = std::move(reason);
        return check;
    };
    for (const auto& s : world.states()) {
        auto it = g.values.find(s.id);
        if (it == g.values.end()) {
            return fail("coverage", "no value for world state '" + s.id + "'");
        }
        if (it->second < 0) {
            return fail("range", "negative value at '" + s.id + "'");
        }
    }
    bool goal_zero = false;
    for (std::size_t v = 0; v < world.size(); ++v) {
        long value = g(world.id(v));
        if (value == 0 && !world.is_goal(v)) {
            return fail("a", "non-goal state '" + world.id(v) + "' has value 0");
        }
        if (value == 0 && world.is_goal(v)) {
            goal_zero = true;
        }
    }
    if (!goal_zero) {
        return fail("b", "no goal state has value 0");
    }
    auto language = joint_language(plan, world);
    for (const auto& q : language.executions) {
        if (q.action_count() == 0) {
            continue;
        }
        auto p = q.prefix(q.action_count() - 1);
        long before = g.lift({trace_world(p, world).reached});
        long after = g.lift({trace_world(q, world).reached});
        if (!(before > after)) {
            check.witness = std::make_pair(p, q);
            return fail("c", "value does not decrease from '" + p.str() + "' to '" + q.str() + "'");
        }
    }
    return check;
}

} // namespace actsense
