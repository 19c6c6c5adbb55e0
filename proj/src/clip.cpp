#include "actsense/clip.hpp"

#include <algorithm>
#include <map>

#include "digraph.hpp"
#include "solution.hpp"

namespace actsense {

IGraph::IGraph(std::vector<IGraphVertex> vertices, std::vector<IGraphInitEdge> init_edges,
               std::vector<IGraphActionEdge> action_edges,
               std::vector<IGraphOutcomeEdge> outcome_edges, ActionSet actions,
               ObservationSet observations)
    : vertices_(std::move(vertices)),
      init_edges_(std::move(init_edges)),
      action_edges_(std::move(action_edges)),
      outcome_edges_(std::move(outcome_edges)),
      actions_(std::move(actions)),
      observations_(std::move(observations)) {
    std::sort(init_edges_.begin(), init_edges_.end());
    std::sort(action_edges_.begin(), action_edges_.end());
    std::sort(outcome_edges_.begin(), outcome_edges_.end());
}

std::optional<std::size_t> IGraph::vertex_of(const StateId& world_state) const {
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        if (vertices_[v].world_state == world_state) {
            return v;
        }
    }
    return std::nullopt;
}

ActionSet IGraph::actions(std::size_t v) const {
    ActionSet out;
    for (const auto& e : action_edges_) {
        if (e.source == v) {
            out.insert(e.action);
        }
    }
    return out;
}

std::vector<std::size_t> IGraph::outcomes(const IGraphActionEdge& edge) const {
    std::vector<std::size_t> out;
    for (const auto& o : outcome_edges_) {
        if (o.from == edge) {
            out.push_back(o.target);
        }
    }
    return out;
}

OperativeActionSet IGraph::operative() const {
    OperativeActionSet ops;
    for (const auto& v : vertices_) {
        ops[v.world_state];
    }
    for (const auto& e : action_edges_) {
        ops[vertices_[e.source].world_state].insert(e.action);
    }
    return ops;
}

ComesBefore IGraph::comes_before() const {
    detail::Adjacency adj(vertices_.size());
    for (const auto& o : outcome_edges_) {
        adj[o.from.source].push_back(o.target);
    }
    detail::normalize(adj);
    auto reach = detail::reachability(adj);
    ComesBefore cb;
    for (std::size_t a = 0; a < vertices_.size(); ++a) {
        for (std::size_t b = 0; b < vertices_.size(); ++b) {
            if (reach[a][b]) {
                cb.relation.emplace(vertices_[a].world_state, vertices_[b].world_state);
            }
        }
    }
    return cb;
}

IGraph IGraph::without(const std::set<IGraphActionEdge>& removed) const {
    std::vector<IGraphActionEdge> actions;
    for (const auto& e : action_edges_) {
        if (removed.count(e) == 0) {
            actions.push_back(e);
        }
    }
    std::vector<IGraphOutcomeEdge> outcomes;
    for (const auto& o : outcome_edges_) {
        if (removed.count(o.from) == 0) {
            outcomes.push_back(o);
        }
    }
    return IGraph(vertices_, init_edges_, std::move(actions), std::move(outcomes), actions_,
                  observations_);
}

IGraph build_igraph(const Plan& plan, const World& world) {
    auto g = detail::require_solution(plan, world);

    // One plan-layer vertex per world state the product reaches.
    std::map<std::size_t, StateSet> members;
    for (const auto& node : g.nodes()) {
        members[node.world].insert(plan.id(node.plan));
    }
    std::vector<IGraphVertex> vertices;
    std::map<std::size_t, std::size_t> vertex_of_world;
    for (const auto& [w, plans] : members) {
        vertex_of_world[w] = vertices.size();
        vertices.push_back({world.id(w), plans, world.is_goal(w)});
    }

    std::set<IGraphInitEdge> init;
    for (const auto& e : g.entries()) {
        init.insert({e.obs, vertex_of_world.at(g.node(e.target).world)});
    }
    std::set<IGraphActionEdge> actions;
    std::set<IGraphOutcomeEdge> outcomes;
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto& node = g.node(n);
        std::size_t v = vertex_of_world.at(node.world);
        for (const auto& tr : g.transitions(n)) {
            IGraphActionEdge edge{v, tr.action};
            actions.insert(edge);
            outcomes.insert({edge, tr.obs, vertex_of_world.at(g.node(tr.target).world)});
        }
    }
    return IGraph(std::move(vertices), {init.begin(), init.end()}, {actions.begin(), actions.end()},
                  {outcomes.begin(), outcomes.end()}, world.actions(), world.observations());
}

std::set<IGraphActionEdge> candidate_edges(const IGraph& igraph, const std::vector<StateId>& cycle) {
    std::set<std::size_t> on_cycle;
    for (const auto& w : cycle) {
        if (auto v = igraph.vertex_of(w)) {
            on_cycle.insert(*v);
        }
    }
    std::set<IGraphActionEdge> candidates;
    for (const auto& e : igraph.action_edges()) {
        if (on_cycle.count(e.source) == 0) {
            continue;
        }
        if (!igraph.vertices()[e.source].goal && igraph.actions(e.source).size() < 2) {
            continue;
        }
        for (auto t : igraph.outcomes(e)) {
            if (on_cycle.count(t) != 0) {
                candidates.insert(e);
                break;
            }
        }
    }
    return candidates;
}

Plan representative_plan(const IGraph& igraph) {
    auto name = [&](std::size_t v) { return "q:" + igraph.vertices()[v].world_state; };
    std::vector<PlanState> states{{"init", {}}};
    StateSet terminating;
    for (std::size_t v = 0; v < igraph.vertices().size(); ++v) {
        auto acts = igraph.actions(v);
        if (acts.empty() && igraph.vertices()[v].goal) {
            terminating.insert(name(v));
        }
        states.push_back({name(v), std::move(acts)});
    }
    std::map<std::pair<std::string, std::string>, ObservationSet> grouped;
    for (const auto& e : igraph.init_edges()) {
        grouped[{"init", name(e.target)}].insert(e.obs);
    }
    for (const auto& o : igraph.outcome_edges()) {
        grouped[{name(o.from.source), name(o.target)}].insert(o.obs);
    }
    std::vector<PlanEdge> edges;
    for (auto& [ends, obs] : grouped) {
        edges.push_back({ends.first, ends.second, std::move(obs)});
    }
    return Plan(std::move(states), {"init"}, std::move(terminating), igraph.actions(),
                igraph.observations(), std::move(edges));
}

namespace {

// Index-based view of an I-Graph's plan layer for the search.
struct SearchGraph {
    struct Edge {
        std::size_t source;
        Action action;
        std::vector<std::size_t> outcomes;
    };
    std::size_t vertex_count = 0;
    std::size_t goal = 0;
    std::vector<Edge> edges;  // same order as IGraph::action_edges()
};

SearchGraph make_search_graph(const IGraph& ig) {
    SearchGraph sg;
    sg.vertex_count = ig.vertices().size();
    for (std::size_t v = 0; v < ig.vertices().size(); ++v) {
        if (ig.vertices()[v].goal) {
            sg.goal = v;
        }
    }
    for (const auto& e : ig.action_edges()) {
        auto out = ig.outcomes(e);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        sg.edges.push_back({e.source, e.action, std::move(out)});
    }
    return sg;
}

using Cycle = std::vector<std::size_t>;

class ClipSearch {
public:
    ClipSearch(const IGraph& igraph, const World& world, ClipStats& stats)
        : igraph_(igraph), world_(world), graph_(make_search_graph(igraph)), stats_(stats) {}

    std::map<OperativeActionSet, Representative> run() {
        expand(std::vector<bool>(graph_.edges.size(), false), {});
        return std::move(accepted_);
    }

private:
    detail::Adjacency adjacency(const std::vector<bool>& removed) const {
        detail::Adjacency adj(graph_.vertex_count);
        for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
            if (!removed[i]) {
                const auto& e = graph_.edges[i];
                adj[e.source].insert(adj[e.source].end(), e.outcomes.begin(), e.outcomes.end());
            }
        }
        detail::normalize(adj);
        return adj;
    }

    std::vector<std::size_t> active_degree(const std::vector<bool>& removed) const {
        std::vector<std::size_t> degree(graph_.vertex_count, 0);
        for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
            if (!removed[i]) {
                ++degree[graph_.edges[i].source];
            }
        }
        return degree;
    }

    bool invalid(const std::vector<bool>& removed, const detail::Adjacency& adj) const {
        auto degree = active_degree(removed);
        for (std::size_t v = 0; v < graph_.vertex_count; ++v) {
            if (v != graph_.goal && degree[v] == 0) {
                return true;  // isolated world state
            }
        }
        auto reach = detail::reachability(adj);
        for (std::size_t v = 0; v < graph_.vertex_count; ++v) {
            if (v != graph_.goal && !reach[v][graph_.goal]) {
                return true;
            }
        }
        // A cycle through single-action states can never be broken.
        detail::Adjacency forced(graph_.vertex_count);
        for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
            const auto& e = graph_.edges[i];
            if (!removed[i] && e.source != graph_.goal && degree[e.source] == 1) {
                for (auto t : e.outcomes) {
                    if (t != graph_.goal && degree[t] == 1) {
                        forced[e.source].push_back(t);
                    }
                }
            }
        }
        detail::normalize(forced);
        return !detail::is_acyclic(forced);
    }

    std::vector<std::size_t> candidates(const std::vector<bool>& removed, const Cycle& cycle) const {
        auto degree = active_degree(removed);
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
            const auto& e = graph_.edges[i];
            if (removed[i] || std::find(cycle.begin(), cycle.end(), e.source) == cycle.end()) {
                continue;
            }
            if (e.source != graph_.goal && degree[e.source] < 2) {
                continue;
            }
            bool into_cycle = std::any_of(e.outcomes.begin(), e.outcomes.end(), [&](std::size_t t) {
                return std::find(cycle.begin(), cycle.end(), t) != cycle.end();
            });
            if (into_cycle) {
                out.push_back(i);
            }
        }
        return out;
    }

    void accept(const std::vector<bool>& removed) {
        std::set<IGraphActionEdge> cut;
        for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
            if (removed[i]) {
                cut.insert(igraph_.action_edges()[i]);
            }
        }
        IGraph sub = igraph_.without(cut);
        auto ops = sub.operative();
        if (accepted_.count(ops) != 0) {
            return;
        }
        Plan plan = representative_plan(sub);
        if (!solves(plan, world_).verdict) {
            ++stats_.pruned;
            return;
        }
        ++stats_.leaves_accepted;
        auto measure = compute_progress_measure(plan, world_);
        accepted_.emplace(ops, Representative{std::move(sub), std::move(plan), ops, std::move(measure)});
    }

    void expand(const std::vector<bool>& removed, std::vector<Cycle> deferred) {
        auto adj = adjacency(removed);
        auto cycles = detail::all_cycles(adj);
        // Deferred cycles that no longer exist are irrelevant to the node.
        std::vector<Cycle> live;
        for (auto& c : deferred) {
            if (std::find(cycles.begin(), cycles.end(), c) != cycles.end()) {
                live.push_back(std::move(c));
            }
        }
        std::sort(live.begin(), live.end());
        if (!visited_.emplace(removed, live).second) {
            return;
        }
        ++stats_.nodes_expanded;
        if (invalid(removed, adj)) {
            ++stats_.pruned;
            return;
        }
        const Cycle* chosen = nullptr;
        for (const auto& c : cycles) {
            if (std::find(live.begin(), live.end(), c) == live.end()) {
                chosen = &c;
                break;
            }
        }
        if (chosen == nullptr) {
            if (cycles.empty()) {
                accept(removed);
            } else {
                ++stats_.pruned;
            }
            return;
        }
        auto cand = candidates(removed, *chosen);
        if (cand.size() >= 8 * sizeof(std::size_t) - 1) {
            throw CapExceeded("too many candidate edges on one cycle");
        }
        const std::size_t subsets = std::size_t{1} << cand.size();
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            if (mask == 0) {
                auto next_deferred = live;
                next_deferred.push_back(*chosen);
                expand(removed, std::move(next_deferred));
                continue;
            }
            auto next = removed;
            for (std::size_t b = 0; b < cand.size(); ++b) {
                if (mask & (std::size_t{1} << b)) {
                    next[cand[b]] = true;
                }
            }
            expand(next, live);
        }
    }

    const IGraph& igraph_;
    const World& world_;
    SearchGraph graph_;
    ClipStats& stats_;
    std::set<std::pair<std::vector<bool>, std::vector<Cycle>>> visited_;
    std::map<OperativeActionSet, Representative> accepted_;
};

} // namespace

std::vector<Representative> clip(const Plan& plan, const World& world, const ClipOptions& options,
                                 ClipStats* stats) {
    IGraph igraph = build_igraph(plan, world);
    ClipStats local;
    ClipSearch search(igraph, world, stats ? *stats : local);
    auto accepted = search.run();
    if (accepted.empty()) {
        throw NoRepresentative("every branch of the search was pruned");
    }
    std::vector<Representative> out;
    for (auto& [_, rep] : accepted) {
        if (out.size() == options.max_representatives) {
            break;
        }
        out.push_back(std::move(rep));
    }
    return out;
}

bool is_derived_from(const Plan& candidate, const Plan& base, const World& world) {
    return operative_subset(operative_action_set(candidate, world), operative_action_set(base, world));
}

Plan materialize(const OperativeActionSet& actions, const World& world) {
    const ActionSet none;
    auto acts_of = [&](std::size_t w) -> const ActionSet& {
        auto it = actions.find(world.id(w));
        return it == actions.end() ? none : it->second;
    };
    auto name = [&](std::size_t w) {
        return world.is_goal(w) && acts_of(w).empty() ? std::string("term") : "m:" + world.id(w);
    };
    std::vector<PlanState> states{{"init", {}}};
    StateSet terminating;
    std::map<std::pair<std::string, std::string>, ObservationSet> grouped;
    for (std::size_t w = 0; w < world.size(); ++w) {
        const auto& acts = acts_of(w);
        if (name(w) == "term") {
            states.push_back({"term", {}});
            terminating.insert("term");
        } else {
            states.push_back({name(w), acts});
        }
        if (world.is_initial(w)) {
            grouped[{"init", name(w)}].insert(world.obs(w));
        }
        for (const auto& u : acts) {
            for (auto t : world.successors(w, u)) {
                grouped[{name(w), name(t)}].insert(world.obs(t));
            }
        }
    }
    std::vector<PlanEdge> edges;
    for (auto& [ends, obs] : grouped) {
        edges.push_back({ends.first, ends.second, std::move(obs)});
    }
    return Plan(std::move(states), {"init"}, std::move(terminating), world.actions(),
                world.observations(), std::move(edges));
}

std::set<OperativeActionSet> solving_restrictions(const OperativeActionSet& base, const World& world,
                                                  std::size_t cap) {
    // Per state, the admissible subsets of its base actions.
    std::vector<std::pair<StateId, std::vector<ActionSet>>> choices;
    std::size_t total = 1;
    for (std::size_t w = 0; w < world.size(); ++w) {
        auto it = base.find(world.id(w));
        std::vector<Action> acts;
        if (it != base.end()) {
            acts.assign(it->second.begin(), it->second.end());
        }
        if (acts.size() >= 8 * sizeof(std::size_t) - 1) {
            throw CapExceeded("too many actions at '" + world.id(w) + "'");
        }
        std::vector<ActionSet> options;
        for (std::size_t mask = 0; mask < (std::size_t{1} << acts.size()); ++mask) {
            if (mask == 0 && !world.is_goal(w)) {
                continue;
            }
            ActionSet subset;
            for (std::size_t b = 0; b < acts.size(); ++b) {
                if (mask & (std::size_t{1} << b)) {
                    subset.insert(acts[b]);
                }
            }
            options.push_back(std::move(subset));
        }
        if (options.empty()) {
            return {};
        }
        if (total > cap / options.size()) {
            throw CapExceeded("more than " + std::to_string(cap) + " restrictions to enumerate");
        }
        total *= options.size();
        choices.emplace_back(world.id(w), std::move(options));
    }

    std::set<OperativeActionSet> out;
    std::vector<std::size_t> digit(choices.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
        OperativeActionSet assignment;
        for (std::size_t i = 0; i < choices.size(); ++i) {
            assignment[choices[i].first] = choices[i].second[digit[i]];
        }
        Plan candidate = materialize(assignment, world);
        if (solves(candidate, world).verdict) {
            try {
                compute_progress_measure(candidate, world);
                out.insert(operative_action_set(candidate, world));
            } catch (const CrossoverError&) {
            }
        }
        for (std::size_t i = 0; i < digit.size(); ++i) {
            if (++digit[i] < choices[i].second.size()) {
                break;
            }
            digit[i] = 0;
        }
    }
    return out;
}

std::set<OperativeActionSet> oracle_all_subplans(const Plan& plan, const World& world,
                                                 std::size_t cap) {
    return solving_restrictions(operative_action_set(plan, world), world, cap);
}

std::set<OperativeActionSet> derivable_subplans(const std::vector<Representative>& representatives,
                                                const World& world, std::size_t cap) {
    std::set<OperativeActionSet> out;
    for (const auto& rep : representatives) {
        out.merge(solving_restrictions(rep.operative, world, cap));
    }
    return out;
}

} // namespace actsense
