#include "support.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "actsense/io.hpp"
#include "actsense/validate.hpp"

namespace actsense::support {

std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(ACTSENSE_FIXTURES_DIR) / name;
}

World w7_world() { return load_world(fixture("w7_world.json")); }
Plan w7_plan(const std::string& name) { return load_plan(fixture("w7_" + name + "_plan.json")); }
World l3_world() { return load_world(fixture("l3_world.json")); }
Plan l3_plan() { return load_plan(fixture("l3_plan.json")); }

namespace {

std::size_t pick(std::mt19937& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

struct PlanParts {
    std::vector<PlanState> states;
    std::map<std::pair<StateId, StateId>, ObservationSet> edges;

    Plan build() const {
        ActionSet actions;
        for (const auto& s : states) {
            actions.insert(s.actions.begin(), s.actions.end());
        }
        ObservationSet observations;
        std::vector<PlanEdge> out;
        for (const auto& [key, obs] : edges) {
            if (obs.empty()) {
                continue;
            }
            observations.insert(obs.begin(), obs.end());
            out.push_back({key.first, key.second, obs});
        }
        return Plan(states, {"init"}, {"term"}, actions, observations, out);
    }
};

using Policy = std::map<std::size_t, ActionSet>;

// Random backchaining: repeatedly solve some unsolved state using actions
// whose outcomes are all solved already.
Policy random_policy(std::mt19937& rng, const World& world) {
    std::vector<bool> solved(world.size(), false);
    for (auto g : world.goal_indices()) {
        solved[g] = true;
    }
    Policy policy;
    while (true) {
        std::vector<std::pair<std::size_t, std::vector<Action>>> ready;
        for (std::size_t v = 0; v < world.size(); ++v) {
            if (solved[v]) {
                continue;
            }
            std::vector<Action> good;
            for (const auto& u : world.available_actions(v)) {
                auto succ = world.successors(v, u);
                if (std::all_of(succ.begin(), succ.end(), [&](std::size_t w) { return solved[w]; })) {
                    good.push_back(u);
                }
            }
            if (!good.empty()) {
                ready.emplace_back(v, std::move(good));
            }
        }
        if (ready.empty()) {
            break;
        }
        auto& [v, good] = ready[pick(rng, ready.size())];
        std::shuffle(good.begin(), good.end(), rng);
        std::size_t k = 1 + (chance(rng, 0.3) ? pick(rng, good.size()) : 0);
        policy[v] = ActionSet(good.begin(), good.begin() + static_cast<long>(k));
        solved[v] = true;
    }
    return policy;
}

std::string branch_state(std::size_t b, const World& world, std::size_t v) {
    if (world.is_goal(v)) {
        return "term";
    }
    return "b" + std::to_string(b) + "_" + world.id(v);
}

PlanParts branch_plan(std::mt19937& rng, const World& world, bool switching) {
    std::size_t branches = 1 + pick(rng, 3);
    std::vector<Policy> policies;
    for (std::size_t b = 0; b < branches; ++b) {
        policies.push_back(random_policy(rng, world));
    }
    PlanParts parts;
    parts.states.push_back({"init", {}});
    parts.states.push_back({"term", {}});
    for (auto g : world.goal_indices()) {
        parts.edges[{"init", "term"}].insert(world.obs(g));
    }
    for (std::size_t b = 0; b < branches; ++b) {
        for (const auto& [v, acts] : policies[b]) {
            auto from = branch_state(b, world, v);
            parts.states.push_back({from, acts});
            parts.edges[{"init", from}].insert(world.obs(v));
            for (const auto& u : acts) {
                for (auto w : world.successors(v, u)) {
                    parts.edges[{from, branch_state(b, world, w)}].insert(world.obs(w));
                    if (switching && !world.is_goal(w) && chance(rng, 0.15)) {
                        auto other = pick(rng, branches);
                        parts.edges[{from, branch_state(other, world, w)}].insert(world.obs(w));
                    }
                }
            }
        }
    }
    return parts;
}

} // namespace

World random_world(std::mt19937& rng, const RandomWorldOptions& options) {
    std::size_t n = options.min_states + pick(rng, options.max_states - options.min_states + 1);
    std::size_t k = 1 + pick(rng, options.max_actions);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    auto id = [](std::size_t i) { return "s" + std::to_string(i); };
    auto act = [](std::size_t a) { return "u" + std::to_string(a); };

    std::map<std::pair<std::size_t, std::size_t>, ActionSet> edges;
    std::set<std::pair<std::size_t, std::size_t>> used;
    // Backbone: each state has an action leading only to earlier states.
    for (std::size_t p = 1; p < n; ++p) {
        std::size_t v = order[p];
        std::size_t a = pick(rng, k);
        used.insert({v, a});
        std::size_t outcomes = chance(rng, options.nondeterminism_prob) ? 2 : 1;
        for (std::size_t o = 0; o < outcomes; ++o) {
            edges[{v, order[pick(rng, p)]}].insert(act(a));
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t a = 0; a < k; ++a) {
            if (used.count({v, a}) || !chance(rng, options.extra_edge_prob)) {
                continue;
            }
            std::size_t outcomes = chance(rng, options.nondeterminism_prob) ? 2 : 1;
            for (std::size_t o = 0; o < outcomes; ++o) {
                edges[{v, pick(rng, n)}].insert(act(a));
            }
        }
    }
    std::vector<WorldState> states;
    StateSet initial;
    ObservationSet observations;
    for (std::size_t i = 0; i < n; ++i) {
        states.push_back({id(i), "o" + std::to_string(i)});
        initial.insert(id(i));
        observations.insert("o" + std::to_string(i));
    }
    ActionSet actions;
    for (std::size_t a = 0; a < k; ++a) {
        actions.insert(act(a));
    }
    std::vector<WorldEdge> out;
    for (const auto& [key, acts] : edges) {
        out.push_back({id(key.first), id(key.second), acts});
    }
    return World(states, initial, {id(order[0])}, observations, actions, out);
}

Plan random_solving_plan(std::mt19937& rng, const World& world) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        auto plan = branch_plan(rng, world, true).build();
        if (solves(plan, world).verdict) {
            return plan;
        }
    }
    return branch_plan(rng, world, false).build();
}

Plan random_plan(std::mt19937& rng, const World& world) {
    std::vector<Action> actions(world.actions().begin(), world.actions().end());
    std::vector<Observation> observations(world.observations().begin(), world.observations().end());
    std::size_t m = 1 + pick(rng, 4);
    PlanParts parts;
    parts.states.push_back({"init", {}});
    parts.states.push_back({"term", {}});
    std::vector<std::string> targets{"term"};
    for (std::size_t i = 0; i < m; ++i) {
        ActionSet label{actions[pick(rng, actions.size())]};
        if (chance(rng, 0.25)) {
            label.insert(actions[pick(rng, actions.size())]);
        }
        parts.states.push_back({"p" + std::to_string(i), label});
        targets.push_back("p" + std::to_string(i));
    }
    for (const auto& y : observations) {
        if (chance(rng, 0.85)) {
            parts.edges[{"init", targets[pick(rng, targets.size())]}].insert(y);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& y : observations) {
            if (chance(rng, 0.5)) {
                parts.edges[{"p" + std::to_string(i), targets[pick(rng, targets.size())]}].insert(y);
            }
        }
    }
    return parts.build();
}

Plan mutated_plan(std::mt19937& rng, const World& world) {
    auto plan = random_solving_plan(rng, world);
    PlanParts parts;
    parts.states = plan.states();
    for (const auto& e : plan.edges()) {
        parts.edges[{e.from, e.to}] = e.observations;
    }
    std::vector<std::size_t> acting;
    for (std::size_t i = 0; i < parts.states.size(); ++i) {
        if (!parts.states[i].actions.empty()) {
            acting.push_back(i);
        }
    }
    std::vector<std::pair<StateId, StateId>> keys;
    for (const auto& [key, _] : parts.edges) {
        keys.push_back(key);
    }
    switch (pick(rng, 4)) {
        case 0: {
            // Drop one observation from one edge.
            auto& obs = parts.edges[keys[pick(rng, keys.size())]];
            auto it = obs.begin();
            std::advance(it, static_cast<long>(pick(rng, obs.size())));
            obs.erase(it);
            break;
        }
        case 1: {
            if (!acting.empty()) {
                auto& s = parts.states[acting[pick(rng, acting.size())]];
                std::vector<Action> all(world.actions().begin(), world.actions().end());
                s.actions.insert(all[pick(rng, all.size())]);
            }
            break;
        }
        case 2: {
            if (!acting.empty()) {
                const auto& from = parts.states[acting[pick(rng, acting.size())]].id;
                const auto& to = parts.states[acting[pick(rng, acting.size())]].id;
                std::vector<Observation> all(world.observations().begin(), world.observations().end());
                parts.edges[{from, to}].insert(all[pick(rng, all.size())]);
            }
            break;
        }
        default: {
            // Redirect an edge to another state.
            auto key = keys[pick(rng, keys.size())];
            auto obs = parts.edges[key];
            parts.edges.erase(key);
            const auto& to = parts.states[1 + pick(rng, parts.states.size() - 1)].id;
            parts.edges[{key.first, to}].insert(obs.begin(), obs.end());
            break;
        }
    }
    return parts.build();
}

bool policy_reaches_goal(const std::map<Observation, Action>& policy, const World& world, long max_steps) {
    std::function<bool(std::size_t, long)> run = [&](std::size_t v, long left) {
        if (world.is_goal(v)) {
            return true;
        }
        if (left == 0) {
            return false;
        }
        auto it = policy.find(world.obs(v));
        if (it == policy.end()) {
            return false;
        }
        auto succ = world.successors(v, it->second);
        if (succ.empty()) {
            return false;
        }
        return std::all_of(succ.begin(), succ.end(), [&](std::size_t w) { return run(w, left - 1); });
    };
    for (auto v : world.initial_indices()) {
        if (!run(v, max_steps)) {
            return false;
        }
    }
    return true;
}

std::optional<ProgressMeasure> brute_force_measure(const Plan& plan, const World& world, long bound) {
    std::vector<long> values(world.size(), 0);
    std::function<std::optional<ProgressMeasure>(std::size_t)> assign = [&](std::size_t i)
        -> std::optional<ProgressMeasure> {
        if (i == world.size()) {
            ProgressMeasure g;
            for (std::size_t v = 0; v < world.size(); ++v) {
                g.values[world.id(v)] = values[v];
            }
            if (verify_progress_measure(g, plan, world).ok) {
                return g;
            }
            return std::nullopt;
        }
        if (world.is_goal(i)) {
            values[i] = 0;
            return assign(i + 1);
        }
        for (long x = 1; x <= bound; ++x) {
            values[i] = x;
            if (auto g = assign(i + 1)) {
                return g;
            }
        }
        return std::nullopt;
    };
    return assign(0);
}

} // namespace actsense::support
