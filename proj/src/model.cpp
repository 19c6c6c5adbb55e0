#include "actsense/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace actsense {

namespace {

std::string indexed(std::string_view field, std::size_t i) {
    return std::string(field) + "[" + std::to_string(i) + "]";
}

template <class T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <class State>
std::unordered_map<std::string, std::size_t> index_states(std::vector<State>& states) {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].id.empty()) {
            throw InvariantViolation(indexed("states", i) + ".id", "empty state id");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (states[j].id == states[i].id) {
                throw InvariantViolation(indexed("states", i) + ".id",
                                         "duplicate state id '" + states[i].id + "'");
            }
        }
    }
    std::sort(states.begin(), states.end(),
              [](const State& a, const State& b) { return a.id < b.id; });
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < states.size(); ++i) {
        by_id.emplace(states[i].id, i);
    }
    return by_id;
}

std::vector<std::size_t> resolve_subset(const StateSet& subset, std::string_view field,
                                        const std::unordered_map<std::string, std::size_t>& by_id) {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (const auto& id : subset) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw InvariantViolation(indexed(field, k), "unknown state '" + id + "'");
        }
        out.push_back(it->second);
        ++k;
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <class Labels>
void check_edge_labels(const Labels& labels, std::size_t i,
                       std::string_view label_field, const std::set<std::string>& declared,
                       std::string_view what) {
    if (labels.empty()) {
        throw InvariantViolation(indexed("edges", i) + "." + std::string(label_field),
                                 "edge label set is empty");
    }
    std::size_t j = 0;
    for (const auto& l : labels) {
        if (declared.count(l) == 0) {
            throw InvariantViolation(indexed(indexed("edges", i) + "." + std::string(label_field), j),
                                     "undeclared " + std::string(what) + " '" + l + "'");
        }
        ++j;
    }
}

// A partial trace: the current state, the path that reached it, and whether
// more than one distinct path reached it.
struct TraceBranch {
    std::size_t state;
    std::vector<std::size_t> path;
    bool ambiguous = false;
};

void merge_branch(std::vector<TraceBranch>& frontier, TraceBranch branch) {
    for (auto& b : frontier) {
        if (b.state == branch.state) {
            b.ambiguous = true;
            return;
        }
    }
    frontier.push_back(std::move(branch));
}

template <class Graph>
TraceResult finish_trace(const std::vector<TraceBranch>& frontier, const Graph& graph,
                         std::size_t step) {
    if (frontier.size() != 1 || frontier.front().ambiguous) {
        throw TraceError(TraceError::Kind::AmbiguousTrace, step,
                         "execution is consistent with more than one path");
    }
    TraceResult result;
    result.reached = graph.id(frontier.front().state);
    for (auto s : frontier.front().path) {
        result.path.push_back(graph.id(s));
    }
    return result;
}

} // namespace

World::World(std::vector<WorldState> states, StateSet initial, StateSet goals,
             ObservationSet observations, ActionSet actions, std::vector<WorldEdge> edges)
    : states_(std::move(states)),
      initial_(std::move(initial)),
      goals_(std::move(goals)),
      observations_(std::move(observations)),
      actions_(std::move(actions)),
      edges_(std::move(edges)) {
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (observations_.count(states_[i].obs) == 0) {
            throw InvariantViolation(indexed("states", i) + ".obs",
                                     "undeclared observation '" + states_[i].obs + "'");
        }
    }
    by_id_ = index_states(states_);
    initial_idx_ = resolve_subset(initial_, "initial", by_id_);
    goal_idx_ = resolve_subset(goals_, "goals", by_id_);

    out_.resize(states_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        auto from = by_id_.find(e.from);
        if (from == by_id_.end()) {
            throw InvariantViolation(indexed("edges", i) + ".from", "unknown state '" + e.from + "'");
        }
        auto to = by_id_.find(e.to);
        if (to == by_id_.end()) {
            throw InvariantViolation(indexed("edges", i) + ".to", "unknown state '" + e.to + "'");
        }
        check_edge_labels(e.actions, i, "actions", actions_, "action");
        for (const auto& u : e.actions) {
            out_[from->second].push_back({u, to->second});
        }
    }
    for (auto& steps : out_) {
        sort_unique(steps);
    }
    std::sort(edges_.begin(), edges_.end(), [](const WorldEdge& a, const WorldEdge& b) {
        return std::tie(a.from, a.to, a.actions) < std::tie(b.from, b.to, b.actions);
    });
}

std::optional<std::size_t> World::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t World::index(std::string_view id) const {
    auto s = find(id);
    if (!s) {
        throw std::out_of_range("unknown world state '" + std::string(id) + "'");
    }
    return *s;
}

std::vector<std::size_t> World::successors(std::size_t s, const Action& u) const {
    std::vector<std::size_t> out;
    for (const auto& step : transitions(s)) {
        if (step.label == u) {
            out.push_back(step.target);
        }
    }
    return out;
}

ActionSet World::available_actions(std::size_t s) const {
    ActionSet out;
    for (const auto& step : transitions(s)) {
        out.insert(step.label);
    }
    return out;
}

std::vector<std::size_t> World::states_with_obs(const Observation& y) const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < states_.size(); ++s) {
        if (states_[s].obs == y) {
            out.push_back(s);
        }
    }
    return out;
}

Plan::Plan(std::vector<PlanState> states, StateSet initial, StateSet terminating,
           ActionSet actions, ObservationSet observations, std::vector<PlanEdge> edges)
    : states_(std::move(states)),
      initial_(std::move(initial)),
      terminating_(std::move(terminating)),
      actions_(std::move(actions)),
      observations_(std::move(observations)),
      edges_(std::move(edges)) {
    for (std::size_t i = 0; i < states_.size(); ++i) {
        std::size_t j = 0;
        for (const auto& u : states_[i].actions) {
            if (actions_.count(u) == 0) {
                throw InvariantViolation(indexed(indexed("states", i) + ".actions", j),
                                         "undeclared action '" + u + "'");
            }
            ++j;
        }
    }
    // Keep the caller's positions for error messages before sorting.
    std::vector<PlanState> unsorted = states_;
    by_id_ = index_states(states_);
    initial_idx_ = resolve_subset(initial_, "initial", by_id_);
    resolve_subset(terminating_, "terminating", by_id_);

    for (std::size_t i = 0; i < unsorted.size(); ++i) {
        const auto& st = unsorted[i];
        bool boundary = initial_.count(st.id) != 0 || terminating_.count(st.id) != 0;
        if (boundary && !st.actions.empty()) {
            throw InvariantViolation(indexed("states", i) + ".actions",
                                     "initial and terminating states must have an empty action set");
        }
        if (!boundary && st.actions.empty()) {
            throw InvariantViolation(indexed("states", i) + ".actions",
                                     "only initial and terminating states may have an empty action set");
        }
    }

    out_.resize(states_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        auto from = by_id_.find(e.from);
        if (from == by_id_.end()) {
            throw InvariantViolation(indexed("edges", i) + ".from", "unknown state '" + e.from + "'");
        }
        auto to = by_id_.find(e.to);
        if (to == by_id_.end()) {
            throw InvariantViolation(indexed("edges", i) + ".to", "unknown state '" + e.to + "'");
        }
        if (terminating_.count(e.from) != 0) {
            throw InvariantViolation(indexed("edges", i) + ".from",
                                     "terminating state '" + e.from + "' has an outgoing edge");
        }
        check_edge_labels(e.observations, i, "observations", observations_, "observation");
        for (const auto& y : e.observations) {
            out_[from->second].push_back({y, to->second});
        }
    }
    for (auto& steps : out_) {
        sort_unique(steps);
    }
    std::sort(edges_.begin(), edges_.end(), [](const PlanEdge& a, const PlanEdge& b) {
        return std::tie(a.from, a.to, a.observations) < std::tie(b.from, b.to, b.observations);
    });
}

std::optional<std::size_t> Plan::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t Plan::index(std::string_view id) const {
    auto p = find(id);
    if (!p) {
        throw std::out_of_range("unknown plan state '" + std::string(id) + "'");
    }
    return *p;
}

std::vector<std::size_t> Plan::successors(std::size_t p, const Observation& y) const {
    std::vector<std::size_t> out;
    for (const auto& step : transitions(p)) {
        if (step.label == y) {
            out.push_back(step.target);
        }
    }
    return out;
}

Execution::Execution(Observation first) { symbols_.push_back(std::move(first)); }

Execution Execution::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) {
        tokens.push_back(std::move(tok));
    }
    if (tokens.empty() || tokens.size() % 2 == 0) {
        throw Error("an execution must begin and end with an observation: '" + std::string(text) + "'");
    }
    Execution e(tokens[0]);
    for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
        e.append(tokens[i], tokens[i + 1]);
    }
    return e;
}

Execution& Execution::append(Action u, Observation y) {
    symbols_.push_back(std::move(u));
    symbols_.push_back(std::move(y));
    return *this;
}

Execution Execution::extended(const Action& u, const Observation& y) const {
    Execution e = *this;
    e.append(u, y);
    return e;
}

Execution Execution::prefix(std::size_t actions) const {
    if (actions > action_count()) {
        throw std::out_of_range("prefix longer than execution");
    }
    Execution e = *this;
    e.symbols_.resize(2 * actions + 1);
    return e;
}

std::string Execution::str() const {
    std::string out;
    for (const auto& s : symbols_) {
        if (!out.empty()) {
            out += ' ';
        }
        out += s;
    }
    return out;
}

const char* to_string(TraceError::Kind kind) {
    switch (kind) {
    case TraceError::Kind::NoInitialMatch: return "NoInitialMatch";
    case TraceError::Kind::DeadTrace: return "DeadTrace";
    case TraceError::Kind::AmbiguousTrace: return "AmbiguousTrace";
    case TraceError::Kind::ActionNotOffered: return "ActionNotOffered";
    }
    return "unknown";
}

TraceResult trace_world(const Execution& execution, const World& world) {
    std::vector<TraceBranch> frontier;
    for (auto s : world.initial_indices()) {
        if (world.obs(s) == execution.observation(0)) {
            merge_branch(frontier, {s, {s}});
        }
    }
    if (frontier.empty()) {
        throw TraceError(TraceError::Kind::NoInitialMatch, 0,
                         "no initial world state is labelled '" + execution.observation(0) + "'");
    }
    for (std::size_t i = 0; i < execution.action_count(); ++i) {
        const auto& u = execution.action(i);
        const auto& y = execution.observation(i + 1);
        std::vector<TraceBranch> next;
        for (const auto& b : frontier) {
            for (auto t : world.successors(b.state, u)) {
                if (world.obs(t) != y) {
                    continue;
                }
                TraceBranch nb{t, b.path, b.ambiguous};
                nb.path.push_back(t);
                merge_branch(next, std::move(nb));
            }
        }
        if (next.empty()) {
            throw TraceError(TraceError::Kind::DeadTrace, i + 1,
                             "no world edge takes '" + u + "' to a state labelled '" + y + "'");
        }
        frontier = std::move(next);
    }
    return finish_trace(frontier, world, execution.action_count());
}

TraceResult trace_plan(const Execution& execution, const Plan& plan) {
    std::vector<TraceBranch> frontier;
    for (auto p0 : plan.initial_indices()) {
        for (auto p : plan.successors(p0, execution.observation(0))) {
            merge_branch(frontier, {p, {p0, p}});
        }
    }
    if (frontier.empty()) {
        throw TraceError(TraceError::Kind::NoInitialMatch, 0,
                         "no initial plan state accepts '" + execution.observation(0) + "'");
    }
    for (std::size_t i = 0; i < execution.action_count(); ++i) {
        const auto& u = execution.action(i);
        const auto& y = execution.observation(i + 1);
        bool offered = false;
        std::vector<TraceBranch> next;
        for (const auto& b : frontier) {
            if (plan.label(b.state).count(u) == 0) {
                continue;
            }
            offered = true;
            for (auto t : plan.successors(b.state, y)) {
                TraceBranch nb{t, b.path, b.ambiguous};
                nb.path.push_back(t);
                merge_branch(next, std::move(nb));
            }
        }
        if (!offered) {
            throw TraceError(TraceError::Kind::ActionNotOffered, i,
                             "action '" + u + "' is not offered by the current plan state");
        }
        if (next.empty()) {
            throw TraceError(TraceError::Kind::DeadTrace, i + 1,
                             "no plan edge accepts '" + y + "' after '" + u + "'");
        }
        frontier = std::move(next);
    }
    return finish_trace(frontier, plan, execution.action_count());
}

ScopeReport check_scope(const World& world) {
    ScopeReport report;
    report.single_goal = world.goals().size() == 1;
    if (!report.single_goal) {
        report.problems.push_back("world must have exactly one goal state, found " +
                                  std::to_string(world.goals().size()));
    }
    report.all_initial = world.initial().size() == world.size();
    if (!report.all_initial) {
        report.problems.push_back("every world state must be initial");
    }
    std::map<Observation, StateId> seen;
    report.fully_observable = true;
    for (const auto& s : world.states()) {
        auto [it, inserted] = seen.emplace(s.obs, s.id);
        if (!inserted) {
            report.fully_observable = false;
            report.problems.push_back("states '" + it->second + "' and '" + s.id +
                                      "' share observation '" + s.obs + "'");
        }
    }
    return report;
}

} // namespace actsense
