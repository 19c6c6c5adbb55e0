#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "actsense/errors.hpp"

namespace actsense {

// Identifiers are opaque strings compared by value.
using StateId = std::string;
using Observation = std::string;
using Action = std::string;

using StateSet = std::set<StateId>;
using ActionSet = std::set<Action>;
using ObservationSet = std::set<Observation>;

struct WorldState {
    StateId id;
    Observation obs;

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct WorldEdge {
    StateId from;
    StateId to;
    ActionSet actions;

    friend bool operator==(const WorldEdge&, const WorldEdge&) = default;
};

struct PlanState {
    StateId id;
    ActionSet actions;

    friend bool operator==(const PlanState&, const PlanState&) = default;
};

struct PlanEdge {
    StateId from;
    StateId to;
    ObservationSet observations;

    friend bool operator==(const PlanEdge&, const PlanEdge&) = default;
};

// One labelled hop of the expansion view: edges carrying label sets are
// flattened into (label, target) pairs.
template <class Label>
struct Step {
    Label label;
    std::size_t target;

    friend auto operator<=>(const Step&, const Step&) = default;
};

/// A planning problem: observations on vertices, action sets on edges.
///
/// States are stored sorted by id, so state indices follow the canonical
/// order. Construction checks the structural invariants and throws
/// InvariantViolation naming the offending field; the scope restrictions
/// (single goal, every state initial, injective observations) are left to
/// check_scope.
class World {
public:
    World(std::vector<WorldState> states, StateSet initial, StateSet goals,
          ObservationSet observations, ActionSet actions,
          std::vector<WorldEdge> edges);

    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<WorldState>& states() const noexcept { return states_; }
    const std::vector<WorldEdge>& edges() const noexcept { return edges_; }
    const StateSet& initial() const noexcept { return initial_; }
    const StateSet& goals() const noexcept { return goals_; }
    const ObservationSet& observations() const noexcept { return observations_; }
    const ActionSet& actions() const noexcept { return actions_; }

    std::optional<std::size_t> find(std::string_view id) const;
    // Throws std::out_of_range for unknown ids.
    std::size_t index(std::string_view id) const;

    const StateId& id(std::size_t s) const { return states_.at(s).id; }
    const Observation& obs(std::size_t s) const { return states_.at(s).obs; }
    bool is_initial(std::size_t s) const { return initial_.count(id(s)) != 0; }
    bool is_goal(std::size_t s) const { return goals_.count(id(s)) != 0; }

    std::span<const std::size_t> initial_indices() const noexcept { return initial_idx_; }
    std::span<const std::size_t> goal_indices() const noexcept { return goal_idx_; }

    // Sorted by (action, target).
    std::span<const Step<Action>> transitions(std::size_t s) const { return out_.at(s); }
    std::vector<std::size_t> successors(std::size_t s, const Action& u) const;
    ActionSet available_actions(std::size_t s) const;
    std::vector<std::size_t> states_with_obs(const Observation& y) const;

private:
    std::vector<WorldState> states_;
    StateSet initial_;
    StateSet goals_;
    ObservationSet observations_;
    ActionSet actions_;
    std::vector<WorldEdge> edges_;

    std::unordered_map<std::string, std::size_t> by_id_;
    std::vector<std::size_t> initial_idx_;
    std::vector<std::size_t> goal_idx_;
    std::vector<std::vector<Step<Action>>> out_;
};

/// A plan: action sets on vertices, observation sets on edges.
///
/// Only initial and terminating states carry the empty action set, and
/// terminating states have no outgoing edges. Distinct states may share an
/// action label; that is how plans carry memory.
class Plan {
public:
    Plan(std::vector<PlanState> states, StateSet initial, StateSet terminating,
         ActionSet actions, ObservationSet observations,
         std::vector<PlanEdge> edges);

    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<PlanState>& states() const noexcept { return states_; }
    const std::vector<PlanEdge>& edges() const noexcept { return edges_; }
    const StateSet& initial() const noexcept { return initial_; }
    const StateSet& terminating() const noexcept { return terminating_; }
    const ActionSet& actions() const noexcept { return actions_; }
    const ObservationSet& observations() const noexcept { return observations_; }

    std::optional<std::size_t> find(std::string_view id) const;
    std::size_t index(std::string_view id) const;

    const StateId& id(std::size_t p) const { return states_.at(p).id; }
    const ActionSet& label(std::size_t p) const { return states_.at(p).actions; }
    bool is_initial(std::size_t p) const { return initial_.count(id(p)) != 0; }
    bool is_terminating(std::size_t p) const { return terminating_.count(id(p)) != 0; }

    std::span<const std::size_t> initial_indices() const noexcept { return initial_idx_; }

    // Sorted by (observation, target).
    std::span<const Step<Observation>> transitions(std::size_t p) const { return out_.at(p); }
    std::vector<std::size_t> successors(std::size_t p, const Observation& y) const;

private:
    std::vector<PlanState> states_;
    StateSet initial_;
    StateSet terminating_;
    ActionSet actions_;
    ObservationSet observations_;
    std::vector<PlanEdge> edges_;

    std::unordered_map<std::string, std::size_t> by_id_;
    std::vector<std::size_t> initial_idx_;
    std::vector<std::vector<Step<Observation>>> out_;
};

/// Alternating observation/action sequence y0 u1 y1 ... un yn.
class Execution {
public:
    explicit Execution(Observation first);

    // Whitespace separated symbols; must hold an odd number of tokens.
    static Execution parse(std::string_view text);

    Execution& append(Action u, Observation y);
    Execution extended(const Action& u, const Observation& y) const;
    Execution prefix(std::size_t actions) const;

    std::size_t action_count() const noexcept { return symbols_.size() / 2; }
    std::size_t observation_count() const noexcept { return action_count() + 1; }

    // observation(0) is y0; action(i) is taken between observation(i) and
    // observation(i + 1).
    const Observation& observation(std::size_t i) const { return symbols_.at(2 * i); }
    const Action& action(std::size_t i) const { return symbols_.at(2 * i + 1); }
    const Observation& last_observation() const { return symbols_.back(); }

    const std::vector<std::string>& symbols() const noexcept { return symbols_; }
    std::string str() const;

    friend auto operator<=>(const Execution&, const Execution&) = default;

private:
    std::vector<std::string> symbols_;
};

struct TraceResult {
    StateId reached;
    // For worlds: one entry per observation. For plans the path starts at the
    // initial plan state, so it has one more entry.
    std::vector<StateId> path;
};

class TraceError : public Error {
public:
    enum class Kind { NoInitialMatch, DeadTrace, AmbiguousTrace, ActionNotOffered };

    TraceError(Kind kind, std::size_t step, const std::string& message)
        : Error(message), kind_(kind), step_(step) {}

    Kind kind() const noexcept { return kind_; }
    // Index of the observation at which tracing failed.
    std::size_t step() const noexcept { return step_; }

private:
    Kind kind_;
    std::size_t step_;
};

const char* to_string(TraceError::Kind kind);

TraceResult trace_world(const Execution& execution, const World& world);
TraceResult trace_plan(const Execution& execution, const Plan& plan);

struct ScopeReport {
    bool single_goal = false;
    bool all_initial = false;
    bool fully_observable = false;
    std::vector<std::string> problems;

    bool passed() const noexcept { return single_goal && all_initial && fully_observable; }
};

ScopeReport check_scope(const World& world);

} // namespace actsense
