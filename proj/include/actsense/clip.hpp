#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "actsense/model.hpp"
#include "actsense/progress.hpp"

namespace actsense {

// Plan-layer vertex: the world state it stands for and every plan state
// that acts on that world state.
struct IGraphVertex {
    StateId world_state;
    StateSet plan_states;
    bool goal = false;
};

// Initiating layer -> plan layer.
struct IGraphInitEdge {
    Observation obs;
    std::size_t target;

    friend auto operator<=>(const IGraphInitEdge&, const IGraphInitEdge&) = default;
};

// Plan layer -> world layer. The world-layer vertex is identified with the
// (source, action) pair, so this also names it.
struct IGraphActionEdge {
    std::size_t source;
    Action action;

    friend auto operator<=>(const IGraphActionEdge&, const IGraphActionEdge&) = default;
};

// World layer -> plan layer.
struct IGraphOutcomeEdge {
    IGraphActionEdge from;
    Observation obs;
    std::size_t target;

    friend auto operator<=>(const IGraphOutcomeEdge&, const IGraphOutcomeEdge&) = default;
};

/// Plan-world interaction graph.
///
/// Plan states acting on the same world state share one plan-layer vertex,
/// so the plan layer is indexed by world state (sorted by id). Vertex
/// indices are stable across without().
class IGraph {
public:
    IGraph(std::vector<IGraphVertex> vertices, std::vector<IGraphInitEdge> init_edges,
           std::vector<IGraphActionEdge> action_edges, std::vector<IGraphOutcomeEdge> outcome_edges,
           ActionSet actions, ObservationSet observations);

    const std::vector<IGraphVertex>& vertices() const noexcept { return vertices_; }
    const std::vector<IGraphInitEdge>& init_edges() const noexcept { return init_edges_; }
    const std::vector<IGraphActionEdge>& action_edges() const noexcept { return action_edges_; }
    const std::vector<IGraphOutcomeEdge>& outcome_edges() const noexcept { return outcome_edges_; }
    const ActionSet& actions() const noexcept { return actions_; }
    const ObservationSet& observations() const noexcept { return observations_; }

    std::optional<std::size_t> vertex_of(const StateId& world_state) const;
    ActionSet actions(std::size_t v) const;
    std::vector<std::size_t> outcomes(const IGraphActionEdge& edge) const;

    OperativeActionSet operative() const;
    ComesBefore comes_before() const;

    // The subgraph with these plan->world edges (and their world-layer
    // vertices and outcome edges) removed.
    IGraph without(const std::set<IGraphActionEdge>& removed) const;

private:
    std::vector<IGraphVertex> vertices_;
    std::vector<IGraphInitEdge> init_edges_;
    std::vector<IGraphActionEdge> action_edges_;
    std::vector<IGraphOutcomeEdge> outcome_edges_;
    ActionSet actions_;
    ObservationSet observations_;
};

// Throws NotASolution.
IGraph build_igraph(const Plan& plan, const World& world);

// Plan->world edges leaving a state of `cycle` for a state of `cycle`, from
// states with more than one outgoing action (or from the goal).
std::set<IGraphActionEdge> candidate_edges(const IGraph& igraph, const std::vector<StateId>& cycle);

// Memoryless plan with one state per plan-layer vertex. Plan state ids are
// "q:<world state>" plus a single initial state "init".
Plan representative_plan(const IGraph& igraph);

struct Representative {
    IGraph igraph;
    Plan plan;
    OperativeActionSet operative;
    ProgressMeasure measure;
};

struct ClipOptions {
    std::size_t max_representatives = std::numeric_limits<std::size_t>::max();
};

struct ClipStats {
    std::size_t nodes_expanded = 0;
    std::size_t leaves_accepted = 0;
    std::size_t pruned = 0;
};

// Representatives sorted by operative action set, one per distinct set.
// Throws NotASolution, NoRepresentative.
std::vector<Representative> clip(const Plan& plan, const World& world,
                                 const ClipOptions& options = {}, ClipStats* stats = nullptr);

// Throws NotASolution if either plan does not solve the world.
bool is_derived_from(const Plan& candidate, const Plan& base, const World& world);

// Memoryless plan taking actions(v) at each world state v: one plan state
// per non-goal world state ("m:<id>"), a terminating state "term" for the
// goal and an initial state "init".
Plan materialize(const OperativeActionSet& actions, const World& world);

// Every pointwise restriction of `base` (non-goal states keep at least one
// action) whose materialized plan solves the world and has a progress
// measure. Throws CapExceeded when there are more than `cap` restrictions.
std::set<OperativeActionSet> solving_restrictions(const OperativeActionSet& base, const World& world,
                                                  std::size_t cap = std::size_t{1} << 20);

// solving_restrictions of the input plan's operative action set.
std::set<OperativeActionSet> oracle_all_subplans(const Plan& plan, const World& world,
                                                 std::size_t cap = std::size_t{1} << 20);

// Union of solving_restrictions over the representatives' operative sets:
// every sub-plan reachable from CLIP's output.
std::set<OperativeActionSet> derivable_subplans(const std::vector<Representative>& representatives,
                                                const World& world, std::size_t cap = std::size_t{1} << 20);

} // namespace actsense
