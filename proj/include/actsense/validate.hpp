#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "actsense/model.hpp"

namespace actsense {

struct ProductNode {
    std::size_t plan;
    std::size_t world;

    friend auto operator<=>(const ProductNode&, const ProductNode&) = default;
};

struct ProductTransition {
    Action action;
    Observation obs;
    std::size_t target;
};

// The first observation hooks an initial plan state's successor to an
// initial world state.
struct ProductEntry {
    Observation obs;
    std::size_t target;
};

/// Synchronized product of a plan and a world, restricted to the pairs some
/// joint-execution reaches.
///
/// Nodes are numbered in breadth-first discovery order with entries sorted
/// by observation and transitions sorted by (action, observation, target), so
/// shortest_execution() gives the minimal, lexicographically first
/// execution reaching each node. Local defects (an unavailable action, an
/// unaccepted observation) are recorded per node instead of being turned
/// into transitions.
class ProductGraph {
public:
    struct Defects {
        // Offered actions with no world edge at the node's world state.
        std::vector<Action> unsafe;
        // (action, observation) outcomes the plan state has no edge for.
        std::vector<std::pair<Action, Observation>> unreceptive;
    };

    ProductGraph(const Plan& plan, const World& world);

    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<ProductNode>& nodes() const noexcept { return nodes_; }
    const ProductNode& node(std::size_t n) const { return nodes_.at(n); }
    std::optional<std::size_t> find(const ProductNode& node) const;

    std::span<const ProductEntry> entries() const noexcept { return entries_; }
    std::span<const ProductTransition> transitions(std::size_t n) const { return out_.at(n); }
    const Execution& shortest_execution(std::size_t n) const { return reach_.at(n); }
    const Defects& defects(std::size_t n) const { return defects_.at(n); }

    // Initial world observations no initial plan state accepts.
    const std::vector<Observation>& uncovered_initial() const noexcept { return uncovered_; }

    const Plan& plan() const noexcept { return *plan_; }
    const World& world() const noexcept { return *world_; }

private:
    const Plan* plan_;
    const World* world_;
    std::vector<ProductNode> nodes_;
    std::vector<ProductEntry> entries_;
    std::vector<std::vector<ProductTransition>> out_;
    std::vector<Execution> reach_;
    std::vector<Defects> defects_;
    std::vector<Observation> uncovered_;
};

// Throws AlphabetMismatch if the plan mentions actions or observations the
// world does not declare.
ProductGraph product_graph(const Plan& plan, const World& world);

struct CheckResult {
    bool ok = true;
    std::optional<Execution> counterexample;
    std::string reason;
};

struct FinitenessResult {
    bool finite = true;
    // Execution that enters a product cycle and goes around it once.
    std::optional<Execution> witness;
    // (plan state, world state) pairs along the cycle.
    std::vector<std::pair<StateId, StateId>> cycle;
};

CheckResult is_safe(const Plan& plan, const World& world);
CheckResult is_receptive(const Plan& plan, const World& world);
FinitenessResult is_finite_on(const Plan& plan, const World& world);

struct SolutionReport {
    bool safe = false;
    bool receptive = false;
    bool finite = false;
    bool reaches_goal = false;
    bool covers_initial = false;
    bool verdict = false;
    std::optional<Execution> counterexample;
    std::string reason;
};

// Throws ScopeViolation when check_scope(world) fails.
SolutionReport solves(const Plan& plan, const World& world);

// Same checks as solves() on an already built product; no scope check.
SolutionReport evaluate_product(const ProductGraph& product);

struct JointLanguage {
    std::set<Execution> executions;
    // Executions reaching a terminating plan state at a goal world state.
    std::set<Execution> maximal;
};

// Throws NotFinite when the product has a cycle.
JointLanguage joint_language(const Plan& plan, const World& world);

using Solver = std::function<SolutionReport(const Plan&, const World&)>;

struct OracleReport {
    SolutionReport oracle;
    SolutionReport solver;
    // The enumeration hit the length bound; only `finite` and `verdict` are
    // determined by the oracle in that case.
    bool bound_exceeded = false;
    std::size_t bound = 0;
    std::size_t executions_enumerated = 0;
    std::vector<std::string> mismatches;

    bool agree() const noexcept { return mismatches.empty(); }
};

/// Recomputes the solution verdict by enumerating executions symbol by
/// symbol, up to |plan| * |world| + 1 actions, and compares it with `solver`.
OracleReport oracle_check(const Plan& plan, const World& world, const Solver& solver = solves);

} // namespace actsense
