#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "actsense/model.hpp"
#include "actsense/validate.hpp"

namespace actsense {

// Per world state, the actions some joint-execution actually takes there.
// Every world state has an entry, possibly empty.
using OperativeActionSet = std::map<StateId, ActionSet>;

// Throws NotASolution unless solves(plan, world).verdict.
OperativeActionSet operative_action_set(const Plan& plan, const World& world);

// True iff lhs(v) is a subset of rhs(v) for every v (missing entries are empty).
bool operative_subset(const OperativeActionSet& lhs, const OperativeActionSet& rhs);

struct ComesBefore {
    // (a, b): some joint-execution visits a and later b, closed transitively.
    std::set<std::pair<StateId, StateId>> relation;

    bool contains(const StateId& a, const StateId& b) const {
        return relation.count({a, b}) != 0;
    }
    // No state comes before itself.
    bool acyclic() const;
};

ComesBefore comes_before(const Plan& plan, const World& world);

/// Two world states the plan visits in both orders.
///
/// Each witness is a chain of joint-executions whose visitation orders,
/// composed, put the first state before the second. It is a single execution
/// whenever one execution visits both states in that order. A state that
/// returns to itself is reported with state_a == state_b.
struct CrossoverConflict {
    StateId state_a;
    StateId state_b;
    std::vector<Execution> witness_1;
    std::vector<Execution> witness_2;
};

std::vector<CrossoverConflict> find_crossovers(const Plan& plan, const World& world);

class CrossoverError : public Error {
public:
    explicit CrossoverError(std::vector<CrossoverConflict> conflicts);

    const std::vector<CrossoverConflict>& conflicts() const noexcept { return conflicts_; }

private:
    std::vector<CrossoverConflict> conflicts_;
};

/// Vertex progress measure g with its lift to state sets.
struct ProgressMeasure {
    std::map<StateId, long> values;

    long operator()(const StateId& v) const { return values.at(v); }
    // phi(S) = max over members; 0 for the empty set.
    long lift(const StateSet& states) const;
    long max_value() const;

    friend bool operator==(const ProgressMeasure&, const ProgressMeasure&) = default;
};

// Longest comes-before path from each state to the goal. Throws
// CrossoverError when comes-before has a cycle.
ProgressMeasure compute_progress_measure(const Plan& plan, const World& world);

struct MeasureCheck {
    bool ok = true;
    // "coverage", "range", "a", "b" or "c" for the first failed condition.
    std::string violated;
    std::string reason;
    // For condition (c): the prefix pair that fails to decrease.
    std::optional<std::pair<Execution, Execution>> witness;
};

MeasureCheck verify_progress_measure(const ProgressMeasure& g, const Plan& plan,
                                     const World& world);

} // namespace actsense
