#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "actsense/model.hpp"
#include "actsense/progress.hpp"

namespace actsense {

/// Observation/action pairs (y, u) where u makes progress from the state
/// labelled y. `domain` holds the observations a sensor must cover: those of
/// non-goal states.
struct ConeRelation {
    std::set<std::pair<Observation, Action>> pairs;
    ObservationSet domain;

    bool relates(const Observation& y, const Action& u) const { return pairs.count({y, u}) != 0; }
    // c(y): actions paired with y.
    ActionSet actions_for(const Observation& y) const;
    // Progress cone of u: observations paired with u.
    ObservationSet cone(const Action& u) const;
    // Domain observations with no paired action.
    ObservationSet uncovered() const;
    bool covers() const { return uncovered().empty(); }

    friend auto operator<=>(const ConeRelation&, const ConeRelation&) = default;
};

// Pairs (y, u) for every world action u available at the state labelled y
// whose outcomes all have strictly smaller g. Throws InvalidMeasure unless g
// passes verify_progress_measure.
ConeRelation cone_relation(const ProgressMeasure& g, const Plan& plan, const World& world);

// The sub-relation using only actions the plan actually takes there.
ConeRelation operative_cone_relation(const ProgressMeasure& g, const Plan& plan, const World& world);

struct SingletonSensor {
    std::map<Observation, Action> action;

    friend auto operator<=>(const SingletonSensor&, const SingletonSensor&) = default;
};

struct PermissiveSensor {
    std::map<Observation, ActionSet> actions;

    friend auto operator<=>(const PermissiveSensor&, const PermissiveSensor&) = default;
};

/// Lazily walks the product of c(y) over the domain in lexicographic order
/// (observations sorted, actions sorted, last observation varying fastest),
/// so the i-th sensor is a stable identifier.
class SingletonSensorStream {
public:
    // Throws NotACovering.
    explicit SingletonSensorStream(const ConeRelation& relation);

    std::optional<SingletonSensor> next();
    // Product of |c(y)|, saturating at UINTMAX_MAX.
    std::uintmax_t total() const noexcept { return total_; }

private:
    std::vector<std::pair<Observation, std::vector<Action>>> slots_;
    std::vector<std::size_t> digits_;
    std::uintmax_t total_ = 1;
    bool done_ = false;
};

SingletonSensorStream enumerate_singleton_sensors(const ConeRelation& relation);

// `selection` may omit observations; they default to the full c(y). Throws
// SelectionOutsideCone, EmptySelection, NotACovering.
PermissiveSensor permissive_sensor(const ConeRelation& relation,
                                   const std::map<Observation, ActionSet>& selection = {});

inline const std::string kTerminalCell = "y'_terminal";

/// World states relabelled by prescribed action: a traditional sensor.
struct SensorPartition {
    std::map<StateId, std::string> cell_of;

    std::map<std::string, StateSet> cells() const;
};

std::string cell_name(const Action& u);
std::string cell_name(const ActionSet& actions);

// Throws NotACovering if the sensor misses a non-goal state's observation.
SensorPartition to_partition(const SingletonSensor& sensor, const World& world);
SensorPartition to_partition(const PermissiveSensor& sensor, const World& world);

// World states the physical sensor cannot tell apart.
struct IndistinguishabilityConstraint {
    std::vector<StateSet> classes;
};

struct Realizability {
    bool realizable = true;
    std::optional<std::pair<StateId, StateId>> violating_pair;
};

// True iff no constraint class holds states from different cells. Throws
// PartitionMismatch when the constraint is not a partition of the same
// state set.
Realizability is_realizable(const SensorPartition& partition,
                            const IndistinguishabilityConstraint& constraint);

// One cone relation per distinct relation over the CLIP representatives.
struct SensorFamily {
    OperativeActionSet representative;
    ProgressMeasure measure;
    ConeRelation relation;
    ConeRelation operative_relation;
};

// Throws NotASolution.
std::vector<SensorFamily> all_sensors(const Plan& plan, const World& world);

} // namespace actsense
