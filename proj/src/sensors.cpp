#include "actsense/sensors.hpp"

#include <algorithm>
#include <limits>

#include "actsense/clip.hpp"

namespace actsense {

ActionSet ConeRelation::actions_for(const Observation& y) const {
    ActionSet out;
    for (auto it = pairs.lower_bound({y, Action{}}); it != pairs.end() && it->first == y; ++it) {
        out.insert(it->second);
    }
    return out;
}

ObservationSet ConeRelation::cone(const Action& u) const {
    ObservationSet out;
    for (const auto& [y, a] : pairs) {
        if (a == u) {
            out.insert(y);
        }
    }
    return out;
}

ObservationSet ConeRelation::uncovered() const {
    ObservationSet out;
    for (const auto& y : domain) {
        if (actions_for(y).empty()) {
            out.insert(y);
        }
    }
    return out;
}

namespace {

ConeRelation build_cones(const ProgressMeasure& g, const Plan& plan, const World& world,
                         const OperativeActionSet* restrict_to) {
    auto check = verify_progress_measure(g, plan, world);
    if (!check.ok) {
        throw InvalidMeasure("invalid progress measure (" + check.violated + "): " + check.reason);
    }
    ConeRelation c;
    for (std::size_t v = 0; v < world.size(); ++v) {
        if (world.is_goal(v)) {
            continue;
        }
        c.domain.insert(world.obs(v));
        for (const auto& u : world.available_actions(v)) {
            if (restrict_to && restrict_to->at(world.id(v)).count(u) == 0) {
                continue;
            }
            auto outcomes = world.successors(v, u);
            bool progress = std::all_of(outcomes.begin(), outcomes.end(), [&](std::size_t w) {
                return g(world.id(w)) < g(world.id(v));
            });
            if (progress) {
                c.pairs.emplace(world.obs(v), u);
            }
        }
    }
    return c;
}

} // namespace

ConeRelation cone_relation(const ProgressMeasure& g, const Plan& plan, const World& world) {
    return build_cones(g, plan, world, nullptr);
}

ConeRelation operative_cone_relation(const ProgressMeasure& g, const Plan& plan, const World& world) {
    auto ops = operative_action_set(plan, world);
    return build_cones(g, plan, world, &ops);
}

SingletonSensorStream::SingletonSensorStream(const ConeRelation& relation) {
    auto missing = relation.uncovered();
    if (!missing.empty()) {
        throw NotACovering("no progress-making action for observation '" + *missing.begin() + "'");
    }
    for (const auto& y : relation.domain) {
        auto acts = relation.actions_for(y);
        std::vector<Action> sorted(acts.begin(), acts.end());
        if (total_ > std::numeric_limits<std::uintmax_t>::max() / sorted.size()) {
            total_ = std::numeric_limits<std::uintmax_t>::max();
        } else if (total_ != std::numeric_limits<std::uintmax_t>::max()) {
            total_ *= sorted.size();
        }
        slots_.emplace_back(y, std::move(sorted));
    }
    digits_.assign(slots_.size(), 0);
}

std::optional<SingletonSensor> SingletonSensorStream::next() {
    if (done_) {
        return std::nullopt;
    }
    SingletonSensor s;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        s.action[slots_[i].first] = slots_[i].second[digits_[i]];
    }
    // Advance the odometer; the last slot varies fastest.
    std::size_t i = slots_.size();
    while (i > 0) {
        --i;
        if (++digits_[i] < slots_[i].second.size()) {
            return s;
        }
        digits_[i] = 0;
    }
    done_ = true;
    return s;
}

SingletonSensorStream enumerate_singleton_sensors(const ConeRelation& relation) {
    return SingletonSensorStream(relation);
}

PermissiveSensor permissive_sensor(const ConeRelation& relation,
                                   const std::map<Observation, ActionSet>& selection) {
    for (const auto& [y, _] : selection) {
        if (relation.domain.count(y) == 0) {
            throw SelectionOutsideCone("observation '" + y + "' is not in the sensor domain");
        }
    }
    PermissiveSensor sensor;
    for (const auto& y : relation.domain) {
        auto cone = relation.actions_for(y);
        auto it = selection.find(y);
        if (it == selection.end()) {
            if (cone.empty()) {
                throw NotACovering("no progress-making action for observation '" + y + "'");
            }
            sensor.actions[y] = std::move(cone);
            continue;
        }
        if (it->second.empty()) {
            throw EmptySelection("empty selection for observation '" + y + "'");
        }
        for (const auto& u : it->second) {
            if (cone.count(u) == 0) {
                throw SelectionOutsideCone("action '" + u + "' makes no progress at '" + y + "'");
            }
        }
        sensor.actions[y] = it->second;
    }
    return sensor;
}

std::map<std::string, StateSet> SensorPartition::cells() const {
    std::map<std::string, StateSet> out;
    for (const auto& [state, cell] : cell_of) {
        out[cell].insert(state);
    }
    return out;
}

std::string cell_name(const Action& u) { return "y'_" + u; }

std::string cell_name(const ActionSet& actions) {
    std::string name = "y'_{";
    bool first = true;
    for (const auto& u : actions) {
        name += (first ? "" : ",") + u;
        first = false;
    }
    return name + "}";
}

namespace {

template <class Map, class Namer>
SensorPartition partition_by(const Map& prescription, const World& world, Namer namer) {
    SensorPartition partition;
    for (std::size_t v = 0; v < world.size(); ++v) {
        if (world.is_goal(v)) {
            partition.cell_of[world.id(v)] = kTerminalCell;
            continue;
        }
        auto it = prescription.find(world.obs(v));
        if (it == prescription.end()) {
            throw NotACovering("sensor has no output for observation '" + world.obs(v) + "'");
        }
        partition.cell_of[world.id(v)] = namer(it->second);
    }
    return partition;
}

} // namespace

SensorPartition to_partition(const SingletonSensor& sensor, const World& world) {
    return partition_by(sensor.action, world, [](const Action& u) { return cell_name(u); });
}

SensorPartition to_partition(const PermissiveSensor& sensor, const World& world) {
    return partition_by(sensor.actions, world, [](const ActionSet& s) { return cell_name(s); });
}

Realizability is_realizable(const SensorPartition& partition,
                            const IndistinguishabilityConstraint& constraint) {
    StateSet seen;
    for (const auto& cls : constraint.classes) {
        if (cls.empty()) {
            throw PartitionMismatch("constraint has an empty class");
        }
        for (const auto& s : cls) {
            if (!seen.insert(s).second) {
                throw PartitionMismatch("state '" + s + "' appears in two constraint classes");
            }
            if (partition.cell_of.count(s) == 0) {
                throw PartitionMismatch("constraint state '" + s + "' is not in the partition");
            }
        }
    }
    for (const auto& [s, _] : partition.cell_of) {
        if (seen.count(s) == 0) {
            throw PartitionMismatch("partition state '" + s + "' is not covered by the constraint");
        }
    }
    Realizability result;
    for (const auto& cls : constraint.classes) {
        const auto& first = *cls.begin();
        for (const auto& s : cls) {
            if (partition.cell_of.at(s) != partition.cell_of.at(first)) {
                result.realizable = false;
                result.violating_pair = std::make_pair(first, s);
                return result;
            }
        }
    }
    return result;
}

std::vector<SensorFamily> all_sensors(const Plan& plan, const World& world) {
    std::vector<SensorFamily> families;
    for (const auto& rep : clip(plan, world)) {
        auto relation = cone_relation(rep.measure, rep.plan, world);
        bool duplicate = std::any_of(families.begin(), families.end(),
                                     [&](const SensorFamily& f) { return f.relation == relation; });
        if (duplicate) {
            continue;
        }
        families.push_back({rep.operative, rep.measure, std::move(relation),
                            operative_cone_relation(rep.measure, rep.plan, world)});
    }
    return families;
}

} // namespace actsense
