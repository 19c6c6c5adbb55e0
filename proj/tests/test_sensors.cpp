#include <gtest/gtest.h>

#include "actsense/sensors.hpp"
#include "support.hpp"

using namespace actsense;

namespace {

using Pairs = std::set<std::pair<Observation, Action>>;

ConeRelation relation_of(const std::string& plan_name) {
    auto world = support::w7_world();
    auto plan = support::w7_plan(plan_name);
    return cone_relation(compute_progress_measure(plan, world), plan, world);
}

ConeRelation operative_relation_of(const std::string& plan_name) {
    auto world = support::w7_world();
    auto plan = support::w7_plan(plan_name);
    return operative_cone_relation(compute_progress_measure(plan, world), plan, world);
}

std::vector<SingletonSensor> drain(const ConeRelation& c) {
    std::vector<SingletonSensor> out;
    auto stream = enumerate_singleton_sensors(c);
    while (auto s = stream.next()) {
        out.push_back(*s);
    }
    return out;
}

IndistinguishabilityConstraint cd_constraint() { return {{{"A"}, {"B"}, {"C", "D"}, {"E"}, {"F"}, {"G"}}}; }

} // namespace

TEST(Cones, L3) {
    auto plan = support::l3_plan();
    auto world = support::l3_world();
    auto c = cone_relation(compute_progress_measure(plan, world), plan, world);
    EXPECT_EQ(c.pairs, (Pairs{{"a", "m"}, {"b", "m"}}));
    EXPECT_EQ(c.domain, (ObservationSet{"a", "b"}));
    EXPECT_TRUE(c.actions_for("g").empty());
    EXPECT_EQ(c.cone("m"), (ObservationSet{"a", "b"}));
    EXPECT_TRUE(c.covers());
}

TEST(Cones, W7Backchained) {
    EXPECT_EQ(relation_of("backchained").pairs,
              (Pairs{{"a", "SE"}, {"b", "S"}, {"c", "SW"}, {"d", "SE"}, {"e", "E"}, {"e", "NE"}, {"f", "E"}}));
}

TEST(Cones, W7ZPlanIncludesNonOperativeProgress) {
    auto c = relation_of("z");
    EXPECT_EQ(c.pairs, (Pairs{{"a", "E"},
                              {"a", "SE"},
                              {"b", "E"},
                              {"b", "S"},
                              {"c", "SW"},
                              {"d", "S"},
                              {"d", "SE"},
                              {"d", "SW"},
                              {"e", "E"},
                              {"f", "E"}}));
    auto op = operative_relation_of("z");
    EXPECT_EQ(op.pairs,
              (Pairs{{"a", "E"}, {"b", "E"}, {"c", "SW"}, {"d", "SW"}, {"e", "E"}, {"f", "E"}}));
    EXPECT_NE(c, op);
}

TEST(Cones, RejectsInvalidMeasure) {
    auto plan = support::l3_plan();
    auto world = support::l3_world();
    ProgressMeasure flat{{{"s_a", 1}, {"s_b", 1}, {"s_g", 0}}};
    EXPECT_THROW(cone_relation(flat, plan, world), InvalidMeasure);
}

TEST(Singleton, L3HasExactlyOne) {
    auto plan = support::l3_plan();
    auto world = support::l3_world();
    auto sensors = drain(cone_relation(compute_progress_measure(plan, world), plan, world));
    ASSERT_EQ(sensors.size(), 1u);
    EXPECT_EQ(sensors[0].action, (std::map<Observation, Action>{{"a", "m"}, {"b", "m"}}));
}

TEST(Singleton, ProductCountAndLexicographicOrder) {
    ConeRelation c{{{"y1", "p"}, {"y1", "q"}, {"y2", "r"}, {"y2", "s"}, {"y2", "t"}}, {"y1", "y2"}};
    auto stream = enumerate_singleton_sensors(c);
    EXPECT_EQ(stream.total(), 6u);
    auto sensors = drain(c);
    ASSERT_EQ(sensors.size(), 6u);
    EXPECT_EQ(sensors[0].action, (std::map<Observation, Action>{{"y1", "p"}, {"y2", "r"}}));
    EXPECT_EQ(sensors[1].action, (std::map<Observation, Action>{{"y1", "p"}, {"y2", "s"}}));
    EXPECT_EQ(sensors[3].action, (std::map<Observation, Action>{{"y1", "q"}, {"y2", "r"}}));
    EXPECT_TRUE(std::is_sorted(sensors.begin(), sensors.end()));
}

TEST(Singleton, NotACovering) {
    ConeRelation c{{{"y1", "p"}}, {"y1", "y2"}};
    EXPECT_FALSE(c.covers());
    EXPECT_EQ(c.uncovered(), ObservationSet{"y2"});
    EXPECT_THROW(enumerate_singleton_sensors(c), NotACovering);
}

TEST(Singleton, W7CountsMatchProduct) {
    EXPECT_EQ(enumerate_singleton_sensors(relation_of("backchained")).total(), 2u);
    EXPECT_EQ(drain(relation_of("backchained")).size(), 2u);
    EXPECT_EQ(enumerate_singleton_sensors(relation_of("z")).total(), 12u);
    EXPECT_EQ(drain(relation_of("z")).size(), 12u);
}

TEST(Permissive, DefaultIsMaximal) {
    auto plan = support::l3_plan();
    auto world = support::l3_world();
    auto c = cone_relation(compute_progress_measure(plan, world), plan, world);
    auto s = permissive_sensor(c);
    EXPECT_EQ(s.actions, (std::map<Observation, ActionSet>{{"a", {"m"}}, {"b", {"m"}}}));
    auto z = relation_of("z");
    auto full = permissive_sensor(z);
    for (const auto& y : z.domain) {
        EXPECT_EQ(full.actions.at(y), z.actions_for(y));
    }
}

TEST(Permissive, SelectionValidation) {
    auto z = relation_of("z");
    auto s = permissive_sensor(z, {{"d", {"SW"}}});
    EXPECT_EQ(s.actions.at("d"), ActionSet{"SW"});
    EXPECT_EQ(s.actions.at("a"), (ActionSet{"E", "SE"}));
    EXPECT_THROW(permissive_sensor(z, {{"d", {"N"}}}), SelectionOutsideCone);
    EXPECT_THROW(permissive_sensor(z, {{"g", {"E"}}}), SelectionOutsideCone);
    EXPECT_THROW(permissive_sensor(z, {{"d", {}}}), EmptySelection);
}

TEST(Partition, L3SingletonSensor) {
    auto p = to_partition(SingletonSensor{{{"a", "m"}, {"b", "m"}}}, support::l3_world());
    EXPECT_EQ(p.cells(), (std::map<std::string, StateSet>{{"y'_m", {"s_a", "s_b"}}, {kTerminalCell, {"s_g"}}}));
    EXPECT_THROW(to_partition(SingletonSensor{{{"a", "m"}}}, support::l3_world()), NotACovering);
}

TEST(Partition, PermissiveCellNames) {
    auto p = to_partition(permissive_sensor(relation_of("z")), support::w7_world());
    EXPECT_EQ(p.cell_of.at("A"), "y'_{E,SE}");
    EXPECT_EQ(p.cell_of.at("G"), kTerminalCell);
}

TEST(Realizable, ZPlanVersusBackchainedUnderCD) {
    auto world = support::w7_world();
    auto z = drain(operative_relation_of("z"));
    ASSERT_EQ(z.size(), 1u);
    auto zp = to_partition(z[0], world);
    EXPECT_EQ(zp.cell_of.at("C"), zp.cell_of.at("D"));
    EXPECT_TRUE(is_realizable(zp, cd_constraint()).realizable);

    auto back = drain(operative_relation_of("backchained"));
    ASSERT_EQ(back.size(), 1u);
    auto bp = to_partition(back[0], world);
    EXPECT_NE(bp.cell_of.at("C"), bp.cell_of.at("D"));
    auto r = is_realizable(bp, cd_constraint());
    EXPECT_FALSE(r.realizable);
    ASSERT_TRUE(r.violating_pair.has_value());
    EXPECT_EQ(*r.violating_pair, (std::pair<StateId, StateId>{"C", "D"}));
}

TEST(Realizable, DiscriminatingConstraintAlwaysRealizable) {
    auto world = support::w7_world();
    IndistinguishabilityConstraint all;
    for (const auto& s : world.states()) {
        all.classes.push_back({s.id});
    }
    for (const auto& s : drain(relation_of("z"))) {
        EXPECT_TRUE(is_realizable(to_partition(s, world), all).realizable);
    }
}

TEST(Realizable, PartitionMismatch) {
    auto world = support::w7_world();
    auto p = to_partition(drain(relation_of("z"))[0], world);
    EXPECT_THROW(is_realizable(p, {{{"A", "B"}}}), PartitionMismatch);
    EXPECT_THROW(is_realizable(p, {{{"A", "B", "C", "D", "E", "F", "G", "X"}}}), PartitionMismatch);
    EXPECT_THROW(is_realizable(p, {{{"A", "B", "C"}, {"C", "D", "E", "F", "G"}}}), PartitionMismatch);
}

TEST(Realizable, InvariantUnderRelabelling) {
    // Renaming cells consistently does not change the verdict.
    auto world = support::w7_world();
    auto p = to_partition(drain(operative_relation_of("backchained"))[0], world);
    SensorPartition renamed;
    for (const auto& [s, cell] : p.cell_of) {
        renamed.cell_of[s] = "#" + cell;
    }
    EXPECT_EQ(is_realizable(p, cd_constraint()).realizable, is_realizable(renamed, cd_constraint()).realizable);
}

TEST(AllSensors, CrossoverFreeGivesOneRelation) {
    auto families = all_sensors(support::w7_plan("z"), support::w7_world());
    ASSERT_EQ(families.size(), 1u);
    EXPECT_EQ(families[0].relation, relation_of("z"));
}

TEST(AllSensors, CombinedCoversSAndZFamilies) {
    auto world = support::w7_world();
    auto families = all_sensors(support::w7_plan("combined"), world);
    EXPECT_GE(families.size(), 2u);
    auto contains_sensor = [&](const std::string& name) {
        auto ops = operative_action_set(support::w7_plan(name), world);
        return std::any_of(families.begin(), families.end(), [&](const SensorFamily& f) {
            for (const auto& [state, acts] : ops) {
                auto v = world.index(state);
                for (const auto& u : acts) {
                    if (!world.is_goal(v) && !f.relation.relates(world.obs(v), u)) {
                        return false;
                    }
                }
            }
            return true;
        });
    };
    EXPECT_TRUE(contains_sensor("z"));
    EXPECT_TRUE(contains_sensor("s"));
}

TEST(Soundness, EverySingletonSensorReachesGoal) {
    auto world = support::w7_world();
    for (const auto* name : {"backchained", "z", "s", "combined"}) {
        for (const auto& f : all_sensors(support::w7_plan(name), world)) {
            std::uintmax_t product = 1;
            for (const auto& y : f.relation.domain) {
                product *= f.relation.actions_for(y).size();
            }
            auto stream = enumerate_singleton_sensors(f.relation);
            EXPECT_EQ(stream.total(), product);
            std::uintmax_t n = 0;
            while (auto s = stream.next()) {
                ++n;
                EXPECT_TRUE(support::policy_reaches_goal(s->action, world, f.measure.max_value())) << name;
            }
            EXPECT_EQ(n, product);
        }
    }
}

TEST(Monotonicity, OperativeSensorsAreValidForFullRelation) {
    auto full = relation_of("z");
    for (const auto& s : drain(operative_relation_of("z"))) {
        for (const auto& [y, u] : s.action) {
            EXPECT_TRUE(full.relates(y, u));
        }
    }
}
