#include <gtest/gtest.h>

#include "actsense/progress.hpp"
#include "support.hpp"

using namespace actsense;

namespace {

ProgressMeasure measure(std::map<StateId, long> values) { return ProgressMeasure{std::move(values)}; }

std::set<std::pair<StateId, StateId>> conflict_pairs(const std::vector<CrossoverConflict>& conflicts) {
    std::set<std::pair<StateId, StateId>> out;
    for (const auto& c : conflicts) {
        out.insert({c.state_a, c.state_b});
    }
    return out;
}

// True iff the chain's world traces, composed, put `a` before `b`.
bool chain_orders(const std::vector<Execution>& chain, const StateId& a, const StateId& b, const Plan& plan,
                  const World& world) {
    auto lang = joint_language(plan, world);
    StateId current = a;
    for (const auto& e : chain) {
        if (lang.executions.count(e) == 0) {
            return false;
        }
        auto path = trace_world(e, world).path;
        auto from = std::find(path.begin(), path.end(), current);
        if (from == path.end()) {
            return false;
        }
        current = path.back();
        if (std::find(from + 1, path.end(), b) != path.end()) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST(Operative, CombinedPlanUnionsBothBranches) {
    auto ops = operative_action_set(support::w7_plan("combined"), support::w7_world());
    OperativeActionSet expected{{"A", {"E", "SE"}}, {"B", {"E", "W"}}, {"C", {"SW", "W"}}, {"D", {"SE", "SW"}},
                                {"E", {"E", "NE"}}, {"F", {"E"}},      {"G", {}}};
    EXPECT_EQ(ops, expected);
    auto z = operative_action_set(support::w7_plan("z"), support::w7_world());
    auto s = operative_action_set(support::w7_plan("s"), support::w7_world());
    EXPECT_TRUE(operative_subset(z, ops));
    EXPECT_TRUE(operative_subset(s, ops));
    EXPECT_FALSE(operative_subset(ops, z));
    EXPECT_FALSE(operative_subset(z, s));
}

TEST(Operative, RequiresSolution) {
    auto w = support::l3_world();
    Plan broken({{"init", {}}, {"q", {"m"}}, {"term", {}}}, {"init"}, {"term"}, {"m"}, {"a"},
                {{"init", "q", {"a"}}});
    EXPECT_THROW(operative_action_set(broken, w), NotASolution);
    EXPECT_THROW(compute_progress_measure(broken, w), NotASolution);
}

TEST(ComesBefore, L3IsAChain) {
    auto cb = comes_before(support::l3_plan(), support::l3_world());
    EXPECT_EQ(cb.relation, (std::set<std::pair<StateId, StateId>>{{"s_a", "s_b"}, {"s_a", "s_g"}, {"s_b", "s_g"}}));
    EXPECT_TRUE(cb.acyclic());
    EXPECT_TRUE(cb.contains("s_a", "s_g"));
    EXPECT_FALSE(cb.contains("s_g", "s_a"));
}

TEST(Measure, L3Canonical) {
    auto g = compute_progress_measure(support::l3_plan(), support::l3_world());
    EXPECT_EQ(g, measure({{"s_a", 2}, {"s_b", 1}, {"s_g", 0}}));
    EXPECT_EQ(g.max_value(), 2);
    EXPECT_EQ(g.lift({"s_a", "s_b"}), 2);
    EXPECT_EQ(g.lift({}), 0);
    EXPECT_TRUE(verify_progress_measure(g, support::l3_plan(), support::l3_world()).ok);
}

TEST(Measure, W7PurePlans) {
    auto w = support::w7_world();
    EXPECT_EQ(compute_progress_measure(support::w7_plan("backchained"), w),
              measure({{"A", 2}, {"B", 2}, {"C", 2}, {"D", 1}, {"E", 2}, {"F", 1}, {"G", 0}}));
    EXPECT_EQ(compute_progress_measure(support::w7_plan("z"), w),
              measure({{"A", 6}, {"B", 5}, {"C", 4}, {"D", 3}, {"E", 2}, {"F", 1}, {"G", 0}}));
    EXPECT_EQ(compute_progress_measure(support::w7_plan("s"), w),
              measure({{"A", 2}, {"B", 3}, {"C", 4}, {"D", 1}, {"E", 2}, {"F", 1}, {"G", 0}}));
}

TEST(Measure, VerifyReportsViolatedCondition) {
    auto p = support::l3_plan();
    auto w = support::l3_world();
    EXPECT_EQ(verify_progress_measure(measure({{"s_a", 2}, {"s_b", 1}}), p, w).violated, "coverage");
    EXPECT_EQ(verify_progress_measure(measure({{"s_a", 2}, {"s_b", -1}, {"s_g", 0}}), p, w).violated, "range");
    EXPECT_EQ(verify_progress_measure(measure({{"s_a", 2}, {"s_b", 0}, {"s_g", 0}}), p, w).violated, "a");
    EXPECT_EQ(verify_progress_measure(measure({{"s_a", 2}, {"s_b", 1}, {"s_g", 1}}), p, w).violated, "b");
    auto c = verify_progress_measure(measure({{"s_a", 1}, {"s_b", 1}, {"s_g", 0}}), p, w);
    EXPECT_EQ(c.violated, "c");
    ASSERT_TRUE(c.witness.has_value());
    EXPECT_EQ(c.witness->first.str(), "a");
    EXPECT_EQ(c.witness->second.str(), "a m b");
    // Any strictly decreasing assignment works, not only the canonical one.
    EXPECT_TRUE(verify_progress_measure(measure({{"s_a", 7}, {"s_b", 3}, {"s_g", 0}}), p, w).ok);
}

TEST(Crossovers, CombinedPlanHasDECrossover) {
    auto plan = support::w7_plan("combined");
    auto world = support::w7_world();
    auto conflicts = find_crossovers(plan, world);
    EXPECT_EQ(conflict_pairs(conflicts),
              (std::set<std::pair<StateId, StateId>>{{"A", "B"}, {"A", "C"}, {"B", "C"}, {"D", "E"}}));
    for (const auto& c : conflicts) {
        EXPECT_TRUE(chain_orders(c.witness_1, c.state_a, c.state_b, plan, world)) << c.state_a << c.state_b;
        EXPECT_TRUE(chain_orders(c.witness_2, c.state_b, c.state_a, plan, world)) << c.state_a << c.state_b;
        if (c.state_a == "D") {
            ASSERT_EQ(c.witness_1.size(), 1u);
            ASSERT_EQ(c.witness_2.size(), 1u);
            EXPECT_EQ(c.witness_1[0].str(), "d SW e");
            EXPECT_EQ(c.witness_2[0].str(), "e NE d");
        }
    }
    EXPECT_FALSE(comes_before(plan, world).acyclic());
    try {
        compute_progress_measure(plan, world);
        FAIL();
    } catch (const CrossoverError& e) {
        EXPECT_EQ(conflict_pairs(e.conflicts()), conflict_pairs(conflicts));
    }
}

TEST(Crossovers, PurePlansAreCrossoverFree) {
    auto world = support::w7_world();
    for (const auto* name : {"backchained", "z", "s"}) {
        EXPECT_TRUE(find_crossovers(support::w7_plan(name), world).empty()) << name;
    }
}

// Checked against an exhaustive search over all small measures.
TEST(MeasureExistence, MeasureExistsIffNoCrossover) {
    support::RandomWorldOptions small;
    small.max_states = 4;
    small.max_actions = 3;
    for (unsigned seed = 0; seed < 150; ++seed) {
        std::mt19937 rng(seed);
        auto world = support::random_world(rng, small);
        auto plan = support::random_solving_plan(rng, world);
        bool crossover_free = find_crossovers(plan, world).empty();
        auto brute = support::brute_force_measure(plan, world, static_cast<long>(world.size()));
        EXPECT_EQ(crossover_free, brute.has_value()) << "seed " << seed;
        if (crossover_free) {
            auto g = compute_progress_measure(plan, world);
            EXPECT_TRUE(verify_progress_measure(g, plan, world).ok) << "seed " << seed;
        } else {
            EXPECT_THROW(compute_progress_measure(plan, world), CrossoverError) << "seed " << seed;
        }
    }
}
