#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "actsense/model.hpp"
#include "actsense/progress.hpp"
#include "actsense/sensors.hpp"

namespace actsense::support {

std::filesystem::path fixture(const std::string& name);

World w7_world();
Plan w7_plan(const std::string& name); // backchained, z, s, combined
World l3_world();
Plan l3_plan();

struct RandomWorldOptions {
    std::size_t min_states = 2;
    std::size_t max_states = 6;
    std::size_t max_actions = 4;
    // Chance that a further (state, action) pair gets edges.
    double extra_edge_prob = 0.4;
    // Chance that an extra (state, action) has a second outcome.
    double nondeterminism_prob = 0.3;
};

// In-scope world: single goal, every state initial, injective observations.
// A hidden ordering guarantees every state can be driven to the goal.
World random_world(std::mt19937& rng, const RandomWorldOptions& options = {});

// Plan made of 1-3 memoryless branches, each built from a random
// backchaining order, with optional cross-branch switching. Always a
// solution of `world`.
Plan random_solving_plan(std::mt19937& rng, const World& world);

// Arbitrary plan over the world's alphabet; usually not a solution.
Plan random_plan(std::mt19937& rng, const World& world);

// A solving plan with one random defect injected; may or may not solve.
Plan mutated_plan(std::mt19937& rng, const World& world);

// Memoryless policy rollout over every nondeterministic branch: true iff
// every run from every initial state reaches the goal within `max_steps`
// actions, with each prescribed action available.
bool policy_reaches_goal(const std::map<Observation, Action>& policy, const World& world, long max_steps);

// Exhaustive search for any vertex measure g in [0, bound] passing
// verify_progress_measure; small worlds only.
std::optional<ProgressMeasure> brute_force_measure(const Plan& plan, const World& world, long bound);

} // namespace actsense::support
